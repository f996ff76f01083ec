// okgd command-line front end: detect, synth, bench, plot.

#include <okgd/okgd.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace okgd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

struct DetectArgs
{
    std::string config;
    std::string stream;
    std::string graph;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool continue_after_alarm = false;
    bool ar1 = false;
};

int run_detect(const DetectArgs& args)
{
    io::RunConfig cfg = args.config.empty() ? io::RunConfig{} : io::load_run_config(args.config);
    if (!args.stream.empty()) cfg.stream = io::StreamSource{io::StreamSource::Kind::csv, args.stream, false, {}};
    if (args.ar1) {
        if (!cfg.stream || cfg.stream->kind != io::StreamSource::Kind::csv) {
            throw ConfigError("--ar1 applies to CSV streams only");
        }
        cfg.stream->ar1 = true;
    }
    if (!args.graph.empty()) {
        io::GraphSource g;
        g.kind = io::GraphSource::Kind::edge_list;
        g.path = args.graph;
        cfg.graph = g;
    }
    if (!args.out.empty()) cfg.trace_path = args.out;
    if (args.seed) cfg.detector.seed = *args.seed;
    if (args.continue_after_alarm) cfg.continue_after_alarm = true;
    cfg.detector.validate();

    if (!cfg.stream) throw ConfigError("no stream given (use --stream or a config 'stream' section)");

    std::vector<Frame> frames;
    std::vector<long> times; // stream time of each frame; empty means 1, 2, ...
    std::optional<Graph> graph;
    if (cfg.stream->kind == io::StreamSource::Kind::csv) {
        io::Stream s = io::read_stream_csv(cfg.stream->path);
        if (cfg.stream->ar1) s = io::ar1_residuals(s, static_cast<std::size_t>(cfg.detector.burn_in));
        frames = std::move(s.frames);
        times = std::move(s.times);
    } else {
        synth::ScenarioSpec spec = cfg.stream->scenario;
        const auto sc = synth::make_scenario(spec);
        frames = synth::emit_frames(sc);
        graph = sc.graph.graph;
    }
    if (frames.empty()) throw DataError("stream has no frames");
    const auto n = static_cast<Index>(frames.front().size());
    if (!cfg.dims.empty()) {
        if (static_cast<Index>(cfg.dims.size()) != n) {
            throw DataError("config lists " + std::to_string(cfg.dims.size()) + " node dimensions, stream has " +
                            std::to_string(n) + " nodes");
        }
        for (Index v = 0; v < n; ++v) {
            if (frames.front()[static_cast<std::size_t>(v)].size() != cfg.dims[static_cast<std::size_t>(v)]) {
                throw DataError("node " + std::to_string(v) + " dimension differs from config");
            }
        }
    }

    if (cfg.graph) {
        const auto& g = *cfg.graph;
        switch (g.kind) {
        case io::GraphSource::Kind::edge_list:
            graph = read_edge_list(g.path, n);
            break;
        case io::GraphSource::Kind::sbm:
            graph = sample_sbm(g.n_clusters, g.cluster_size, g.p_intra, g.p_inter, g.seed).graph;
            break;
        case io::GraphSource::Kind::knn:
            graph = knn_graph(io::read_points(g.path), g.k);
            break;
        }
    }
    if (!graph) throw ConfigError("no graph given (use --graph or a config 'graph' section)");
    if (graph->n_nodes() != n) {
        throw DataError("graph has " + std::to_string(graph->n_nodes()) + " nodes, stream has " + std::to_string(n));
    }

    DetectionResult res = run(frames, *graph, cfg.detector, cfg.continue_after_alarm);
    // Report times in the stream's own t column.
    if (!times.empty()) {
        auto to_stream = [&](long t) { return times[static_cast<std::size_t>(t - 1)]; };
        for (auto& r : res.trace) r.t = to_stream(r.t);
        for (auto& a : res.alarms) a = to_stream(a);
        if (res.tau_hat) res.tau_hat = to_stream(*res.tau_hat);
    }

    if (cfg.trace_path.empty()) {
        io::write_score_trace(std::cout, res, n);
    } else {
        auto out = open_out(cfg.trace_path);
        io::write_score_trace(out, res, n);
    }
    const std::string summary_path =
        !cfg.summary_path.empty() ? cfg.summary_path : (cfg.trace_path.empty() ? "" : cfg.trace_path + ".summary");
    if (!summary_path.empty()) {
        auto out = open_out(summary_path);
        io::write_summary(out, res);
    }
    io::write_summary(std::cerr, res);
    return 0;
}

struct ScenarioArgs
{
    std::string scenario = "cluster-swap";
    std::uint64_t seed = 0;
    Index n_clusters = 4;
    Index cluster_size = 20;
    double p_intra = 0.5;
    double p_inter = 0.01;
    long tau = 500;
    long horizon = 1500;
    Index n_changed = 10;
    Index changed_cluster = -1;
    std::vector<std::string> cluster_labels;

    void add_to(CLI::App* app)
    {
        app->add_option("--scenario", scenario, "cluster-swap | cluster | random-locations | null")
            ->check(CLI::IsMember({"cluster-swap", "cluster", "random-locations", "null"}));
        app->add_option("--n-clusters", n_clusters, "SBM cluster count");
        app->add_option("--cluster-size", cluster_size, "nodes per cluster");
        app->add_option("--p-intra", p_intra, "intra-cluster edge probability");
        app->add_option("--p-inter", p_inter, "inter-cluster edge probability");
        app->add_option("--tau", tau, "change time (1-based frame index)");
        app->add_option("--horizon", horizon, "number of frames");
        app->add_option("--n-changed", n_changed, "changed nodes for random-locations");
        app->add_option("--changed-cluster", changed_cluster, "cluster that changes (-1: random)");
        app->add_option("--cluster-labels", cluster_labels, "model of each cluster, e.g. C1,C3")->delimiter(',');
    }

    synth::ScenarioSpec spec() const
    {
        synth::ScenarioSpec s;
        s.kind = synth::parse_scenario_kind(scenario);
        s.seed = seed;
        s.n_clusters = n_clusters;
        s.cluster_size = cluster_size;
        s.p_intra = p_intra;
        s.p_inter = p_inter;
        s.tau = tau;
        s.horizon = horizon;
        s.n_changed = n_changed;
        s.changed_cluster = changed_cluster;
        for (const auto& l : cluster_labels) s.cluster_labels.push_back(synth::parse_cluster_label(l));
        return s;
    }
};

int run_synth(const ScenarioArgs& args, const std::string& out_dir)
{
    synth::ScenarioSpec spec;
    try {
        spec = args.spec();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto sc = synth::make_scenario(spec);
    const auto frames = synth::emit_frames(sc);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    {
        auto out = open_out((dir / "stream.csv").string());
        io::write_stream_csv(out, frames);
    }
    {
        auto out = open_out((dir / "graph.txt").string());
        write_edge_list(out, sc.graph.graph);
    }
    {
        auto out = open_out((dir / "truth.txt").string());
        io::write_ground_truth(out, {sc.tau, sc.changed});
    }
    {
        auto out = open_out((dir / "scenario.json").string());
        out << io::serialize_scenario(spec);
    }
    std::cerr << "wrote " << sc.n_nodes() << " nodes x " << frames.size() << " frames to " << out_dir << '\n';
    return 0;
}

struct BenchArgs
{
    int seeds = 10;
    std::uint64_t first_seed = 0;
    std::vector<std::string> variants{"okgd", "okgd-nograph"};
    std::string out;
    unsigned threads = 0;
    long delay_budget = 150;
    long tolerance = 0;
    DetectorConfig detector;
    std::optional<double> c;
};

int run_bench(const ScenarioArgs& sargs, BenchArgs args)
{
    evaluation::BenchSpec spec;
    try {
        spec.scenario = sargs.spec();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    spec.detector = args.detector;
    spec.detector.c = args.c;
    spec.detector.validate();
    spec.variants.clear();
    for (const auto& v : args.variants) spec.variants.push_back(evaluation::parse_variant(v));
    spec.n_seeds = args.seeds;
    spec.first_seed = args.first_seed;
    spec.threads = args.threads;
    spec.delay_budget = args.delay_budget;
    spec.tolerance_window = args.tolerance;
    if (spec.n_seeds < 1) throw ConfigError("--seeds must be at least 1");

    const auto res = evaluation::run_bench(spec);
    if (args.out.empty()) {
        io::write_bench_report(std::cout, spec, res);
    } else {
        auto out = open_out(args.out);
        io::write_bench_report(out, spec, res);
    }
    for (std::size_t i = 0; i < spec.variants.size(); ++i) {
        const auto& s = res.summaries[i];
        std::cerr << spec.variants[i].name << ": detected " << s.n_detected << '/' << s.n_runs
                  << ", mean delay " << (s.mean_delay ? io::format_double(*s.mean_delay) : "n/a") << " (std "
                  << (s.std_delay ? io::format_double(*s.std_delay) : "n/a") << "), false alarms "
                  << s.n_false_alarms << ", precision@" << s.delay_budget << ' ' << s.precision << '\n';
    }
    return 0;
}

int run_plot(const std::string& trace_path, const std::string& prefix, std::optional<long> at)
{
    std::ifstream in(trace_path);
    if (!in) throw DataError("cannot open trace file: " + trace_path);
    const auto rows = io::read_score_trace(in);
    if (rows.empty()) throw DataError("trace has no rows");

    // Node map at the requested step, else the first alarm, else the last step.
    const io::TraceRow* pick = &rows.back();
    for (const auto& r : rows) {
        if ((at && r.t == *at) || (!at && r.alarm)) {
            pick = &r;
            break;
        }
    }
    {
        auto out = open_out(prefix + ".dat");
        out << "# t g_norm eps alarm\n";
        for (const auto& r : rows) {
            out << r.t << ' ' << io::format_double(r.g_norm) << ' ' << io::format_double(r.eps) << ' '
                << (r.alarm ? 1 : 0) << '\n';
        }
    }
    {
        auto out = open_out(prefix + "_nodes.dat");
        out << "# node g^2 at t=" << pick->t << '\n';
        for (std::size_t v = 0; v < pick->g.size(); ++v) out << v << ' ' << io::format_double(pick->g[v] * pick->g[v]) << '\n';
    }
    {
        const std::string base = fs::path(prefix).filename().string();
        auto out = open_out(prefix + ".gp");
        out << "set terminal pngcairo size 900,600\n"
            << "set output '" << base << ".png'\n"
            << "set multiplot layout 2,1\n"
            << "set xlabel 't'\nplot '" << base << ".dat' using 1:2 with lines title '||g||', '" << base
            << ".dat' using 1:3 with lines title 'eps'\n"
            << "set xlabel 'node'\nplot '" << base << "_nodes.dat' using 1:2 with boxes title 'g^2 at t=" << pick->t
            << "'\nunset multiplot\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online kernel graph change-point detector"};
    app.require_subcommand(1);

    DetectArgs dargs;
    auto* detect = app.add_subcommand("detect", "run the detector on a stream");
    detect->add_option("--config", dargs.config, "JSON run configuration");
    detect->add_option("--stream", dargs.stream, "stream CSV (overrides config)");
    detect->add_option("--graph", dargs.graph, "edge-list file (overrides config)");
    detect->add_option("--out", dargs.out, "score-trace CSV; the summary goes to <out>.summary");
    detect->add_option("--seed", dargs.seed, "detector seed (overrides config)");
    detect->add_flag("--continue", dargs.continue_after_alarm, "keep running after an alarm");
    detect->add_flag("--ar1", dargs.ar1, "replace CSV channels by AR(1) residuals");

    ScenarioArgs synth_args;
    std::string out_dir = ".";
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic scenario");
    synth_args.add_to(synth_cmd);
    synth_cmd->add_option("--seed", synth_args.seed, "scenario seed");
    synth_cmd->add_option("--out-dir", out_dir, "output directory");

    ScenarioArgs bench_scenario;
    BenchArgs bargs;
    auto* bench = app.add_subcommand("bench", "compare detector variants over seeds");
    bench_scenario.add_to(bench);
    bench->add_option("--seeds", bargs.seeds, "number of seeds");
    bench->add_option("--first-seed", bargs.first_seed, "seed of the first run");
    bench->add_option("--variants", bargs.variants, "okgd,okgd-nograph")->delimiter(',');
    bench->add_option("--out", bargs.out, "report CSV (default stdout)");
    bench->add_option("--threads", bargs.threads, "worker threads (0: all cores)");
    bench->add_option("--delay-budget", bargs.delay_budget, "max delay counted by precision");
    bench->add_option("--tolerance", bargs.tolerance, "early alarms within this window count as detections");
    bench->add_option("--bp", bargs.detector.burn_in, "burn-in length");
    bench->add_option("--n-pre", bargs.detector.n_pre, "reference window size");
    bench->add_option("--n-post", bargs.detector.n_post, "recent window size");
    bench->add_option("--gamma", bargs.detector.gamma, "ridge penalty");
    bench->add_option("--mu0", bargs.detector.mu0, "coherence threshold");
    bench->add_option("--c", bargs.c, "learning-rate constant (default 1/gamma)");
    bench->add_option("--kappa", bargs.detector.kappa, "threshold multiplier");

    std::string trace_path;
    std::string prefix = "trace";
    std::optional<long> at;
    auto* plot = app.add_subcommand("plot", "write gnuplot-ready files from a score trace");
    plot->add_option("--trace", trace_path, "score-trace CSV")->required();
    plot->add_option("--out", prefix, "output prefix");
    plot->add_option("--at", at, "time of the per-node map (default: first alarm, else last)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*detect) return run_detect(dargs);
        if (*synth_cmd) return run_synth(synth_args, out_dir);
        if (*bench) return run_bench(bench_scenario, bargs);
        if (*plot) return run_plot(trace_path, prefix, at);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
