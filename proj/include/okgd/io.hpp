#pragma once

#include "detector.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "synth.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace okgd::io {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view cell, std::size_t line_no)
{
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) throw DataError("empty cell on line " + std::to_string(line_no));
    cell = cell.substr(b, e - b + 1);
    double x = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw DataError("non-numeric cell '" + std::string(cell) + "' on line " + std::to_string(line_no));
    }
    return x;
}

inline std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// --- stream CSV -----------------------------------------------------------

struct Stream
{
    std::vector<long> times;
    std::vector<Frame> frames;
    std::vector<int> dims; // per node
};

/// Header `t,v0_d0,v0_d1,...,vK_d0,...`; one row per frame.
inline void write_stream_csv(std::ostream& out, std::span<const Frame> frames,
                             std::span<const long> times = {})
{
    if (frames.empty()) throw std::invalid_argument("no frames to write");
    out << 't';
    for (std::size_t v = 0; v < frames.front().size(); ++v) {
        for (Index d = 0; d < frames.front()[v].size(); ++d) out << ",v" << v << "_d" << d;
    }
    out << '\n';
    for (std::size_t i = 0; i < frames.size(); ++i) {
        out << (times.empty() ? static_cast<long>(i + 1) : times[i]);
        for (const auto& obs : frames[i]) {
            for (Index d = 0; d < obs.size(); ++d) out << ',' << format_double(obs(d));
        }
        out << '\n';
    }
}

inline Stream read_stream_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw DataError("stream file is empty");

    const auto header = split_csv(line);
    if (trim(header[0]) != "t") throw DataError("stream header must start with 't'");
    Stream s;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        int v = -1;
        int d = -1;
        char tail = 0;
        if (std::sscanf(name.c_str(), "v%d_d%d%c", &v, &d, &tail) != 2 || v < 0 || d < 0) {
            throw DataError("bad stream column name '" + name + "'");
        }
        if (v == static_cast<int>(s.dims.size()) && d == 0) {
            s.dims.push_back(1);
        } else if (!s.dims.empty() && v == static_cast<int>(s.dims.size()) - 1 && d == s.dims.back()) {
            ++s.dims.back();
        } else {
            throw DataError("stream columns out of order at '" + name + "'");
        }
    }
    if (s.dims.empty()) throw DataError("stream header names no node columns");

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
        }
        const double tv = parse_double(cells[0], line_no);
        const long t = static_cast<long>(tv);
        if (static_cast<double>(t) != tv) throw DataError("non-integer time on line " + std::to_string(line_no));
        if (!s.times.empty() && t <= s.times.back()) {
            throw DataError("time is not strictly increasing on line " + std::to_string(line_no));
        }
        Frame f;
        std::size_t c = 1;
        for (int dim : s.dims) {
            Observation obs(dim);
            for (int d = 0; d < dim; ++d) obs(d) = parse_double(cells[c++], line_no);
            f.push_back(std::move(obs));
        }
        s.times.push_back(t);
        s.frames.push_back(std::move(f));
    }
    return s;
}

inline Stream read_stream_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stream file: " + path);
    return read_stream_csv(in);
}

/// Replaces each channel by its AR(1) residual y_t - phi y_{t-1}, with phi the
/// no-intercept least-squares lag-1 coefficient fitted on the first
/// `fit_frames` frames. The first frame has no predecessor and is dropped.
inline Stream ar1_residuals(const Stream& s, std::size_t fit_frames)
{
    if (s.frames.size() < 2) throw DataError("AR(1) filtering needs at least two frames");
    fit_frames = std::min(std::max<std::size_t>(fit_frames, 2), s.frames.size());
    Stream out;
    out.dims = s.dims;
    std::vector<Eigen::VectorXd> phi;
    for (std::size_t v = 0; v < s.dims.size(); ++v) {
        Eigen::VectorXd num = Eigen::VectorXd::Zero(s.dims[v]);
        Eigen::VectorXd den = Eigen::VectorXd::Zero(s.dims[v]);
        for (std::size_t i = 1; i < fit_frames; ++i) {
            num.array() += s.frames[i][v].array() * s.frames[i - 1][v].array();
            den.array() += s.frames[i - 1][v].array().square();
        }
        phi.push_back((den.array() > 0.0).select(num.array() / den.array(), 0.0).matrix());
    }
    for (std::size_t i = 1; i < s.frames.size(); ++i) {
        Frame f;
        for (std::size_t v = 0; v < s.dims.size(); ++v) {
            f.push_back((s.frames[i][v].array() - phi[v].array() * s.frames[i - 1][v].array()).matrix());
        }
        out.frames.push_back(std::move(f));
        out.times.push_back(s.times[i]);
    }
    return out;
}

/// One point per line, comma or whitespace separated; `#` lines skipped.
inline std::vector<Eigen::VectorXd> read_points(std::istream& in)
{
    std::vector<Eigen::VectorXd> pts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::string norm = t;
        for (char& ch : norm) if (ch == ',') ch = ' ';
        std::istringstream ls(norm);
        std::vector<double> vals;
        std::string cell;
        while (ls >> cell) vals.push_back(parse_double(cell, line_no));
        if (!pts.empty() && static_cast<Index>(vals.size()) != pts.front().size()) {
            throw DataError("coordinate row " + std::to_string(line_no) + " has inconsistent dimension");
        }
        pts.push_back(Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Index>(vals.size())));
    }
    return pts;
}

inline std::vector<Eigen::VectorXd> read_points(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open coordinates file: " + path);
    return read_points(in);
}

// --- ground truth ----------------------------------------------------------

struct GroundTruth
{
    std::optional<long> tau;
    std::vector<Index> changed;
    bool operator==(const GroundTruth&) const = default;
};

/// `tau=<int>` (omitted when there is no change) and `changed=<comma list>`.
inline void write_ground_truth(std::ostream& out, const GroundTruth& gt)
{
    if (gt.tau) out << "tau=" << *gt.tau << '\n';
    out << "changed=";
    for (std::size_t i = 0; i < gt.changed.size(); ++i) out << (i ? "," : "") << gt.changed[i];
    out << '\n';
}

inline GroundTruth read_ground_truth(std::istream& in)
{
    GroundTruth gt;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw DataError("ground truth line " + std::to_string(line_no) + " lacks '='");
        const std::string key = t.substr(0, eq);
        const std::string val = t.substr(eq + 1);
        if (key == "tau") {
            gt.tau = static_cast<long>(parse_double(val, line_no));
        } else if (key == "changed") {
            if (!val.empty())
                for (auto cell : split_csv(val)) gt.changed.push_back(static_cast<Index>(parse_double(cell, line_no)));
        } else {
            throw DataError("unknown ground truth key '" + key + "'");
        }
    }
    return gt;
}

// --- detector output -------------------------------------------------------

/// `t,g_norm,eps,alarm,g_0,...,g_{N-1}`, one row per scored step.
inline void write_score_trace(std::ostream& out, const DetectionResult& res, Index n_nodes)
{
    out << "t,g_norm,eps,alarm";
    for (Index v = 0; v < n_nodes; ++v) out << ",g_" << v;
    out << '\n';
    for (const auto& r : res.trace) {
        out << r.t << ',' << format_double(r.g_norm) << ',' << format_double(r.eps) << ',' << (r.alarm ? 1 : 0);
        for (Index v = 0; v < r.g.size(); ++v) out << ',' << format_double(r.g(v));
        out << '\n';
    }
}

struct TraceRow
{
    long t = 0;
    double g_norm = 0.0;
    double eps = 0.0;
    bool alarm = false;
    std::vector<double> g;
};

inline std::vector<TraceRow> read_score_trace(std::istream& in)
{
    std::vector<TraceRow> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t n_cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (n_cols == 0) {
            if (cells.size() < 4 || trim(cells[0]) != "t") throw DataError("not a score trace header");
            n_cols = cells.size();
            continue;
        }
        if (cells.size() != n_cols) throw DataError("ragged score trace row on line " + std::to_string(line_no));
        TraceRow r;
        r.t = static_cast<long>(parse_double(cells[0], line_no));
        r.g_norm = parse_double(cells[1], line_no);
        r.eps = parse_double(cells[2], line_no);
        r.alarm = parse_double(cells[3], line_no) != 0.0;
        for (std::size_t c = 4; c < cells.size(); ++c) r.g.push_back(parse_double(cells[c], line_no));
        rows.push_back(std::move(r));
    }
    return rows;
}

/// key=value summary of a run.
inline void write_summary(std::ostream& out, const DetectionResult& res)
{
    out << "detected=" << (res.detected ? "true" : "false") << '\n';
    out << "tau_hat=" << (res.tau_hat ? std::to_string(*res.tau_hat) : "none") << '\n';
    out << "alarms=";
    for (std::size_t i = 0; i < res.alarms.size(); ++i) out << (i ? "," : "") << res.alarms[i];
    out << '\n';
    out << "scored_steps=" << res.trace.size() << '\n';
    out << "lambda=" << format_double(res.lambda) << '\n';
    out << "dictionary_sizes=";
    for (std::size_t i = 0; i < res.dictionary_sizes.size(); ++i) out << (i ? "," : "") << res.dictionary_sizes[i];
    out << '\n';
}

/// Per-run rows followed by one summary row per variant:
/// `variant,row,seed,detected,false_alarm,tau_hat,delay,mean_delay,std_delay,n_false_alarms,precision,delay_budget`.
inline void write_bench_report(std::ostream& out, const evaluation::BenchSpec& spec, const evaluation::BenchResult& res)
{
    auto opt = [](const auto& o) { return o ? format_double(static_cast<double>(*o)) : std::string(); };
    out << "variant,row,seed,detected,false_alarm,tau_hat,delay,mean_delay,std_delay,n_false_alarms,precision,delay_budget\n";
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
        const auto& name = spec.variants[i].name;
        for (const auto& r : res.reports[i]) {
            out << name << ",run," << r.seed << ',' << (r.detected ? 1 : 0) << ',' << (r.false_alarm ? 1 : 0)
                << ',' << opt(r.tau_hat) << ',' << opt(r.delay) << ",,,,,\n";
        }
        const auto& s = res.summaries[i];
        out << name << ",summary,,,,,," << opt(s.mean_delay) << ',' << opt(s.std_delay) << ',' << s.n_false_alarms
            << ',' << format_double(s.precision) << ',' << s.delay_budget << '\n';
    }
}

// --- run configuration -----------------------------------------------------

struct GraphSource
{
    enum class Kind { edge_list, sbm, knn };
    Kind kind = Kind::edge_list;
    std::string path; // edge list, or coordinates for knn
    Index n_clusters = 4;
    Index cluster_size = 20;
    double p_intra = 0.5;
    double p_inter = 0.01;
    std::uint64_t seed = 0;
    Index k = 5;
    bool operator==(const GraphSource&) const = default;
};

struct StreamSource
{
    enum class Kind { csv, synthetic };
    Kind kind = Kind::csv;
    std::string path;
    bool ar1 = false;
    synth::ScenarioSpec scenario;
    bool operator==(const StreamSource&) const = default;
};

struct RunConfig
{
    DetectorConfig detector;
    std::optional<GraphSource> graph;
    std::optional<StreamSource> stream;
    std::vector<int> dims; // expected per-node dimensions; empty: inferred
    std::string trace_path;
    std::string summary_path;
    bool continue_after_alarm = false;

    bool operator==(const RunConfig& o) const
    {
        const auto& a = detector;
        const auto& b = o.detector;
        return a.lambda == b.lambda && a.gamma == b.gamma && a.mu0 == b.mu0 && a.burn_in == b.burn_in &&
               a.n_pre == b.n_pre && a.n_post == b.n_post && a.c == b.c && a.kappa == b.kappa &&
               a.threshold_warmup == b.threshold_warmup && a.seed == b.seed && a.kernel == b.kernel &&
               a.bandwidth == b.bandwidth && graph == o.graph && stream == o.stream && dims == o.dims &&
               trace_path == o.trace_path && summary_path == o.summary_path &&
               continue_after_alarm == o.continue_after_alarm;
    }
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view section)
{
    if (!j.is_object()) throw ConfigError("section '" + std::string(section) + "' must be an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in section '" + std::string(section) + "'");
    }
}

template <class T>
void get_to(const json& j, const char* key, T& out)
{
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

// `"auto"` (or absent) leaves the optional unset.
template <class T>
void get_auto(const json& j, const char* key, std::optional<T>& out)
{
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_string() && v.get<std::string>() == "auto") {
        out.reset();
        return;
    }
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number or \"auto\"");
    out = v.get<T>();
}

template <class T>
json auto_value(const std::optional<T>& v)
{
    return v ? json(*v) : json("auto");
}

inline synth::ScenarioSpec scenario_from_json(const json& j)
{
    check_keys(j, {"type", "scenario", "n_clusters", "cluster_size", "p_intra", "p_inter", "tau", "horizon",
                   "n_changed", "changed_cluster", "cluster_labels", "targets", "seed"},
               "stream");
    synth::ScenarioSpec s;
    try {
        if (j.contains("scenario")) s.kind = synth::parse_scenario_kind(j.at("scenario").get<std::string>());
        if (j.contains("cluster_labels")) {
            s.cluster_labels.clear();
            for (const auto& l : j.at("cluster_labels")) s.cluster_labels.push_back(synth::parse_cluster_label(l.get<std::string>()));
        }
        if (j.contains("targets")) {
            for (const auto& [from, to] : j.at("targets").items()) {
                s.targets[static_cast<std::size_t>(synth::parse_cluster_label(from))] =
                    synth::parse_cluster_label(to.get<std::string>());
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    get_to(j, "n_clusters", s.n_clusters);
    get_to(j, "cluster_size", s.cluster_size);
    get_to(j, "p_intra", s.p_intra);
    get_to(j, "p_inter", s.p_inter);
    get_to(j, "tau", s.tau);
    get_to(j, "horizon", s.horizon);
    get_to(j, "n_changed", s.n_changed);
    get_to(j, "changed_cluster", s.changed_cluster);
    get_to(j, "seed", s.seed);
    return s;
}

inline json scenario_to_json(const synth::ScenarioSpec& s)
{
    json labels = json::array();
    for (auto l : s.cluster_labels) labels.push_back(std::string(synth::to_string(l)));
    json targets = json::object();
    for (int i = 0; i < 4; ++i) {
        targets[std::string(synth::to_string(static_cast<synth::ClusterLabel>(i)))] =
            std::string(synth::to_string(s.targets[static_cast<std::size_t>(i)]));
    }
    return json{{"type", "synthetic"},
                {"scenario", std::string(synth::to_string(s.kind))},
                {"n_clusters", s.n_clusters},
                {"cluster_size", s.cluster_size},
                {"p_intra", s.p_intra},
                {"p_inter", s.p_inter},
                {"tau", s.tau},
                {"horizon", s.horizon},
                {"n_changed", s.n_changed},
                {"changed_cluster", s.changed_cluster},
                {"cluster_labels", labels},
                {"targets", targets},
                {"seed", s.seed}};
}

} // namespace detail

/// Parses the JSON run configuration. Every section and key is optional;
/// unknown keys are rejected.
inline RunConfig parse_run_config(const std::string& text)
{
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    detail::check_keys(root, {"detector", "graph", "stream", "dims", "output", "continue"}, "root");

    RunConfig cfg;
    if (root.contains("detector")) {
        const auto& d = root.at("detector");
        detail::check_keys(d, {"lambda", "gamma", "mu0", "burn_in", "n_pre", "n_post", "c", "kappa",
                               "threshold_warmup", "seed", "kernel", "bandwidth"},
                           "detector");
        auto& dc = cfg.detector;
        detail::get_auto(d, "lambda", dc.lambda);
        detail::get_to(d, "gamma", dc.gamma);
        detail::get_to(d, "mu0", dc.mu0);
        detail::get_to(d, "burn_in", dc.burn_in);
        detail::get_to(d, "n_pre", dc.n_pre);
        detail::get_to(d, "n_post", dc.n_post);
        detail::get_auto(d, "c", dc.c);
        detail::get_to(d, "kappa", dc.kappa);
        detail::get_auto(d, "threshold_warmup", dc.threshold_warmup);
        detail::get_to(d, "seed", dc.seed);
        detail::get_auto(d, "bandwidth", dc.bandwidth);
        if (d.contains("kernel")) {
            try {
                dc.kernel = parse_kernel_family(d.at("kernel").get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (root.contains("graph")) {
        const auto& g = root.at("graph");
        detail::check_keys(g, {"type", "path", "coords", "k", "n_clusters", "cluster_size", "p_intra", "p_inter", "seed"},
                           "graph");
        GraphSource gs;
        const std::string type = g.value("type", "edge_list");
        if (type == "edge_list") {
            gs.kind = GraphSource::Kind::edge_list;
            detail::get_to(g, "path", gs.path);
        } else if (type == "sbm") {
            gs.kind = GraphSource::Kind::sbm;
            detail::get_to(g, "n_clusters", gs.n_clusters);
            detail::get_to(g, "cluster_size", gs.cluster_size);
            detail::get_to(g, "p_intra", gs.p_intra);
            detail::get_to(g, "p_inter", gs.p_inter);
            detail::get_to(g, "seed", gs.seed);
        } else if (type == "knn") {
            gs.kind = GraphSource::Kind::knn;
            detail::get_to(g, "coords", gs.path);
            detail::get_to(g, "k", gs.k);
        } else {
            throw ConfigError("unknown graph type '" + type + "'");
        }
        cfg.graph = gs;
    }
    if (root.contains("stream")) {
        const auto& s = root.at("stream");
        StreamSource ss;
        const std::string type = s.is_object() ? s.value("type", "csv") : "";
        if (type == "csv") {
            detail::check_keys(s, {"type", "path", "ar1"}, "stream");
            ss.kind = StreamSource::Kind::csv;
            detail::get_to(s, "path", ss.path);
            detail::get_to(s, "ar1", ss.ar1);
        } else if (type == "synthetic") {
            ss.kind = StreamSource::Kind::synthetic;
            ss.scenario = detail::scenario_from_json(s);
        } else {
            throw ConfigError("unknown stream type '" + type + "'");
        }
        cfg.stream = ss;
    }
    detail::get_to(root, "dims", cfg.dims);
    if (root.contains("output")) {
        const auto& o = root.at("output");
        detail::check_keys(o, {"trace", "summary"}, "output");
        detail::get_to(o, "trace", cfg.trace_path);
        detail::get_to(o, "summary", cfg.summary_path);
    }
    detail::get_to(root, "continue", cfg.continue_after_alarm);
    return cfg;
}

inline std::string serialize_run_config(const RunConfig& cfg)
{
    using detail::json;
    const auto& d = cfg.detector;
    json root;
    root["detector"] = json{{"lambda", detail::auto_value(d.lambda)},
                            {"gamma", d.gamma},
                            {"mu0", d.mu0},
                            {"burn_in", d.burn_in},
                            {"n_pre", d.n_pre},
                            {"n_post", d.n_post},
                            {"c", detail::auto_value(d.c)},
                            {"kappa", d.kappa},
                            {"threshold_warmup", detail::auto_value(d.threshold_warmup)},
                            {"seed", d.seed},
                            {"kernel", std::string(to_string(d.kernel))},
                            {"bandwidth", detail::auto_value(d.bandwidth)}};
    if (cfg.graph) {
        const auto& g = *cfg.graph;
        switch (g.kind) {
        case GraphSource::Kind::edge_list:
            root["graph"] = json{{"type", "edge_list"}, {"path", g.path}};
            break;
        case GraphSource::Kind::sbm:
            root["graph"] = json{{"type", "sbm"},
                                 {"n_clusters", g.n_clusters},
                                 {"cluster_size", g.cluster_size},
                                 {"p_intra", g.p_intra},
                                 {"p_inter", g.p_inter},
                                 {"seed", g.seed}};
            break;
        case GraphSource::Kind::knn:
            root["graph"] = json{{"type", "knn"}, {"coords", g.path}, {"k", g.k}};
            break;
        }
    }
    if (cfg.stream) {
        const auto& s = *cfg.stream;
        if (s.kind == StreamSource::Kind::csv) {
            root["stream"] = json{{"type", "csv"}, {"path", s.path}, {"ar1", s.ar1}};
        } else {
            root["stream"] = detail::scenario_to_json(s.scenario);
        }
    }
    if (!cfg.dims.empty()) root["dims"] = cfg.dims;
    root["output"] = json{{"trace", cfg.trace_path}, {"summary", cfg.summary_path}};
    root["continue"] = cfg.continue_after_alarm;
    return root.dump(2) + "\n";
}

inline RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

/// Scenario description as a standalone replay file.
inline std::string serialize_scenario(const synth::ScenarioSpec& spec)
{
    return detail::scenario_to_json(spec).dump(2) + "\n";
}

inline synth::ScenarioSpec parse_scenario(const std::string& text)
{
    try {
        return detail::scenario_from_json(detail::json::parse(text));
    } catch (const detail::json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
}

} // namespace okgd::io
