#include "support.hpp"

#include <okgd/detector.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace okgd;
using namespace okgd::testing;

namespace {

struct Case
{
    Graph graph;
    DetectorConfig cfg;
    std::vector<Frame> frames;
};

// Small random stream with a mean shift on some nodes half way through, so
// that alarms (and hence pool gating) actually occur.
Case random_case(std::mt19937_64& rng)
{
    std::uniform_int_distribution<Index> nodes(2, 5);
    std::uniform_int_distribution<long> pre(4, 12), post(3, 10), extra(0, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Case c;
    const Index n = nodes(rng);
    c.graph = random_graph(rng, n, 0.6);
    c.cfg.n_pre = pre(rng);
    c.cfg.n_post = post(rng);
    c.cfg.burn_in = c.cfg.n_pre + extra(rng);
    c.cfg.gamma = 0.5 + 10.0 * unit(rng);
    c.cfg.mu0 = 0.2 + 0.7 * unit(rng);
    c.cfg.kappa = 1.0 + unit(rng);
    c.cfg.threshold_warmup = static_cast<long>(5 * unit(rng));
    c.cfg.seed = rng();
    if (unit(rng) < 0.3) c.cfg.lambda = 0.0;
    const long horizon = c.cfg.burn_in + c.cfg.n_post + 60;
    const long tau = c.cfg.burn_in + 30;
    for (long t = 1; t <= horizon; ++t) {
        Frame f = random_frame(rng, n);
        if (t >= tau) f[0].array() += 3.0;
        c.frames.push_back(std::move(f));
    }
    return c;
}

std::vector<Frame> null_stream(std::mt19937_64& rng, Index n, long horizon)
{
    std::vector<Frame> out;
    for (long t = 0; t < horizon; ++t) out.push_back(random_frame(rng, n));
    return out;
}

DetectorConfig small_config()
{
    DetectorConfig cfg;
    cfg.burn_in = 20;
    cfg.n_pre = 15;
    cfg.n_post = 10;
    return cfg;
}

} // namespace

TEST(DetectorConfig, DefaultsAndValidation)
{
    DetectorConfig cfg;
    EXPECT_EQ(cfg.gamma, 10.0);
    EXPECT_EQ(cfg.mu0, 0.5);
    EXPECT_EQ(cfg.burn_in, 100);
    EXPECT_EQ(cfg.n_pre, 100);
    EXPECT_EQ(cfg.n_post, 100);
    EXPECT_EQ(cfg.kappa, 1.5);
    EXPECT_EQ(cfg.warmup(), 100);
    EXPECT_DOUBLE_EQ(cfg.learning_rate_constant(), 0.1);
    cfg.c = 1.0;
    EXPECT_EQ(cfg.learning_rate_constant(), 1.0);
    EXPECT_NO_THROW(cfg.validate());

    auto bad = [](auto mutate) {
        DetectorConfig c;
        mutate(c);
        EXPECT_THROW(c.validate(), ConfigError);
    };
    bad([](DetectorConfig& c) { c.lambda = -1.0; });
    bad([](DetectorConfig& c) { c.gamma = 0.0; });
    bad([](DetectorConfig& c) { c.mu0 = 1.0; });
    bad([](DetectorConfig& c) { c.n_post = 0; });
    bad([](DetectorConfig& c) { c.burn_in = 50; });
    bad([](DetectorConfig& c) { c.c = 0.0; });
    bad([](DetectorConfig& c) { c.kappa = -1.0; });
    bad([](DetectorConfig& c) { c.threshold_warmup = -1; });
    bad([](DetectorConfig& c) { c.bandwidth = 0.0; });
}

TEST(Detector, DefaultLambdaIsTenOverAverageDegree)
{
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    EXPECT_DOUBLE_EQ(default_lambda(g), 10.0 / 1.0);
    EXPECT_EQ(default_lambda(Graph(3)), 0.0);
    EXPECT_DOUBLE_EQ(Detector(g, small_config()).lambda(), 10.0);
}

TEST(Detector, TimelineAndWindows)
{
    std::mt19937_64 rng(1);
    const auto frames = null_stream(rng, 3, 60);
    Detector det(random_graph(rng, 3, 1.0), small_config());
    EXPECT_THROW(det.step(frames[0]), std::logic_error);
    EXPECT_THROW(det.burn_in(std::span(frames).first(19)), DataError);
    det.burn_in(std::span(frames).first(20));
    EXPECT_EQ(det.time(), 20);
    EXPECT_EQ(det.pool().size(), 20u);
    for (long t = 21; t < 30; ++t) EXPECT_FALSE(det.step(frames[static_cast<std::size_t>(t - 1)]).has_value());
    const auto rec = det.step(frames[29]);
    ASSERT_TRUE(rec.has_value());
    EXPECT_EQ(rec->t, 30);
    EXPECT_EQ(det.active_post().size(), 10u);
    EXPECT_EQ(det.active_post().front(), 21);
    EXPECT_EQ(det.active_pre().size(), 15u);
    for (long s : det.active_pre()) EXPECT_TRUE(std::binary_search(det.pool().begin(), det.pool().end(), s));
    EXPECT_EQ(det.pool().back(), 20);
    det.step(frames[30]);
    EXPECT_EQ(det.pool().back(), 21);
}

TEST(Detector, DegenerateNodeAndBadFramesAreDataErrors)
{
    std::mt19937_64 rng(2);
    auto frames = null_stream(rng, 3, 40);
    auto constant = frames;
    for (auto& f : constant) f[1] = Observation::Constant(2, 4.0);
    Detector det(random_graph(rng, 3, 1.0), small_config());
    try {
        det.burn_in(std::span(constant).first(20));
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("node 1"), std::string::npos);
    }

    Detector ok(random_graph(rng, 3, 1.0), small_config());
    ok.burn_in(std::span(frames).first(20));
    Frame wrong_dim = frames[20];
    wrong_dim[0] = Observation::Zero(3);
    EXPECT_THROW(ok.step(wrong_dim), DataError);
    Frame nan = frames[20];
    nan[2](0) = std::nan("");
    EXPECT_THROW(ok.step(nan), DataError);
    Frame short_frame = frames[20];
    short_frame.pop_back();
    EXPECT_THROW(ok.step(short_frame), DataError);

    EXPECT_THROW(run(std::span(frames).first(29), random_graph(rng, 3, 1.0), small_config()), DataError);
}

TEST(Detector, SharedBandwidthSkipsMedianHeuristic)
{
    std::mt19937_64 rng(3);
    auto frames = null_stream(rng, 2, 40);
    for (auto& f : frames) f[1] = Observation::Constant(2, 4.0);
    auto cfg = small_config();
    cfg.bandwidth = 1.0;
    const auto res = run(frames, Graph(2), cfg);
    EXPECT_EQ(res.dictionary_sizes[1], 1);
}

TEST(Detector, HugeThresholdNeverAlarms)
{
    std::mt19937_64 rng(4);
    const auto frames = null_stream(rng, 4, 200);
    auto cfg = small_config();
    cfg.kappa = 1e12;
    const auto res = run(frames, random_graph(rng, 4, 0.5), cfg);
    EXPECT_FALSE(res.detected);
    EXPECT_FALSE(res.tau_hat.has_value());
    EXPECT_EQ(res.trace.size(), 200u - 29u);
}

TEST(Detector, NoAlarmDuringWarmup)
{
    std::mt19937_64 rng(5);
    const auto frames = null_stream(rng, 3, 100);
    auto cfg = small_config();
    cfg.kappa = 1e-6;
    const auto res = run(frames, random_graph(rng, 3, 0.5), cfg);
    ASSERT_TRUE(res.detected);
    EXPECT_EQ(res.trace.size(), 11u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_FALSE(res.trace[i].armed);
    EXPECT_EQ(*res.tau_hat, 30 + 10);
}

TEST(Detector, ThresholdIsRunningMeanTimesKappa)
{
    std::mt19937_64 rng(6);
    const auto frames = null_stream(rng, 3, 120);
    auto cfg = small_config();
    cfg.kappa = 1e9;
    const auto res = run(frames, random_graph(rng, 3, 0.5), cfg);
    double sum = 0.0;
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        sum += res.trace[i].g_norm;
        EXPECT_NEAR(res.trace[i].eps, 1e9 * sum / static_cast<double>(i + 1), 1e-6 * res.trace[i].eps);
        EXPECT_NEAR(res.trace[i].g_norm, res.trace[i].g.norm(), 1e-15);
    }
}

TEST(Detector, ResetAfterAlarmKeepsRecentPool)
{
    std::mt19937_64 rng(7);
    const auto frames = null_stream(rng, 3, 80);
    Detector det(random_graph(rng, 3, 0.5), small_config());
    det.burn_in(std::span(frames).first(20));
    for (std::size_t i = 20; i < 60; ++i) det.step(frames[i]);
    const auto before = det.pool();
    det.reset_after_alarm();
    EXPECT_EQ(det.pool().size(), 15u);
    EXPECT_TRUE(std::equal(det.pool().begin(), det.pool().end(), before.end() - 15));
    EXPECT_TRUE(det.active_post().empty());
    EXPECT_EQ(det.theta().flatten().squaredNorm(), 0.0);
    for (std::size_t i = 60; i < 69; ++i) EXPECT_FALSE(det.step(frames[i]).has_value());
    EXPECT_TRUE(det.step(frames[69]).has_value());
}

TEST(Detector, ContinueModeRecordsSeveralAlarms)
{
    std::mt19937_64 rng(8);
    auto frames = null_stream(rng, 3, 400);
    auto cfg = small_config();
    cfg.kappa = 1.0;
    const auto once = run(frames, random_graph(rng, 3, 0.5), cfg);
    std::mt19937_64 rng2(8);
    frames = null_stream(rng2, 3, 400);
    const auto many = run(frames, random_graph(rng2, 3, 0.5), cfg, true);
    ASSERT_TRUE(once.detected);
    EXPECT_EQ(once.alarms.size(), 1u);
    EXPECT_GT(many.alarms.size(), 1u);
    EXPECT_EQ(many.alarms.front(), *once.tau_hat);
    EXPECT_TRUE(std::is_sorted(many.alarms.begin(), many.alarms.end()));
}

// Pool guard, theta bookkeeping, window sizes and finiteness on random runs.
TEST(DetectorProperty, StateInvariantsOnRandomRuns)
{
    std::mt19937_64 rng(2024);
    int alarms = 0;
    for (int c = 0; c < 150; ++c) {
        const auto k = random_case(rng);
        Detector det(k.graph, k.cfg);
        det.burn_in(std::span(k.frames).first(static_cast<std::size_t>(k.cfg.burn_in)));
        for (std::size_t i = static_cast<std::size_t>(k.cfg.burn_in); i < k.frames.size(); ++i) {
            const auto rec = det.step(k.frames[i]);
            const long t = det.time();
            // Burn-in frames are validated by construction.
            ASSERT_LE(det.pool().back(), std::max(k.cfg.burn_in, t - k.cfg.n_post));
            for (long s : det.active_post())
                ASSERT_FALSE(std::binary_search(det.pool().begin(), det.pool().end(), s));
            ASSERT_TRUE(std::is_sorted(det.pool().begin(), det.pool().end()));
            Index total = 0;
            for (Index L : det.dictionary_sizes()) total += L;
            ASSERT_EQ(det.theta().total_size(), total);
            for (Index v = 0; v < k.graph.n_nodes(); ++v)
                ASSERT_EQ(det.theta()[v].size(), det.dictionaries()[static_cast<std::size_t>(v)].size());
            if (!rec) continue;
            ASSERT_EQ(static_cast<long>(det.active_post().size()), k.cfg.n_post);
            ASSERT_EQ(static_cast<long>(det.active_pre().size()), k.cfg.n_pre);
            for (long s : det.active_pre())
                ASSERT_TRUE(std::binary_search(det.pool().begin(), det.pool().end(), s));
            ASSERT_TRUE(rec->g.allFinite());
            ASSERT_TRUE(std::isfinite(rec->eps));
            if (rec->alarm) {
                ++alarms;
                // The alarming frame's predecessor window is not admitted.
                if (t - k.cfg.n_post > k.cfg.burn_in) ASSERT_LT(det.pool().back(), t - k.cfg.n_post);
                det.reset_after_alarm();
            }
        }
    }
    EXPECT_GT(alarms, 0);
}

TEST(DetectorProperty, SeededRunsAreBitReproducible)
{
    std::mt19937_64 rng(4048);
    for (int c = 0; c < 100; ++c) {
        const auto k = random_case(rng);
        const auto a = run(k.frames, k.graph, k.cfg, true);
        const auto b = run(k.frames, k.graph, k.cfg, true);
        ASSERT_EQ(a.trace.size(), b.trace.size());
        ASSERT_EQ(a.alarms, b.alarms);
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            ASSERT_TRUE(a.trace[i].g == b.trace[i].g);
            ASSERT_EQ(a.trace[i].eps, b.trace[i].eps);
        }
    }
}

TEST(DetectorProperty, NoGraphVariantIgnoresEdges)
{
    std::mt19937_64 rng(8096);
    for (int c = 0; c < 100; ++c) {
        auto k = random_case(rng);
        k.cfg.lambda = 0.0;
        const Graph other = random_graph(rng, k.graph.n_nodes(), 0.5);
        const auto a = run(k.frames, k.graph, k.cfg);
        const auto b = run(k.frames, other, k.cfg);
        ASSERT_EQ(a.trace.size(), b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) ASSERT_TRUE(a.trace[i].g == b.trace[i].g);
    }
}

TEST(Detector, MixedDimensionsAndLaplacianKernel)
{
    std::mt19937_64 rng(10);
    std::poisson_distribution<int> pois(5.0);
    std::vector<Frame> frames;
    for (int t = 0; t < 80; ++t) {
        Frame f = random_frame(rng, 2);
        f.push_back(Observation::Constant(1, pois(rng)));
        frames.push_back(std::move(f));
    }
    auto cfg = small_config();
    cfg.kernel = KernelFamily::laplacian;
    const auto res = run(frames, random_graph(rng, 3, 1.0), cfg);
    for (const auto& r : res.trace) EXPECT_TRUE(r.g.allFinite());
}
