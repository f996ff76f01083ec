#pragma once

#include "detector.hpp"
#include "synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace okgd::evaluation {

struct RunReport
{
    std::uint64_t seed = 0;
    bool detected = false;    // alarm at or after tau - tolerance
    bool false_alarm = false; // alarm before tau - tolerance, or any alarm without a change
    std::optional<long> tau_hat;
    std::optional<long> delay; // max(0, tau_hat - tau) for detections
};

/// Classifies the first alarm of a run against the true change time.
/// `tolerance_window` accepts alarms up to that many frames early; they count
/// as zero delay.
inline RunReport score_run(const DetectionResult& result, std::optional<long> tau,
                           long tolerance_window = 0, std::uint64_t seed = 0)
{
    RunReport r;
    r.seed = seed;
    r.tau_hat = result.tau_hat;
    if (!result.detected || !result.tau_hat) return r;
    const long t = *result.tau_hat;
    if (!tau || t < *tau - tolerance_window) {
        r.false_alarm = true;
        return r;
    }
    r.detected = true;
    r.delay = std::max(0L, t - *tau);
    return r;
}

struct Summary
{
    std::size_t n_runs = 0;
    std::size_t n_detected = 0;
    std::size_t n_false_alarms = 0;
    std::optional<double> mean_delay; // over detections
    std::optional<double> std_delay;  // sample std (n - 1); 0 for a single detection
    // Fraction of runs detecting within `delay_budget` frames without a prior
    // false alarm.
    double precision = 0.0;
    long delay_budget = 150;
};

inline Summary aggregate(std::span<const RunReport> reports, long delay_budget = 150)
{
    Summary s;
    s.n_runs = reports.size();
    s.delay_budget = delay_budget;
    std::vector<double> delays;
    std::size_t within = 0;
    for (const auto& r : reports) {
        if (r.false_alarm) ++s.n_false_alarms;
        if (r.detected && r.delay) {
            ++s.n_detected;
            delays.push_back(static_cast<double>(*r.delay));
            if (*r.delay <= delay_budget) ++within;
        }
    }
    if (!delays.empty()) {
        // Sorted so the result does not depend on report order.
        std::sort(delays.begin(), delays.end());
        double sum = 0.0;
        for (double d : delays) sum += d;
        const double mean = sum / static_cast<double>(delays.size());
        double ss = 0.0;
        for (double d : delays) ss += (d - mean) * (d - mean);
        s.mean_delay = mean;
        s.std_delay = delays.size() > 1 ? std::sqrt(ss / static_cast<double>(delays.size() - 1)) : 0.0;
    }
    s.precision = s.n_runs ? static_cast<double>(within) / static_cast<double>(s.n_runs) : 0.0;
    return s;
}

/// A detector variant compared in a bench; only lambda differs.
struct Variant
{
    std::string name;
    std::optional<double> lambda; // unset: 10 / average degree
};

inline Variant parse_variant(const std::string& name)
{
    if (name == "okgd") return {name, std::nullopt};
    if (name == "okgd-nograph") return {name, 0.0};
    throw ConfigError("unknown variant: " + name);
}

struct BenchSpec
{
    synth::ScenarioSpec scenario;
    DetectorConfig detector;
    std::vector<Variant> variants{{"okgd", std::nullopt}, {"okgd-nograph", 0.0}};
    int n_seeds = 10;
    std::uint64_t first_seed = 0;
    long delay_budget = 150;
    long tolerance_window = 0;
    unsigned threads = 0; // 0: hardware concurrency
};

struct BenchResult
{
    // reports[i][s]: variant i, seed index s.
    std::vector<std::vector<RunReport>> reports;
    std::vector<Summary> summaries;
};

/// Runs every variant on the same scenario instances. Seed s generates the
/// scenario (graph, change set, frames) and seeds the detector, so variants
/// see identical data.
inline BenchResult run_bench(const BenchSpec& spec)
{
    const std::size_t nv = spec.variants.size();
    const auto ns = static_cast<std::size_t>(std::max(spec.n_seeds, 0));
    BenchResult out;
    out.reports.assign(nv, std::vector<RunReport>(ns));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t s; (s = next.fetch_add(1)) < ns;) {
            try {
                synth::ScenarioSpec sspec = spec.scenario;
                sspec.seed = spec.first_seed + s;
                const auto sc = synth::make_scenario(sspec);
                const auto frames = synth::emit_frames(sc);
                for (std::size_t i = 0; i < nv; ++i) {
                    DetectorConfig cfg = spec.detector;
                    cfg.lambda = spec.variants[i].lambda;
                    cfg.seed = sspec.seed;
                    const auto res = run(frames, sc.graph.graph, cfg);
                    out.reports[i][s] = score_run(res, sc.tau, spec.tolerance_window, sspec.seed);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n_threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(ns, 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (const auto& reps : out.reports) out.summaries.push_back(aggregate(reps, spec.delay_budget));
    return out;
}

} // namespace okgd::evaluation
