#pragma once

#include "dictionary.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "graph.hpp"
#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace okgd {

struct DetectorConfig
{
    // Graph penalty; unset means 10 / average degree (0 on an edgeless graph).
    std::optional<double> lambda;
    double gamma = 10.0;
    double mu0 = 0.5;
    long burn_in = 100;
    long n_pre = 100;
    long n_post = 100;
    // Learning-rate constant; unset means 1 / gamma, the 1/(mu k) schedule
    // for the gamma-strongly convex cost.
    std::optional<double> c;
    double kappa = 1.5;
    // Scored steps during which no alarm can fire; unset means n_post.
    std::optional<long> threshold_warmup;
    std::uint64_t seed = 0;
    KernelFamily kernel = KernelFamily::gaussian;
    // Shared bandwidth for every node; unset means per-node median heuristic.
    std::optional<double> bandwidth;

    long warmup() const { return threshold_warmup.value_or(n_post); }
    double learning_rate_constant() const { return c.value_or(1.0 / gamma); }

    void validate() const
    {
        if (lambda && !(*lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
        if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
        if (!(mu0 > 0.0 && mu0 < 1.0)) throw ConfigError("mu0 must lie in (0, 1)");
        if (n_pre < 1 || n_post < 1) throw ConfigError("window sizes must be at least 1");
        if (burn_in < n_pre) throw ConfigError("burn-in length must be at least n_pre");
        if (c && !(*c > 0.0)) throw ConfigError("learning-rate constant c must be positive");
        if (!(kappa > 0.0)) throw ConfigError("threshold multiplier must be positive");
        if (warmup() < 0) throw ConfigError("threshold warmup must be nonnegative");
        if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
    }
};

inline double default_lambda(const Graph& g)
{
    const double dbar = g.average_degree();
    return dbar > 0.0 ? 10.0 / dbar : 0.0;
}

struct StepRecord
{
    long t = 0;
    Eigen::VectorXd g;   // per-node scores
    double g_norm = 0.0;
    double eps = 0.0;    // threshold at t
    bool armed = false;  // past the threshold warmup
    bool alarm = false;
};

/// Online detector state: dictionaries, parameters, windows and threshold.
///
/// Time t counts frames from 1. Frames 1..bp form the burn-in; frames
/// bp+1..bp+n_post-1 only fill the recent window; t = bp + n_post is the first
/// scored step.
class Detector
{
public:
    Detector(Graph graph, DetectorConfig cfg)
        : graph_(std::move(graph)), cfg_(cfg), rng_(cfg.seed)
    {
        cfg_.validate();
        lambda_ = cfg_.lambda.value_or(default_lambda(graph_));
        order_.resize(static_cast<std::size_t>(graph_.n_nodes()));
        std::iota(order_.begin(), order_.end(), Index{0});
    }

    void burn_in(std::span<const Frame> frames)
    {
        if (burned_in()) throw std::logic_error("burn-in already done");
        if (static_cast<long>(frames.size()) != cfg_.burn_in) {
            throw DataError("burn-in needs exactly " + std::to_string(cfg_.burn_in) + " frames, got " +
                            std::to_string(frames.size()));
        }
        const Index n = graph_.n_nodes();
        for (const auto& f : frames) check_frame_shape(f, frames.front());

        for (Index v = 0; v < n; ++v) {
            const auto sv = static_cast<std::size_t>(v);
            std::vector<Observation> obs;
            obs.reserve(frames.size());
            for (const auto& f : frames) obs.push_back(f[sv]);
            double bw = 0.0;
            if (cfg_.bandwidth) {
                bw = *cfg_.bandwidth;
            } else {
                try {
                    bw = median_heuristic(obs);
                } catch (const std::invalid_argument& e) {
                    throw DataError("node " + std::to_string(v) + ": " + e.what());
                }
            }
            KernelSpec spec(cfg_.kernel, bw, static_cast<int>(obs.front().size()));
            NodeDictionary dict(spec, obs.front(), cfg_.mu0);
            for (std::size_t j = 1; j < obs.size(); ++j) dict.maybe_add(obs[j]);
            dicts_.push_back(std::move(dict));
        }
        for (const auto& f : frames) {
            history_.push_back(f);
            pool_.push_back(static_cast<long>(history_.size()));
        }
        t_ = cfg_.burn_in;
        theta_ = ParameterVector::zeros_like(dicts_);
    }

    /// Consumes frame t+1. Returns a record on scored steps only.
    std::optional<StepRecord> step(const Frame& frame)
    {
        if (!burned_in()) throw std::logic_error("step called before burn-in");
        check_frame_shape(frame, history_.front());
        history_.push_back(frame);
        ++t_;

        post_.push_back(t_);
        if (static_cast<long>(post_.size()) > cfg_.n_post) post_.pop_front();
        if (static_cast<long>(post_.size()) < cfg_.n_post) return std::nullopt;

        // Reference window: fresh subsample of the validated pool.
        if (static_cast<long>(pool_.size()) < cfg_.n_pre) {
            throw std::logic_error("pre-change pool smaller than n_pre");
        }
        active_pre_.clear();
        std::sample(pool_.begin(), pool_.end(), std::back_inserter(active_pre_), cfg_.n_pre, rng_);

        for (Index v = 0; v < graph_.n_nodes(); ++v) {
            if (dicts_[static_cast<std::size_t>(v)].maybe_add(frame[static_cast<std::size_t>(v)])) {
                theta_.pad_block(v);
            }
        }

        const SufficientStats stats = compute_stats(graph_, dicts_, window(active_pre_), window(post_));

        ++scored_;
        const StepSchedule sched{cfg_.learning_rate_constant(), cfg_.burn_in, cfg_.n_post};
        const long t_eff = scored_ + cfg_.burn_in + cfg_.n_post - 1;
        std::vector<double> alpha(static_cast<std::size_t>(graph_.n_nodes()));
        for (Index v = 0; v < graph_.n_nodes(); ++v) {
            alpha[static_cast<std::size_t>(v)] =
                step_size(t_eff, sched, block_lipschitz(stats, graph_, dicts_, lambda_, cfg_.gamma, v));
        }
        theta_ = bsgd_step(theta_, stats, graph_, lambda_, cfg_.gamma, alpha, order_);

        StepRecord rec;
        rec.t = t_;
        rec.g = score(theta_, stats).values;
        rec.g_norm = rec.g.norm();
        norm_sum_ += rec.g_norm;
        rec.eps = cfg_.kappa * norm_sum_ / static_cast<double>(scored_);
        rec.armed = scored_ > cfg_.warmup();
        rec.alarm = rec.armed && rec.g_norm > rec.eps;

        // Only frames that have left the recent window without an alarm are
        // admitted to the pool.
        const long candidate = t_ - cfg_.n_post;
        if (!rec.alarm && candidate > pool_.back()) pool_.push_back(candidate);
        return rec;
    }

    /// Restarts estimation after an alarm: the pool keeps its latest n_pre
    /// frames, the recent window refills from scratch, parameters and
    /// threshold statistics are cleared. Dictionaries are kept.
    void reset_after_alarm()
    {
        if (static_cast<long>(pool_.size()) > cfg_.n_pre) {
            pool_.erase(pool_.begin(), pool_.end() - cfg_.n_pre);
        }
        post_.clear();
        theta_ = ParameterVector::zeros_like(dicts_);
        scored_ = 0;
        norm_sum_ = 0.0;
    }

    bool burned_in() const { return !dicts_.empty(); }
    long time() const { return t_; }
    double lambda() const { return lambda_; }
    const Graph& graph() const { return graph_; }
    const DetectorConfig& config() const { return cfg_; }
    const ParameterVector& theta() const { return theta_; }
    const std::vector<NodeDictionary>& dictionaries() const { return dicts_; }
    /// Time indices of validated frames, ascending.
    const std::vector<long>& pool() const { return pool_; }
    /// Time indices of the current reference subsample.
    const std::vector<long>& active_pre() const { return active_pre_; }
    const std::deque<long>& active_post() const { return post_; }

    std::vector<Index> dictionary_sizes() const
    {
        std::vector<Index> out;
        for (const auto& d : dicts_) out.push_back(d.size());
        return out;
    }

private:
    template <class Indices>
    WindowRef window(const Indices& times) const
    {
        WindowRef w;
        w.reserve(times.size());
        for (long t : times) w.push_back(&history_[static_cast<std::size_t>(t - 1)]);
        return w;
    }

    void check_frame_shape(const Frame& f, const Frame& ref) const
    {
        if (static_cast<Index>(f.size()) != graph_.n_nodes()) {
            throw DataError("frame has " + std::to_string(f.size()) + " observations, graph has " +
                            std::to_string(graph_.n_nodes()) + " nodes");
        }
        for (std::size_t v = 0; v < f.size(); ++v) {
            if (f[v].size() != ref[v].size()) {
                throw DataError("node " + std::to_string(v) + " observation has dimension " +
                                std::to_string(f[v].size()) + ", expected " + std::to_string(ref[v].size()));
            }
            if (!f[v].allFinite()) throw DataError("node " + std::to_string(v) + " observation is not finite");
        }
    }

    Graph graph_;
    DetectorConfig cfg_;
    double lambda_ = 0.0;
    std::mt19937_64 rng_;
    std::vector<Index> order_;

    std::vector<NodeDictionary> dicts_;
    ParameterVector theta_;
    std::vector<Frame> history_;
    std::vector<long> pool_;
    std::vector<long> active_pre_;
    std::deque<long> post_;
    long t_ = 0;
    long scored_ = 0;
    double norm_sum_ = 0.0;
};

struct DetectionResult
{
    bool detected = false;
    std::optional<long> tau_hat;
    std::vector<long> alarms; // every alarm, in continue mode
    std::vector<StepRecord> trace;
    std::vector<Index> dictionary_sizes;
    double lambda = 0.0;
};

/// Burn-in followed by online steps until the first alarm (or, with
/// `continue_after_alarm`, until the stream ends).
inline DetectionResult run(std::span<const Frame> frames, const Graph& graph,
                           const DetectorConfig& cfg, bool continue_after_alarm = false)
{
    if (static_cast<long>(frames.size()) < cfg.burn_in + cfg.n_post) {
        throw DataError("stream has " + std::to_string(frames.size()) + " frames; at least " +
                        std::to_string(cfg.burn_in + cfg.n_post) + " are needed");
    }
    Detector det(graph, cfg);
    det.burn_in(frames.first(static_cast<std::size_t>(cfg.burn_in)));

    DetectionResult res;
    res.lambda = det.lambda();
    for (std::size_t i = static_cast<std::size_t>(cfg.burn_in); i < frames.size(); ++i) {
        auto rec = det.step(frames[i]);
        if (!rec) continue;
        const bool alarm = rec->alarm;
        res.trace.push_back(std::move(*rec));
        if (alarm) {
            res.alarms.push_back(det.time());
            if (!res.detected) {
                res.detected = true;
                res.tau_hat = det.time();
            }
            if (!continue_after_alarm) break;
            det.reset_after_alarm();
        }
    }
    res.dictionary_sizes = det.dictionary_sizes();
    return res;
}

} // namespace okgd
