#pragma once

#include "estimator.hpp"
#include "graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace okgd::synth {

/// Independent generator stream for (seed, salt).
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

enum class ClusterLabel
{
    C1, // bivariate Gaussian, identity covariance
    C2, // Poisson(5)
    C3, // bivariate Gaussian, unit variances, covariance 0.75
    C4, // Poisson(10)
};

inline std::string_view to_string(ClusterLabel c)
{
    constexpr std::array<std::string_view, 4> names{"C1", "C2", "C3", "C4"};
    return names[static_cast<std::size_t>(c)];
}

inline ClusterLabel parse_cluster_label(std::string_view s)
{
    for (int i = 0; i < 4; ++i) {
        if (to_string(static_cast<ClusterLabel>(i)) == s) return static_cast<ClusterLabel>(i);
    }
    throw std::invalid_argument("unknown cluster label: " + std::string(s));
}

/// Per-cluster observation model.
class ClusterModel
{
public:
    ClusterModel() = default;
    explicit ClusterModel(ClusterLabel label) : label_(label) {}

    ClusterLabel label() const { return label_; }
    bool is_poisson() const { return label_ == ClusterLabel::C2 || label_ == ClusterLabel::C4; }
    int dim() const { return is_poisson() ? 1 : 2; }

    double poisson_mean() const { return label_ == ClusterLabel::C2 ? 5.0 : 10.0; }
    double correlation() const { return label_ == ClusterLabel::C3 ? 0.75 : 0.0; }

    template <class Rng>
    Observation sample(Rng& rng) const
    {
        if (is_poisson()) {
            std::poisson_distribution<int> pois(poisson_mean());
            return Observation::Constant(1, static_cast<double>(pois(rng)));
        }
        std::normal_distribution<double> normal(0.0, 1.0);
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        const double rho = correlation();
        Observation y(2);
        y << z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
        return y;
    }

    bool operator==(const ClusterModel&) const = default;

private:
    ClusterLabel label_ = ClusterLabel::C1;
};

enum class ScenarioKind
{
    cluster_swap,     // every cluster switches to its target model
    single_cluster,   // all nodes of one cluster switch
    random_locations, // a random node subset switches
    null,             // no change
};

inline std::string_view to_string(ScenarioKind k)
{
    switch (k) {
    case ScenarioKind::cluster_swap: return "cluster-swap";
    case ScenarioKind::single_cluster: return "cluster";
    case ScenarioKind::random_locations: return "random-locations";
    case ScenarioKind::null: return "null";
    }
    return "";
}

inline ScenarioKind parse_scenario_kind(std::string_view s)
{
    for (auto k : {ScenarioKind::cluster_swap, ScenarioKind::single_cluster,
                   ScenarioKind::random_locations, ScenarioKind::null}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown scenario: " + std::string(s));
}

/// Everything needed to regenerate a scenario.
struct ScenarioSpec
{
    ScenarioKind kind = ScenarioKind::cluster_swap;
    Index n_clusters = 4;
    Index cluster_size = 20;
    double p_intra = 0.5;
    double p_inter = 0.01;
    long tau = 500;
    long horizon = 1500;
    Index n_changed = 10;
    // Cluster index for single_cluster; -1 picks one uniformly at random.
    Index changed_cluster = -1;
    // Model of cluster i; empty means C1, C2, C3, C4 repeating.
    std::vector<ClusterLabel> cluster_labels;
    // Post-change model of each label (indexed by label). C4 maps to C2.
    std::array<ClusterLabel, 4> targets{ClusterLabel::C3, ClusterLabel::C4, ClusterLabel::C1,
                                        ClusterLabel::C2};
    std::uint64_t seed = 0;

    ClusterLabel label_of_cluster(Index c) const
    {
        if (cluster_labels.empty()) return static_cast<ClusterLabel>(c % 4);
        return cluster_labels[static_cast<std::size_t>(c)];
    }

    ClusterLabel target_of(ClusterLabel c) const { return targets[static_cast<std::size_t>(c)]; }

    bool operator==(const ScenarioSpec&) const = default;
};

struct Scenario
{
    ScenarioSpec spec;
    ClusteredGraph graph;
    std::optional<long> tau;
    std::vector<Index> changed; // ascending
    std::vector<ClusterModel> pre;
    std::vector<ClusterModel> post;
    long horizon = 0;

    Index n_nodes() const { return graph.graph.n_nodes(); }
    std::vector<int> dims() const
    {
        std::vector<int> d;
        for (const auto& m : pre) d.push_back(m.dim());
        return d;
    }
};

inline Scenario make_scenario(const ScenarioSpec& spec)
{
    if (spec.horizon <= 0) throw std::invalid_argument("scenario horizon must be positive");
    if (spec.tau < 1) throw std::invalid_argument("change time must be at least 1");
    if (!spec.cluster_labels.empty() &&
        static_cast<Index>(spec.cluster_labels.size()) != spec.n_clusters) {
        throw std::invalid_argument("cluster_labels must name one model per cluster");
    }

    Scenario sc;
    sc.spec = spec;
    sc.horizon = spec.horizon;
    sc.graph = sample_sbm(spec.n_clusters, spec.cluster_size, spec.p_intra, spec.p_inter,
                          make_rng(spec.seed, 1)());
    const Index n = sc.graph.graph.n_nodes();
    for (Index v = 0; v < n; ++v) {
        sc.pre.emplace_back(spec.label_of_cluster(sc.graph.labels[static_cast<std::size_t>(v)]));
    }
    sc.post = sc.pre;

    auto pick = make_rng(spec.seed, 2);
    switch (spec.kind) {
    case ScenarioKind::null:
        break;
    case ScenarioKind::cluster_swap:
        for (Index v = 0; v < n; ++v) sc.changed.push_back(v);
        break;
    case ScenarioKind::single_cluster: {
        Index c = spec.changed_cluster;
        if (c < 0) c = std::uniform_int_distribution<Index>(0, spec.n_clusters - 1)(pick);
        if (c >= spec.n_clusters) throw std::invalid_argument("changed_cluster out of range");
        for (Index v = 0; v < n; ++v)
            if (sc.graph.labels[static_cast<std::size_t>(v)] == c) sc.changed.push_back(v);
        break;
    }
    case ScenarioKind::random_locations: {
        if (spec.n_changed < 0 || spec.n_changed > n) {
            throw std::invalid_argument("n_changed must lie in [0, number of nodes]");
        }
        std::vector<Index> all(static_cast<std::size_t>(n));
        for (Index v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
        std::sample(all.begin(), all.end(), std::back_inserter(sc.changed), spec.n_changed, pick);
        break;
    }
    }
    for (Index v : sc.changed) {
        sc.post[static_cast<std::size_t>(v)] = ClusterModel(spec.target_of(sc.pre[static_cast<std::size_t>(v)].label()));
    }
    if (!sc.changed.empty()) sc.tau = spec.tau;
    return sc;
}

/// Every cluster changes at tau: C1 <-> C3, C2 -> C4, C4 -> C2.
inline Scenario make_cluster_swap_scenario(std::uint64_t seed)
{
    ScenarioSpec spec;
    spec.seed = seed;
    return make_scenario(spec);
}

inline Scenario make_random_location_scenario(Index n_changed, std::uint64_t seed)
{
    ScenarioSpec spec;
    spec.kind = ScenarioKind::random_locations;
    spec.n_changed = n_changed;
    spec.seed = seed;
    return make_scenario(spec);
}

/// Frame t (1-based) is drawn from the post-change models when t >= tau.
inline std::vector<Frame> emit_frames(const Scenario& sc, std::uint64_t seed)
{
    auto rng = make_rng(seed, 3);
    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(sc.horizon));
    for (long t = 1; t <= sc.horizon; ++t) {
        const auto& models = (sc.tau && t >= *sc.tau) ? sc.post : sc.pre;
        Frame f;
        f.reserve(models.size());
        for (const auto& m : models) f.push_back(m.sample(rng));
        frames.push_back(std::move(f));
    }
    return frames;
}

inline std::vector<Frame> emit_frames(const Scenario& sc)
{
    return emit_frames(sc, sc.spec.seed);
}

} // namespace okgd::synth
