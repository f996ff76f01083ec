#pragma once

#include <okgd/estimator.hpp>

#include <random>
#include <vector>

namespace okgd::testing {

struct Instance
{
    Graph graph;
    std::vector<NodeDictionary> dicts;
    std::vector<Frame> pre;
    std::vector<Frame> post;
};

inline Observation gaussian_obs(std::mt19937_64& rng, Index dim, double scale = 1.0)
{
    std::normal_distribution<double> z(0.0, scale);
    Observation x(dim);
    for (Index i = 0; i < dim; ++i) x(i) = z(rng);
    return x;
}

// Node v observes dimension 1 + v % 2, so blocks are heterogeneous.
inline Frame random_frame(std::mt19937_64& rng, Index n)
{
    Frame f;
    for (Index v = 0; v < n; ++v) f.push_back(gaussian_obs(rng, 1 + v % 2));
    return f;
}

inline Graph random_graph(std::mt19937_64& rng, Index n, double p)
{
    std::bernoulli_distribution edge(p);
    std::uniform_real_distribution<double> w(0.2, 2.0);
    Graph g(n);
    for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v)
            if (edge(rng)) g.add_edge(u, v, w(rng));
    return g;
}

// Dictionary sizes are drawn in [1, max_atoms].
inline Instance random_instance(std::mt19937_64& rng, Index n, Index max_atoms, int n_pre, int n_post,
                                double edge_p = 0.6)
{
    Instance inst{random_graph(rng, n, edge_p), {}, {}, {}};
    std::uniform_int_distribution<Index> atoms(1, max_atoms);
    std::uniform_real_distribution<double> bw(0.5, 2.0);
    for (Index v = 0; v < n; ++v) {
        const Index dim = 1 + v % 2;
        NodeDictionary d(KernelSpec(KernelFamily::gaussian, bw(rng), static_cast<int>(dim)),
                         gaussian_obs(rng, dim, 2.0), 0.9);
        const Index want = atoms(rng);
        while (d.size() < want) d.maybe_add(gaussian_obs(rng, dim, 2.0));
        inst.dicts.push_back(std::move(d));
    }
    for (int j = 0; j < n_pre; ++j) inst.pre.push_back(random_frame(rng, n));
    for (int j = 0; j < n_post; ++j) inst.post.push_back(random_frame(rng, n));
    return inst;
}

// Blockdiag(k_1(y_1), ..., k_N(y_N)): total x N.
inline Eigen::MatrixXd kernel_block_matrix(const std::vector<NodeDictionary>& dicts, const Frame& y)
{
    Index total = 0;
    for (const auto& d : dicts) total += d.size();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(total, static_cast<Index>(dicts.size()));
    Index row = 0;
    for (std::size_t v = 0; v < dicts.size(); ++v) {
        K.block(row, static_cast<Index>(v), dicts[v].size(), 1) = dicts[v].featurize(y[v]);
        row += dicts[v].size();
    }
    return K;
}

// Objective written from its definition: per-frame squared fit plus the
// Laplacian penalty on the estimated graph signal.
inline double naive_objective(const Instance& inst, double lambda, double gamma, const Eigen::VectorXd& theta)
{
    double fit = 0.0;
    for (const auto& y : inst.pre) {
        const Eigen::VectorXd g = kernel_block_matrix(inst.dicts, y).transpose() * theta;
        fit += g.squaredNorm() + lambda * smoothness_pairwise(inst.graph, g);
    }
    fit /= static_cast<double>(inst.pre.size());
    double lin_pre = 0.0, lin_post = 0.0;
    for (const auto& y : inst.pre) lin_pre += (kernel_block_matrix(inst.dicts, y).transpose() * theta).sum();
    for (const auto& y : inst.post) lin_post += (kernel_block_matrix(inst.dicts, y).transpose() * theta).sum();
    return 0.5 * fit + lin_pre / static_cast<double>(inst.pre.size()) -
           lin_post / static_cast<double>(inst.post.size()) + 0.5 * gamma * theta.squaredNorm();
}

inline ParameterVector random_theta(std::mt19937_64& rng, const std::vector<NodeDictionary>& dicts)
{
    ParameterVector theta = ParameterVector::zeros_like(dicts);
    for (auto& b : theta.blocks)
        for (Index i = 0; i < b.size(); ++i) b(i) = gaussian_obs(rng, 1)(0);
    return theta;
}

} // namespace okgd::testing
