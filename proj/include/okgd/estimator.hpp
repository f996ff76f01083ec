#pragma once

#include "dictionary.hpp"
#include "graph.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace okgd {

/// One observation per node at a single time stamp. Nodes may differ in
/// dimension.
using Frame = std::vector<Observation>;

/// Non-owning view of a window of frames.
using WindowRef = std::vector<const Frame*>;

inline WindowRef window_of(const std::vector<Frame>& frames)
{
    WindowRef out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(&f);
    return out;
}

/// Stacked per-node parameter blocks theta_v, one per dictionary.
struct ParameterVector
{
    std::vector<Eigen::VectorXd> blocks;

    ParameterVector() = default;

    explicit ParameterVector(const std::vector<Index>& sizes)
    {
        blocks.reserve(sizes.size());
        for (Index s : sizes) blocks.push_back(Eigen::VectorXd::Zero(s));
    }

    static ParameterVector zeros_like(const std::vector<NodeDictionary>& dicts)
    {
        std::vector<Index> sizes;
        for (const auto& d : dicts) sizes.push_back(d.size());
        return ParameterVector(sizes);
    }

    Index n_blocks() const { return static_cast<Index>(blocks.size()); }
    Eigen::VectorXd& operator[](Index v) { return blocks[static_cast<std::size_t>(v)]; }
    const Eigen::VectorXd& operator[](Index v) const { return blocks[static_cast<std::size_t>(v)]; }

    Index total_size() const
    {
        Index total = 0;
        for (const auto& b : blocks) total += b.size();
        return total;
    }

    std::vector<Index> offsets() const
    {
        std::vector<Index> out(blocks.size() + 1, 0);
        for (std::size_t v = 0; v < blocks.size(); ++v) out[v + 1] = out[v] + blocks[v].size();
        return out;
    }

    Eigen::VectorXd flatten() const
    {
        Eigen::VectorXd out(total_size());
        Index pos = 0;
        for (const auto& b : blocks) {
            out.segment(pos, b.size()) = b;
            pos += b.size();
        }
        return out;
    }

    /// Splits `flat` using the block sizes of *this.
    ParameterVector with_values(const Eigen::VectorXd& flat) const
    {
        if (flat.size() != total_size()) throw std::invalid_argument("flat parameter size mismatch");
        ParameterVector out = *this;
        Index pos = 0;
        for (auto& b : out.blocks) {
            b = flat.segment(pos, b.size());
            pos += b.size();
        }
        return out;
    }

    /// Appends a trailing zero to block v (the dictionary of v grew).
    void pad_block(Index v)
    {
        auto& b = (*this)[v];
        b.conservativeResize(b.size() + 1);
        b(b.size() - 1) = 0.0;
    }
};

/// Window averages of kernel features.
///
/// cross_pre[v][i] holds (1/n_pre) sum_j k_v(y_{v,j}) k_u(y_{u,j})^T for the
/// i-th neighbor u of v, in the order of Graph::neighbors(v). Only edges are
/// stored; both orientations are kept.
struct SufficientStats
{
    std::vector<Eigen::VectorXd> h_pre;
    std::vector<Eigen::VectorXd> h_post;
    std::vector<Eigen::MatrixXd> H_pre;
    std::vector<std::vector<Eigen::MatrixXd>> cross_pre;
    Index n_pre = 0;
    Index n_post = 0;

    Index n_nodes() const { return static_cast<Index>(h_pre.size()); }
    Index block_size(Index v) const { return h_pre[static_cast<std::size_t>(v)].size(); }
};

/// Rows are the kernel features of node v over the window.
inline Eigen::MatrixXd feature_matrix(const NodeDictionary& dict, const WindowRef& window, Index v)
{
    Eigen::MatrixXd phi(static_cast<Index>(window.size()), dict.size());
    for (std::size_t j = 0; j < window.size(); ++j) {
        const Frame& f = *window[j];
        if (static_cast<Index>(f.size()) <= v) {
            throw std::invalid_argument("frame has " + std::to_string(f.size()) +
                                        " nodes, node " + std::to_string(v) + " requested");
        }
        phi.row(static_cast<Index>(j)) = dict.featurize(f[static_cast<std::size_t>(v)]).transpose();
    }
    return phi;
}

inline SufficientStats compute_stats(const Graph& graph, const std::vector<NodeDictionary>& dicts,
                                     const WindowRef& window_pre, const WindowRef& window_post)
{
    const Index n = graph.n_nodes();
    if (static_cast<Index>(dicts.size()) != n) {
        throw std::invalid_argument("one dictionary per node is required");
    }
    if (window_pre.empty() || window_post.empty()) {
        throw std::invalid_argument("windows must be non-empty");
    }
    for (const auto* w : {&window_pre, &window_post}) {
        for (const Frame* f : *w) {
            if (static_cast<Index>(f->size()) != n) {
                throw std::invalid_argument("frame has " + std::to_string(f->size()) +
                                            " observations, graph has " + std::to_string(n) + " nodes");
            }
        }
    }

    SufficientStats s;
    s.n_pre = static_cast<Index>(window_pre.size());
    s.n_post = static_cast<Index>(window_post.size());
    s.h_pre.resize(static_cast<std::size_t>(n));
    s.h_post.resize(static_cast<std::size_t>(n));
    s.H_pre.resize(static_cast<std::size_t>(n));
    s.cross_pre.resize(static_cast<std::size_t>(n));

    const double inv_pre = 1.0 / static_cast<double>(s.n_pre);
    const double inv_post = 1.0 / static_cast<double>(s.n_post);
    std::vector<Eigen::MatrixXd> phi_pre(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) {
        const auto& dict = dicts[static_cast<std::size_t>(v)];
        auto& phi = phi_pre[static_cast<std::size_t>(v)];
        phi = feature_matrix(dict, window_pre, v);
        const Eigen::MatrixXd phi_post = feature_matrix(dict, window_post, v);
        s.h_pre[static_cast<std::size_t>(v)] = phi.colwise().sum().transpose() * inv_pre;
        s.h_post[static_cast<std::size_t>(v)] = phi_post.colwise().sum().transpose() * inv_post;
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dict.size(), dict.size());
        H.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose(), inv_pre);
        s.H_pre[static_cast<std::size_t>(v)] = H.selfadjointView<Eigen::Lower>();
    }
    for (Index v = 0; v < n; ++v) {
        auto& row = s.cross_pre[static_cast<std::size_t>(v)];
        const auto& nbrs = graph.neighbors(v);
        row.resize(nbrs.size());
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const Index u = nbrs[i].node;
            if (u < v) {
                // Mirror the block already computed from u's side.
                const auto& urow = graph.neighbors(u);
                const auto it = std::lower_bound(urow.begin(), urow.end(), v,
                                                 [](const Neighbor& a, Index x) { return a.node < x; });
                row[i] = s.cross_pre[static_cast<std::size_t>(u)]
                                    [static_cast<std::size_t>(it - urow.begin())].transpose();
            } else {
                row[i] = phi_pre[static_cast<std::size_t>(v)].transpose() *
                         phi_pre[static_cast<std::size_t>(u)] * inv_pre;
            }
        }
    }
    return s;
}

inline SufficientStats compute_stats(const Graph& graph, const std::vector<NodeDictionary>& dicts,
                                     const std::vector<Frame>& window_pre,
                                     const std::vector<Frame>& window_post)
{
    return compute_stats(graph, dicts, window_of(window_pre), window_of(window_post));
}

struct QuadraticForm
{
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

/// F_t(theta) = 1/2 theta^T A theta + theta^T b, assembled blockwise:
/// diagonal blocks (1 + lambda d_v) H_v + gamma I, edge blocks
/// -lambda W_vu cross_pre(v, u), and b = h_pre - h_post.
inline QuadraticForm assemble_quadratic(const SufficientStats& stats, const Graph& graph,
                                        double lambda, double gamma)
{
    const Index n = stats.n_nodes();
    if (n != graph.n_nodes()) throw std::invalid_argument("statistics and graph disagree on node count");
    std::vector<Index> off(static_cast<std::size_t>(n) + 1, 0);
    for (Index v = 0; v < n; ++v) off[static_cast<std::size_t>(v) + 1] = off[static_cast<std::size_t>(v)] + stats.block_size(v);
    const Index total = off.back();

    QuadraticForm q{Eigen::MatrixXd::Zero(total, total), Eigen::VectorXd(total)};
    for (Index v = 0; v < n; ++v) {
        const auto sv = static_cast<std::size_t>(v);
        const Index Lv = stats.block_size(v);
        q.A.block(off[sv], off[sv], Lv, Lv) =
            (1.0 + lambda * graph.degree(v)) * stats.H_pre[sv] +
            gamma * Eigen::MatrixXd::Identity(Lv, Lv);
        q.b.segment(off[sv], Lv) = stats.h_pre[sv] - stats.h_post[sv];
        const auto& nbrs = graph.neighbors(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const auto su = static_cast<std::size_t>(nbrs[i].node);
            q.A.block(off[sv], off[su], Lv, stats.block_size(nbrs[i].node)) =
                -lambda * nbrs[i].weight * stats.cross_pre[sv][i];
        }
    }
    return q;
}

inline double objective(const QuadraticForm& q, const Eigen::VectorXd& theta)
{
    return 0.5 * theta.dot(q.A * theta) + theta.dot(q.b);
}

/// Unique minimizer -A^{-1} b of the strongly convex quadratic.
inline Eigen::VectorXd solve_exact(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw std::runtime_error("quadratic form is not positive definite");
    return -llt.solve(b);
}

/// B_v theta_v + c_v evaluated at `theta`, i.e. the partial gradient of F_t
/// with respect to block v.
inline Eigen::VectorXd block_gradient(const SufficientStats& stats, const Graph& graph,
                                      double lambda, double gamma, const ParameterVector& theta,
                                      Index v)
{
    const auto sv = static_cast<std::size_t>(v);
    Eigen::VectorXd grad = (1.0 + lambda * graph.degree(v)) * (stats.H_pre[sv] * theta[v]) +
                           gamma * theta[v] + stats.h_pre[sv] - stats.h_post[sv];
    if (lambda != 0.0) {
        const auto& nbrs = graph.neighbors(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            grad.noalias() -= (lambda * nbrs[i].weight) * (stats.cross_pre[sv][i] * theta[nbrs[i].node]);
        }
    }
    return grad;
}

/// One Gauss-Seidel sweep over the blocks in `order`: blocks updated earlier
/// in the sweep feed their new values into later neighbors.
inline ParameterVector bsgd_step(const ParameterVector& theta, const SufficientStats& stats,
                                 const Graph& graph, double lambda, double gamma,
                                 std::span<const double> step_sizes, std::span<const Index> order)
{
    const Index n = graph.n_nodes();
    if (theta.n_blocks() != n || static_cast<Index>(step_sizes.size()) != n ||
        static_cast<Index>(order.size()) != n) {
        throw std::invalid_argument("bsgd_step: inconsistent number of blocks");
    }
    ParameterVector next = theta;
    for (Index v : order) {
        const double alpha = step_sizes[static_cast<std::size_t>(v)];
        if (!(alpha > 0.0)) throw std::invalid_argument("step sizes must be positive");
        if (theta[v].size() != stats.block_size(v)) {
            throw std::invalid_argument("parameter block " + std::to_string(v) + " does not match dictionary size");
        }
        next[v] -= alpha * block_gradient(stats, graph, lambda, gamma, next, v);
    }
    return next;
}

inline ParameterVector bsgd_step(const ParameterVector& theta, const SufficientStats& stats,
                                 const Graph& graph, double lambda, double gamma,
                                 std::span<const double> step_sizes)
{
    std::vector<Index> order(static_cast<std::size_t>(graph.n_nodes()));
    std::iota(order.begin(), order.end(), Index{0});
    return bsgd_step(theta, stats, graph, lambda, gamma, step_sizes, order);
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration from a
/// fixed pseudo-random start.
inline double power_iteration_norm(const Eigen::MatrixXd& M, double rel_tol = 1e-6, int max_iter = 500)
{
    if (M.rows() == 0) return 0.0;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    Eigen::VectorXd x(M.rows());
    for (Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
    x.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd y = M * x;
        const double next = x.dot(y);
        const double ny = y.norm();
        if (ny == 0.0) return 0.0;
        x = y / ny;
        if (std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
        estimate = next;
    }
    return estimate;
}

/// Spectral norm of a symmetric PSD block.
inline double spectral_norm(const Eigen::MatrixXd& M)
{
    if (M.rows() == 0) return 0.0;
    if (M.rows() <= 64) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return power_iteration_norm(M);
}

/// C_v = (1 + lambda d_v) ||H_v||_2 + gamma + lambda M_v sum_u W_uv M_u.
inline double block_lipschitz(const SufficientStats& stats, const Graph& graph,
                              const std::vector<NodeDictionary>& dicts, double lambda,
                              double gamma, Index v)
{
    const auto sv = static_cast<std::size_t>(v);
    double coupling = 0.0;
    for (const auto& nb : graph.neighbors(v)) {
        coupling += nb.weight * kernel_bound(dicts[static_cast<std::size_t>(nb.node)].kernel());
    }
    return (1.0 + lambda * graph.degree(v)) * spectral_norm(stats.H_pre[sv]) + gamma +
           lambda * kernel_bound(dicts[sv].kernel()) * coupling;
}

struct StepSchedule
{
    double c = 1.0;
    long burn_in = 100;
    long n_post = 100;
};

/// min(c / (t - (bp + n_post - 1)), 1 / C). Valid for t >= bp + n_post.
inline double step_size(long t, const StepSchedule& sched, double lipschitz)
{
    const long k = t - (sched.burn_in + sched.n_post - 1);
    if (k < 1) throw std::out_of_range("step index " + std::to_string(t) + " precedes the first scored step");
    if (!(lipschitz > 0.0)) throw std::invalid_argument("block constant must be positive");
    return std::min(sched.c / static_cast<double>(k), 1.0 / lipschitz);
}

/// Per-node estimates of r_v - 1 at time t.
struct ScoreVector
{
    Eigen::VectorXd values;
    double norm() const { return values.norm(); }
};

/// g_v = theta_v^T h_pre_v, i.e. the window average of theta_v^T k_v(y_{v,j}).
inline ScoreVector score(const ParameterVector& theta, const SufficientStats& stats)
{
    ScoreVector out{Eigen::VectorXd(stats.n_nodes())};
    for (Index v = 0; v < stats.n_nodes(); ++v) {
        out.values(v) = theta[v].dot(stats.h_pre[static_cast<std::size_t>(v)]);
    }
    return out;
}

} // namespace okgd
