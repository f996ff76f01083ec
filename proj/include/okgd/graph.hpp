#pragma once

#include "errors.hpp"
#include "kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace okgd {

// One scalar per node.
using GraphSignal = Eigen::VectorXd;

struct Neighbor
{
    Index node;
    double weight;
};

/// Weighted undirected graph without self-loops.
///
/// Weights are held densely (n is desk-scale) and mirrored on construction;
/// a per-node neighbor list is kept alongside for the update path, which only
/// touches adjacent nodes.
class Graph
{
public:
    Graph() = default;

    explicit Graph(Index n_nodes)
        : weights_(Eigen::MatrixXd::Zero(n_nodes, n_nodes)),
          degrees_(Eigen::VectorXd::Zero(n_nodes)),
          neighbors_(static_cast<std::size_t>(n_nodes))
    {
        if (n_nodes <= 0) {
            throw std::invalid_argument("graph must have at least one node");
        }
    }

    /// Builds from a square matrix; the upper triangle is taken as
    /// authoritative and mirrored. The diagonal must be zero.
    static Graph from_weights(const Eigen::MatrixXd& w)
    {
        if (w.rows() != w.cols()) {
            throw std::invalid_argument("weight matrix must be square");
        }
        Graph g(w.rows());
        for (Index u = 0; u < w.rows(); ++u) {
            if (w(u, u) != 0.0) {
                throw std::invalid_argument("self-loop at node " + std::to_string(u));
            }
            for (Index v = u + 1; v < w.cols(); ++v) {
                if (w(u, v) != 0.0) g.add_edge(u, v, w(u, v));
            }
        }
        return g;
    }

    /// Adds weight w to the unordered pair (u, v).
    void add_edge(Index u, Index v, double w = 1.0)
    {
        check_node(u);
        check_node(v);
        if (u == v) {
            throw std::invalid_argument("self-loop at node " + std::to_string(u));
        }
        if (!(w >= 0.0)) {
            throw std::invalid_argument("edge weights must be nonnegative");
        }
        if (w == 0.0) return;
        const bool existed = weights_(u, v) != 0.0;
        weights_(u, v) += w;
        weights_(v, u) = weights_(u, v);
        degrees_(u) += w;
        degrees_(v) += w;
        if (existed) {
            for (auto& nb : neighbors_[static_cast<std::size_t>(u)])
                if (nb.node == v) nb.weight = weights_(u, v);
            for (auto& nb : neighbors_[static_cast<std::size_t>(v)])
                if (nb.node == u) nb.weight = weights_(u, v);
        } else {
            insert_sorted(neighbors_[static_cast<std::size_t>(u)], {v, w});
            insert_sorted(neighbors_[static_cast<std::size_t>(v)], {u, w});
        }
    }

    Index n_nodes() const { return weights_.rows(); }
    const Eigen::MatrixXd& weights() const { return weights_; }
    const Eigen::VectorXd& degrees() const { return degrees_; }
    double weight(Index u, Index v) const { return weights_(u, v); }
    double degree(Index v) const { return degrees_(v); }

    /// Neighbors of v in ascending node order.
    const std::vector<Neighbor>& neighbors(Index v) const
    {
        return neighbors_[static_cast<std::size_t>(v)];
    }

    std::size_t n_edges() const
    {
        std::size_t total = 0;
        for (const auto& nb : neighbors_) total += nb.size();
        return total / 2;
    }

    double average_degree() const { return degrees_.mean(); }

private:
    void check_node(Index v) const
    {
        if (v < 0 || v >= n_nodes()) {
            throw std::out_of_range("node index " + std::to_string(v) + " out of range");
        }
    }

    static void insert_sorted(std::vector<Neighbor>& list, Neighbor nb)
    {
        auto it = std::lower_bound(list.begin(), list.end(), nb.node,
                                   [](const Neighbor& a, Index n) { return a.node < n; });
        list.insert(it, nb);
    }

    Eigen::MatrixXd weights_;
    Eigen::VectorXd degrees_;
    std::vector<std::vector<Neighbor>> neighbors_;
};

/// Combinatorial Laplacian diag(d) - W.
inline Eigen::MatrixXd laplacian(const Graph& g)
{
    Eigen::MatrixXd lap = -g.weights();
    lap.diagonal() = g.degrees();
    return lap;
}

/// x^T L x.
inline double smoothness(const Graph& g, const GraphSignal& x)
{
    if (x.size() != g.n_nodes()) {
        throw std::invalid_argument("signal length does not match graph size");
    }
    return x.dot(laplacian(g) * x);
}

/// 1/2 sum_{u,v} W_uv (x_u - x_v)^2, accumulated over the neighbor lists.
inline double smoothness_pairwise(const Graph& g, const GraphSignal& x)
{
    if (x.size() != g.n_nodes()) {
        throw std::invalid_argument("signal length does not match graph size");
    }
    double total = 0.0;
    for (Index u = 0; u < g.n_nodes(); ++u) {
        for (const auto& nb : g.neighbors(u)) {
            const double diff = x(u) - x(nb.node);
            total += nb.weight * diff * diff;
        }
    }
    return 0.5 * total;
}

struct ClusteredGraph
{
    Graph graph;
    std::vector<Index> labels;
};

/// Stochastic block model with equal cluster sizes and unit-weight edges.
/// Pairs are visited in (u < v) lexicographic order, one Bernoulli draw each.
inline ClusteredGraph sample_sbm(Index n_clusters, Index cluster_size, double p_intra,
                                 double p_inter, std::uint64_t seed)
{
    if (n_clusters <= 0 || cluster_size <= 0) {
        throw std::invalid_argument("cluster count and size must be positive");
    }
    if (p_intra < 0.0 || p_intra > 1.0 || p_inter < 0.0 || p_inter > 1.0) {
        throw std::invalid_argument("edge probabilities must lie in [0, 1]");
    }
    const Index n = n_clusters * cluster_size;
    ClusteredGraph out{Graph(n), std::vector<Index>(static_cast<std::size_t>(n))};
    for (Index v = 0; v < n; ++v) out.labels[static_cast<std::size_t>(v)] = v / cluster_size;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            const bool same = out.labels[static_cast<std::size_t>(u)] ==
                              out.labels[static_cast<std::size_t>(v)];
            if (unif(rng) < (same ? p_intra : p_inter)) out.graph.add_edge(u, v, 1.0);
        }
    }
    return out;
}

/// Unit-weight k-nearest-neighbor graph (Euclidean), symmetrized by union.
/// Distance ties resolve to the lower node index.
inline Graph knn_graph(const std::vector<Eigen::VectorXd>& points, Index k)
{
    const auto n = static_cast<Index>(points.size());
    if (n < 2) throw std::invalid_argument("k-NN graph needs at least two points");
    if (k <= 0 || k >= n) throw std::invalid_argument("k must satisfy 0 < k < number of points");

    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (Index u = 0; u < n; ++u) {
        for (Index v = 0; v < n; ++v) {
            if (points[static_cast<std::size_t>(v)].size() != points[static_cast<std::size_t>(u)].size()) {
                throw std::invalid_argument("points have inconsistent dimensions");
            }
            dist[static_cast<std::size_t>(v)] =
                (points[static_cast<std::size_t>(u)] - points[static_cast<std::size_t>(v)]).squaredNorm();
        }
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        std::erase(order, u);
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
            return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
        });
        for (Index i = 0; i < k; ++i) {
            const Index v = order[static_cast<std::size_t>(i)];
            adj(u, v) = 1.0;
            adj(v, u) = 1.0;
        }
    }
    return Graph::from_weights(adj);
}

/// Reads `u v w` lines (0-based, whitespace separated); `#` lines are skipped.
/// Node count is max index + 1 unless `n_nodes` is given.
inline Graph read_edge_list(std::istream& in, Index n_nodes = 0)
{
    struct Edge { Index u, v; double w; };
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    Index max_index = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        Edge e{};
        std::string extra;
        if (!(ls >> e.u >> e.v >> e.w) || (ls >> extra)) {
            throw DataError("malformed edge on line " + std::to_string(line_no));
        }
        if (e.u < 0 || e.v < 0) {
            throw DataError("negative node index on line " + std::to_string(line_no));
        }
        max_index = std::max({max_index, e.u, e.v});
        edges.push_back(e);
    }
    const Index n = n_nodes > 0 ? n_nodes : max_index + 1;
    if (n <= 0) throw DataError("edge list names no nodes");
    if (max_index >= n) {
        throw DataError("edge list references node " + std::to_string(max_index) +
                                 " but graph has " + std::to_string(n) + " nodes");
    }
    Graph g(n);
    for (const auto& e : edges) {
        if (g.weight(e.u, e.v) != 0.0) {
            throw DataError("duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
        }
        try {
            g.add_edge(e.u, e.v, e.w);
        } catch (const std::invalid_argument& err) {
            throw DataError(std::string("bad edge ") + std::to_string(e.u) + " " + std::to_string(e.v) + ": " + err.what());
        }
    }
    return g;
}

inline Graph read_edge_list(const std::string& path, Index n_nodes = 0)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open graph file: " + path);
    return read_edge_list(in, n_nodes);
}

inline void write_edge_list(std::ostream& out, const Graph& g)
{
    out.precision(17);
    out << "# u v w (" << g.n_nodes() << " nodes)\n";
    for (Index u = 0; u < g.n_nodes(); ++u) {
        for (const auto& nb : g.neighbors(u)) {
            if (nb.node > u) out << u << ' ' << nb.node << ' ' << nb.weight << '\n';
        }
    }
}

} // namespace okgd
