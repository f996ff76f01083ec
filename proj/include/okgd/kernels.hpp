#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace okgd {

using Index = Eigen::Index;

using Observation = Eigen::VectorXd;

enum class KernelFamily
{
    gaussian,
    laplacian,
};

inline std::string_view to_string(KernelFamily f)
{
    return f == KernelFamily::gaussian ? "gaussian" : "laplacian";
}

inline KernelFamily parse_kernel_family(std::string_view name)
{
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "laplacian") return KernelFamily::laplacian;
    throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

/// A per-node kernel. Nodes may differ in family, bandwidth and input size.
struct KernelSpec
{
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;
    int input_dim = 1;

    KernelSpec() = default;
    KernelSpec(KernelFamily f, double bw, int dim)
        : family(f), bandwidth(bw), input_dim(dim)
    {
        if (!(bw > 0.0) || !std::isfinite(bw)) {
            throw std::invalid_argument("kernel bandwidth must be positive and finite");
        }
        if (dim <= 0) throw std::invalid_argument("kernel input dimension must be positive");
    }

    double operator()(const Observation& x, const Observation& y) const
    {
        if (x.size() != input_dim || y.size() != input_dim) {
            throw std::invalid_argument("kernel input has dimension " + std::to_string(x.size()) +
                                        "/" + std::to_string(y.size()) + ", expected " +
                                        std::to_string(input_dim));
        }
        switch (family) {
        case KernelFamily::gaussian:
            return std::exp(-(x - y).squaredNorm() / (2.0 * bandwidth * bandwidth));
        case KernelFamily::laplacian:
            return std::exp(-(x - y).lpNorm<1>() / bandwidth);
        }
        return 0.0;
    }
};

inline double eval(const KernelSpec& k, const Observation& x, const Observation& y)
{
    return k(x, y);
}

/// Uniform upper bound of the kernel; both supported families peak at 1.
inline double kernel_bound(const KernelSpec&)
{
    return 1.0;
}

/// Median of all pairwise Euclidean distances (duplicates included).
inline double median_heuristic(const std::vector<Observation>& samples)
{
    if (samples.size() < 2) throw std::invalid_argument("median heuristic needs at least two samples");
    std::vector<double> d;
    d.reserve(samples.size() * (samples.size() - 1) / 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (samples[i].size() != samples[j].size()) {
                throw std::invalid_argument("samples have inconsistent dimensions");
            }
            d.push_back((samples[i] - samples[j]).norm());
        }
    }
    const std::size_t m = d.size();
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(m / 2);
    std::nth_element(d.begin(), mid, d.end());
    double med = *mid;
    if (m % 2 == 0) {
        const double lower = *std::max_element(d.begin(), mid);
        med = 0.5 * (lower + med);
    }
    if (!(med > 0.0)) {
        throw std::invalid_argument("median pairwise distance is zero; bandwidth would be degenerate");
    }
    return med;
}

} // namespace okgd
