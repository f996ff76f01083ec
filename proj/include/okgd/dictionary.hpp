#pragma once

#include "kernels.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace okgd {

/// Kernel atoms of one node, grown online by the coherence criterion: a new
/// observation is admitted when its largest kernel value against the current
/// atoms is at most mu0.
class NodeDictionary
{
public:
    NodeDictionary(KernelSpec kernel, Observation first, double mu0)
        : kernel_(kernel), mu0_(mu0)
    {
        if (!(mu0 > 0.0 && mu0 < 1.0)) {
            throw std::invalid_argument("coherence threshold must lie in (0, 1)");
        }
        check_dim(first);
        atoms_.push_back(std::move(first));
    }

    static NodeDictionary init(const KernelSpec& kernel, const Observation& first, double mu0)
    {
        return NodeDictionary(kernel, first, mu0);
    }

    double coherence(const Observation& obs) const
    {
        check_dim(obs);
        double best = 0.0;
        for (const auto& a : atoms_) best = std::max(best, kernel_(obs, a));
        return best;
    }

    /// Returns true when obs was appended.
    bool maybe_add(const Observation& obs)
    {
        if (coherence(obs) <= mu0_) {
            atoms_.push_back(obs);
            return true;
        }
        return false;
    }

    Eigen::VectorXd featurize(const Observation& obs) const
    {
        check_dim(obs);
        Eigen::VectorXd out(size());
        for (Index l = 0; l < size(); ++l) out(l) = kernel_(obs, atoms_[static_cast<std::size_t>(l)]);
        return out;
    }

    Index size() const { return static_cast<Index>(atoms_.size()); }
    const std::vector<Observation>& atoms() const { return atoms_; }
    const KernelSpec& kernel() const { return kernel_; }
    double mu0() const { return mu0_; }

private:
    void check_dim(const Observation& obs) const
    {
        if (obs.size() != kernel_.input_dim) {
            throw std::invalid_argument("observation has dimension " + std::to_string(obs.size()) +
                                        ", dictionary expects " + std::to_string(kernel_.input_dim));
        }
    }

    KernelSpec kernel_;
    double mu0_;
    std::vector<Observation> atoms_;
};

} // namespace okgd
