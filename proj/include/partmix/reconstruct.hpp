#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "partmix/common.hpp"
#include "partmix/partitions.hpp"
#include "partmix/spectrum.hpp"

namespace partmix {

struct IncoherentClassification {
    bool member = false;
    double max_orbit_deviation = 0.0;
    std::optional<PartitionDistribution> distribution;
    double negativity = 0.0;
    // Within-class values were averaged before inversion.
    bool class_mean_reduction = true;
};

/// Decides membership in the incoherent regime and, when it holds, returns the
/// unique partition quasi-distribution reproducing the spectrum.
inline IncoherentClassification classify(const Spectrum& s, double tolerance = tol::orbit_invariance) {
    IncoherentClassification out;
    const auto rep = is_orbit_invariant(s, tolerance);
    out.max_orbit_deviation = rep.max_deviation;
    if (!rep.invariant) return out;
    try {
        out.distribution = mobius_invert(class_reduce(s), std::max(tolerance, tol::real_solution));
    } catch (const CoherenceResidueError&) {
        return out;
    }
    out.member = true;
    out.negativity = out.distribution->negativity();
    return out;
}

struct MitigationPlan {
    std::vector<SetPartition> partitions;  // lattice order, coarsest first
    std::map<SetPartition, double> weights;
    int order = 0;                         // rows solved
};

/// Correction weights w_Ξ with Σ_{Ξ ⪰ Π} w_Ξ · M_Π = 1 on the first `depth`
/// rows of the lattice (coarsest first). Unsolved partitions get weight 0.
inline MitigationPlan mitigation_weights(const Spectrum& s, std::optional<int> depth = std::nullopt,
                                         double tolerance = tol::orbit_invariance) {
    const auto rep = is_orbit_invariant(s, tolerance);
    if (!rep.invariant)
        throw PreconditionError("mitigation requires an orbit-invariant spectrum (max deviation " +
                                std::to_string(rep.max_deviation) + ")");
    const auto m = class_reduce(s);
    MitigationPlan plan;
    plan.partitions = lattice_order(s.size());
    const int rows = static_cast<int>(plan.partitions.size());
    plan.order = depth ? *depth : rows;
    require_bounds(plan.order >= 0 && plan.order <= rows, "mitigation depth must lie in [0, B_n]");
    for (const auto& p : plan.partitions) plan.weights[p] = 0.0;
    for (int row = 0; row < plan.order; ++row) {
        const auto& pi = plan.partitions[static_cast<std::size_t>(row)];
        const double mv = m.at(pi).real();
        if (std::abs(mv) <= tol::singular)
            throw SingularDiagonalError("M vanishes on class " + pi.to_string() + "; mitigation is singular");
        double acc = 1.0 / mv;
        for (int col = 0; col < row; ++col) {
            const auto& xi = plan.partitions[static_cast<std::size_t>(col)];
            if (refines(xi, pi)) acc -= plan.weights[xi];
        }
        plan.weights[pi] = acc;
    }
    return plan;
}

/// The combination Σ_Ξ w_Ξ · mask_by_partition(s, Ξ).
inline Spectrum mitigated_spectrum(const MitigationPlan& plan, const Spectrum& s) {
    std::vector<Complex> v(s.values().size(), 0.0);
    for (const auto& [xi, w] : plan.weights) {
        if (w == 0.0) continue;
        auto masked = mask_by_partition(s, xi);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] += w * masked.at_rank(r);
    }
    return Spectrum(s.size(), std::move(v));
}

/// Weighted sum of per-partition outcome tables. Tables for partitions with
/// zero weight may be omitted.
template <class Outcome>
std::map<Outcome, double> apply_mitigation(const MitigationPlan& plan,
                                           const std::map<SetPartition, std::map<Outcome, double>>& tables) {
    std::map<Outcome, double> out;
    const std::map<Outcome, double>* reference = nullptr;
    for (const auto& [xi, w] : plan.weights) {
        auto it = tables.find(xi);
        if (it == tables.end()) {
            if (w != 0.0) throw OutcomeMismatchError("missing probability table for " + xi.to_string());
            continue;
        }
        if (!reference) {
            reference = &it->second;
            for (const auto& [o, p] : *reference) out[o] = 0.0;
        } else if (it->second.size() != reference->size()) {
            throw OutcomeMismatchError("probability tables cover different outcome sets");
        }
        for (const auto& [o, p] : it->second) {
            auto slot = out.find(o);
            if (slot == out.end()) throw OutcomeMismatchError("probability tables cover different outcome sets");
            slot->second += w * p;
        }
    }
    return out;
}

}  // namespace partmix
