#pragma once

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "partmix/common.hpp"
#include "partmix/partitions.hpp"
#include "partmix/states.hpp"
#include "partmix/symgroup.hpp"

namespace partmix {

namespace detail {

// Per-n tables shared by all spectra: the permutations in rank order, their
// orbit partitions and cycle types.
struct GroupTables {
    std::vector<Permutation> perms;
    std::vector<SetPartition> orbit;
    std::vector<std::vector<int>> type;
};

inline const GroupTables& group_tables(int n) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "spectra support 1 <= n <= 8");
    static std::array<GroupTables, kMaxEnumerationSize + 1> tables;
    static std::array<std::once_flag, kMaxEnumerationSize + 1> once;
    std::call_once(once[static_cast<std::size_t>(n)], [n] {
        auto& t = tables[static_cast<std::size_t>(n)];
        t.perms = enumerate(n);
        for (const auto& p : t.perms) {
            t.orbit.push_back(cycle_partition(p));
            t.type.push_back(p.cycle_type());
        }
    });
    return tables[static_cast<std::size_t>(n)];
}

}  // namespace detail

/// Dense map σ → M_σ over all of S_n, stored in permutation-rank order.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(int n, std::vector<Complex> values) : n_(n), values_(std::move(values)) {
        if (values_.size() != factorial(n)) throw DimensionError("spectrum needs n! values");
    }

    static Spectrum constant(int n, Complex v) { return Spectrum(n, std::vector<Complex>(factorial(n), v)); }

    /// Orbit-invariant spectrum taking value m[Π_σ] at σ.
    static Spectrum from_classes(int n, const ClassValues& m) {
        const auto& t = detail::group_tables(n);
        std::vector<Complex> v(t.perms.size());
        for (std::size_t r = 0; r < v.size(); ++r) v[r] = m.at(t.orbit[r]);
        return Spectrum(n, std::move(v));
    }

    static Spectrum from_classes(int n, const RealClassValues& m) {
        ClassValues c;
        for (const auto& [p, x] : m) c[p] = x;
        return from_classes(n, c);
    }

    int size() const noexcept { return n_; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    Complex at(const Permutation& s) const { return values_.at(s.rank()); }
    Complex at_rank(std::size_t r) const { return values_.at(r); }
    Complex identity_value() const { return values_.front(); }
    const std::vector<Permutation>& permutations() const { return detail::group_tables(n_).perms; }

    double max_abs_diff(const Spectrum& o) const {
        if (o.n_ != n_) throw DimensionError("spectrum size mismatch");
        double d = 0;
        for (std::size_t r = 0; r < values_.size(); ++r) d = std::max(d, std::abs(values_[r] - o.values_[r]));
        return d;
    }

private:
    int n_ = 0;
    std::vector<Complex> values_;
};

/// M_σ = ∏ over cycles (c0 c1 … ck−1) of σ of Tr(ρ_c0 ρ_c1 … ρ_ck−1), where
/// c_{j+1} = σ(c_j). For pure photons this is ∏_j ⟨ψ_j|ψ_σ(j)⟩.
inline Spectrum spectrum_of(const ProductState& state) {
    const int n = state.size();
    const auto& t = detail::group_tables(n);
    std::vector<Complex> v(t.perms.size());
    parallel_for(v.size(), [&](std::size_t r) {
        Complex m = 1.0;
        for (const auto& cyc : t.perms[r].cycles()) {
            if (cyc.size() == 1) {
                m *= state.photon(cyc[0]).rho().trace();
                continue;
            }
            Matrix prod = state.photon(cyc[0]).rho();
            for (std::size_t k = 1; k < cyc.size(); ++k) prod = prod * state.photon(cyc[k]).rho();
            m *= prod.trace();
        }
        v[r] = m;
    });
    return Spectrum(n, std::move(v));
}

inline Spectrum spectrum_of(const Mixture& mix) {
    const int n = mix.size();
    std::vector<Complex> v(factorial(n), 0.0);
    for (const auto& c : mix.components) {
        auto s = spectrum_of(c.state);
        for (std::size_t r = 0; r < v.size(); ++r) v[r] += c.weight * s.at_rank(r);
    }
    return Spectrum(n, std::move(v));
}

inline Spectrum spectrum_of(const PartitionState& ps) { return spectrum_of(ps.state); }

struct OrbitReport {
    bool invariant = true;
    double max_deviation = 0.0;
    std::optional<Permutation> worst_a, worst_b;
};

/// Checks that M_σ depends only on the orbit partition Π_σ.
inline OrbitReport is_orbit_invariant(const Spectrum& s, double tolerance = tol::orbit_invariance) {
    const auto& t = detail::group_tables(s.size());
    std::map<SetPartition, std::vector<std::size_t>> classes;
    for (std::size_t r = 0; r < t.perms.size(); ++r) classes[t.orbit[r]].push_back(r);
    OrbitReport rep;
    for (const auto& [p, members] : classes) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                double d = std::abs(s.at_rank(members[i]) - s.at_rank(members[j]));
                if (d > rep.max_deviation) {
                    rep.max_deviation = d;
                    rep.worst_a = t.perms[members[i]];
                    rep.worst_b = t.perms[members[j]];
                }
            }
    }
    rep.invariant = rep.max_deviation <= tolerance;
    return rep;
}

/// Arithmetic mean of M over each orbit class.
inline ClassValues class_reduce(const Spectrum& s) {
    const auto& t = detail::group_tables(s.size());
    std::map<SetPartition, std::pair<Complex, int>> acc;
    for (std::size_t r = 0; r < t.perms.size(); ++r) {
        auto& a = acc[t.orbit[r]];
        a.first += s.at_rank(r);
        ++a.second;
    }
    ClassValues out;
    for (const auto& [p, a] : acc) out[p] = a.first / static_cast<double>(a.second);
    return out;
}

/// Conjugacy-class average: M'_σ = (1/n!) Σ_τ M_{τστ⁻¹}.
inline Spectrum twirl(const Spectrum& s) {
    const auto& t = detail::group_tables(s.size());
    std::map<std::vector<int>, std::pair<Complex, int>> acc;
    for (std::size_t r = 0; r < t.perms.size(); ++r) {
        auto& a = acc[t.type[r]];
        a.first += s.at_rank(r);
        ++a.second;
    }
    std::vector<Complex> v(t.perms.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        const auto& a = acc.at(t.type[r]);
        v[r] = a.first / static_cast<double>(a.second);
    }
    return Spectrum(s.size(), std::move(v));
}

/// M'_σ = (1/∏(|σ_i|−1)!) Σ_{Π_τ = Π_σ} M_τ. The τ sharing Π_σ are exactly
/// the single-cycle orderings of each cell, so the sum has ∏(|σ_i|−1)! terms.
inline Spectrum strict_projection(const Spectrum& s) {
    const auto& t = detail::group_tables(s.size());
    std::map<SetPartition, Complex> sums;
    for (std::size_t r = 0; r < t.perms.size(); ++r) sums[t.orbit[r]] += s.at_rank(r);
    std::vector<Complex> v(t.perms.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        std::uint64_t norm = 1;
        for (int c : t.orbit[r].cell_sizes()) norm *= factorial(c - 1);
        v[r] = sums.at(t.orbit[r]) / static_cast<double>(norm);
    }
    return Spectrum(s.size(), std::move(v));
}

/// Mean of M over the (n−1)! maximal cycles.
inline Complex gi_part(const Spectrum& s) {
    const auto& t = detail::group_tables(s.size());
    Complex acc = 0;
    for (std::size_t r = 0; r < t.perms.size(); ++r)
        if (t.orbit[r].num_cells() == 1) acc += s.at_rank(r);
    return acc / static_cast<double>(factorial(s.size() - 1));
}

/// (1/n!) Σ_σ M_σ. Real for any conjugate-symmetric spectrum.
inline double gi_sym(const Spectrum& s) {
    Complex acc = 0;
    for (const auto& v : s.values()) acc += v;
    return acc.real() / static_cast<double>(s.values().size());
}

/// Spectrum after making the cells of Λ mutually distinguishable: M_σ is kept
/// when Π_σ ⪯ Λ and zeroed otherwise.
inline Spectrum mask_by_partition(const Spectrum& s, const SetPartition& lam) {
    if (lam.size() != s.size()) throw DimensionError("mask_by_partition: size mismatch");
    const auto& t = detail::group_tables(s.size());
    std::vector<Complex> v(t.perms.size());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = refines(lam, t.orbit[r]) ? s.at_rank(r) : Complex(0.0);
    return Spectrum(s.size(), std::move(v));
}

}  // namespace partmix
