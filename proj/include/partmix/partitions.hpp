#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "partmix/common.hpp"
#include "partmix/set_partition.hpp"
#include "partmix/symgroup.hpp"

namespace partmix {

/// Spectrum values reduced to one entry per orbit class Π_σ.
using ClassValues = std::map<SetPartition, Complex>;
using RealClassValues = std::map<SetPartition, double>;

namespace detail {
inline bool more_cells_first(const SetPartition& a, const SetPartition& b) {
    if (a.num_cells() != b.num_cells()) return a.num_cells() > b.num_cells();
    return a < b;
}
inline bool fewer_cells_first(const SetPartition& a, const SetPartition& b) {
    if (a.num_cells() != b.num_cells()) return a.num_cells() < b.num_cells();
    return a < b;
}
}  // namespace detail

/// All B_n partitions of {0..n-1}, generated from restricted growth strings.
/// Ordered by decreasing cell count, then lexicographically by cells.
inline std::vector<SetPartition> enumerate_partitions(int n) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "enumerate_partitions: n must lie in [1, 8]");
    std::vector<SetPartition> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    std::vector<int> maxima(static_cast<std::size_t>(n), 0);  // max of rgs[0..i]
    while (true) {
        out.push_back(SetPartition::from_labels(rgs));
        // increment the restricted growth string
        int i = n - 1;
        while (i > 0 && rgs[static_cast<std::size_t>(i)] == maxima[static_cast<std::size_t>(i - 1)] + 1) --i;
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        maxima[static_cast<std::size_t>(i)] = std::max(maxima[static_cast<std::size_t>(i - 1)], rgs[static_cast<std::size_t>(i)]);
        for (int k = i + 1; k < n; ++k) {
            rgs[static_cast<std::size_t>(k)] = 0;
            maxima[static_cast<std::size_t>(k)] = maxima[static_cast<std::size_t>(k - 1)];
        }
    }
    std::sort(out.begin(), out.end(), detail::more_cells_first);
    return out;
}

/// Partitions ordered coarsest first (increasing cell count). This is the
/// row/column order in which the reconstruction matrix is lower-triangular.
inline std::vector<SetPartition> lattice_order(int n) {
    auto parts = enumerate_partitions(n);
    std::sort(parts.begin(), parts.end(), detail::fewer_cells_first);
    return parts;
}

/// Λ ⪰ Ξ: every cell of Ξ lies inside some cell of Λ.
inline bool refines(const SetPartition& coarse, const SetPartition& fine) {
    if (coarse.size() != fine.size()) throw DimensionError("refines: size mismatch");
    const auto& lc = coarse.labels();
    const auto& lf = fine.labels();
    std::vector<int> image(static_cast<std::size_t>(fine.num_cells()), -1);
    for (std::size_t i = 0; i < lf.size(); ++i) {
        int& slot = image[static_cast<std::size_t>(lf[i])];
        if (slot < 0)
            slot = lc[i];
        else if (slot != lc[i])
            return false;
    }
    return true;
}

/// |S_Λ| = ∏ |Λ_i|!
inline std::uint64_t stabilizer_size(const SetPartition& p) {
    std::uint64_t s = 1;
    for (int c : p.cell_sizes()) s *= factorial(c);
    return s;
}

/// 0/1 incidence matrix of the refinement order over the partition lattice.
struct ReconstructionMatrix {
    int n = 0;
    std::vector<SetPartition> index;               // rows and columns, coarsest first
    std::vector<std::vector<std::uint8_t>> entry;  // entry[row][col] = 1 iff index[col] ⪰ index[row]

    std::size_t dim() const { return index.size(); }
};

inline ReconstructionMatrix build_reconstruction_matrix(int n) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "build_reconstruction_matrix: n must lie in [1, 8]");
    ReconstructionMatrix r;
    r.n = n;
    r.index = lattice_order(n);
    const auto b = r.index.size();
    r.entry.assign(b, std::vector<std::uint8_t>(b, 0));
    for (std::size_t row = 0; row < b; ++row)
        for (std::size_t col = 0; col <= row; ++col)  // ⪰ implies fewer-or-equal cells, so col ≤ row
            r.entry[row][col] = refines(r.index[col], r.index[row]) ? 1 : 0;
    return r;
}

/// Quasi-probability weights p_Λ over every partition of {0..n-1}.
class PartitionDistribution {
public:
    PartitionDistribution() = default;

    /// Missing partitions get weight 0; keys must all be partitions of n.
    PartitionDistribution(int n, const RealClassValues& weights) : n_(n) {
        for (const auto& p : enumerate_partitions(n)) weights_[p] = 0.0;
        for (const auto& [p, w] : weights) {
            if (p.size() != n) throw DimensionError("partition distribution key has wrong size");
            weights_[p] = w;
        }
    }

    static PartitionDistribution delta(const SetPartition& p) { return PartitionDistribution(p.size(), {{p, 1.0}}); }

    int size() const noexcept { return n_; }
    const RealClassValues& weights() const noexcept { return weights_; }
    double weight(const SetPartition& p) const { return weights_.at(p); }

    double total() const {
        double s = 0;
        for (const auto& [p, w] : weights_) s += w;
        return s;
    }

    /// Σ max(0, −p_Λ)
    double negativity() const {
        double s = 0;
        for (const auto& [p, w] : weights_) s += std::max(0.0, -w);
        return s;
    }

    std::size_t nonzero_count(double eps = 0.0) const {
        std::size_t c = 0;
        for (const auto& [p, w] : weights_) c += std::abs(w) > eps;
        return c;
    }

private:
    int n_ = 0;
    RealClassValues weights_;
};

/// M_Π = Σ_{Λ ⪰ Π} p_Λ for every class Π.
inline RealClassValues forward_map(const PartitionDistribution& p) {
    const auto parts = lattice_order(p.size());
    RealClassValues out;
    for (const auto& row : parts) {
        double m = 0;
        for (const auto& [lam, w] : p.weights())
            if (w != 0.0 && refines(lam, row)) m += w;
        out[row] = m;
    }
    return out;
}

/// Solves M_Π = Σ_{Λ ⪰ Π} p_Λ by forward substitution over the lattice,
/// coarsest partition first. Fails if any solved weight keeps an imaginary
/// part above `imag_tol`.
inline PartitionDistribution mobius_invert(const ClassValues& m_by_class, double imag_tol = tol::real_solution) {
    if (m_by_class.empty()) throw DimensionError("mobius_invert: empty input");
    const int n = m_by_class.begin()->first.size();
    const auto parts = lattice_order(n);
    if (m_by_class.size() != parts.size())
        throw DimensionError("mobius_invert: input must be keyed by all B_n partitions");
    std::vector<Complex> solved(parts.size());
    RealClassValues weights;
    for (std::size_t row = 0; row < parts.size(); ++row) {
        auto it = m_by_class.find(parts[row]);
        if (it == m_by_class.end()) throw DimensionError("mobius_invert: missing class " + parts[row].to_string());
        Complex acc = it->second;
        for (std::size_t col = 0; col < row; ++col)
            if (refines(parts[col], parts[row])) acc -= solved[col];
        solved[row] = acc;
        if (std::abs(acc.imag()) > imag_tol)
            throw CoherenceResidueError("partition weight for " + parts[row].to_string() +
                                        " has imaginary part " + std::to_string(acc.imag()));
        weights[parts[row]] = acc.real();
    }
    return PartitionDistribution(n, weights);
}

inline PartitionDistribution mobius_invert(const RealClassValues& m_by_class) {
    ClassValues c;
    for (const auto& [p, v] : m_by_class) c[p] = v;
    return mobius_invert(c);
}

}  // namespace partmix
