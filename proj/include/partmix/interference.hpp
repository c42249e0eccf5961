#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "partmix/common.hpp"
#include "partmix/partitions.hpp"
#include "partmix/spectrum.hpp"
#include "partmix/states.hpp"
#include "partmix/symgroup.hpp"

namespace partmix {

/// Mode-occupation vector s̄ of an m-mode output.
struct OutcomePattern {
    std::vector<int> occupations;

    OutcomePattern() = default;
    explicit OutcomePattern(std::vector<int> occ) : occupations(std::move(occ)) {
        for (int s : occupations)
            if (s < 0) throw DimensionError("occupations must be nonnegative");
    }

    int modes() const { return static_cast<int>(occupations.size()); }
    int total() const { return std::accumulate(occupations.begin(), occupations.end(), 0); }
    bool collision_free() const {
        return std::all_of(occupations.begin(), occupations.end(), [](int s) { return s <= 1; });
    }
    std::vector<int> occupied_modes() const {
        std::vector<int> out;
        for (int j = 0; j < modes(); ++j)
            for (int c = 0; c < occupations[static_cast<std::size_t>(j)]; ++c) out.push_back(j);
        return out;
    }
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < occupations.size(); ++i) s += (i ? "," : "") + std::to_string(occupations[i]);
        return s + "]";
    }

    friend bool operator==(const OutcomePattern&, const OutcomePattern&) = default;
    friend auto operator<=>(const OutcomePattern& a, const OutcomePattern& b) { return a.occupations <=> b.occupations; }
};

using OutcomeDistribution = std::map<OutcomePattern, double>;

inline double unitarity_defect(const Matrix& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Square unitary scattering matrix; entry (i, j) is the amplitude from input
/// mode i to output mode j. Photons enter the listed input modes.
class Interferometer {
public:
    Interferometer() = default;

    Interferometer(Matrix u, std::vector<int> input_modes, double tolerance = tol::unitarity)
        : u_(std::move(u)), inputs_(std::move(input_modes)) {
        if (u_.rows() == 0 || u_.rows() != u_.cols()) throw DimensionError("scattering matrix must be square");
        defect_ = unitarity_defect(u_);
        if (defect_ > tolerance) throw NotUnitaryError("scattering matrix unitarity defect " + std::to_string(defect_));
        std::vector<bool> seen(static_cast<std::size_t>(modes()), false);
        for (int i : inputs_) {
            if (i < 0 || i >= modes() || seen[static_cast<std::size_t>(i)])
                throw DimensionError("input modes must be distinct and within range");
            seen[static_cast<std::size_t>(i)] = true;
        }
    }

    /// Photons enter modes 0..n−1.
    Interferometer(Matrix u, int n, double tolerance = tol::unitarity)
        : Interferometer(std::move(u), first_modes(n), tolerance) {}

    int modes() const { return static_cast<int>(u_.rows()); }
    int photons() const { return static_cast<int>(inputs_.size()); }
    const Matrix& matrix() const noexcept { return u_; }
    const std::vector<int>& input_modes() const noexcept { return inputs_; }
    double defect() const noexcept { return defect_; }
    Complex operator()(int in, int out) const { return u_(in, out); }

    static std::vector<int> first_modes(int n) {
        std::vector<int> v(static_cast<std::size_t>(n));
        std::iota(v.begin(), v.end(), 0);
        return v;
    }

private:
    Matrix u_;
    std::vector<int> inputs_;
    double defect_ = 0.0;
};

enum class PermanentMethod { naive, ryser };

/// Sum over S_k of ∏ A(i, σ(i)).
inline Complex permanent_naive(const Matrix& a) {
    const int k = static_cast<int>(a.rows());
    if (a.cols() != k) throw DimensionError("permanent needs a square matrix");
    require_bounds(k <= 8, "naive permanent limited to k <= 8");
    if (k == 0) return 1.0;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    Complex sum = 0;
    do {
        Complex prod = 1;
        for (int i = 0; i < k; ++i) prod *= a(i, p[static_cast<std::size_t>(i)]);
        sum += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return sum;
}

/// Ryser inclusion-exclusion over column subsets, visited in Gray-code order
/// so each step updates the row sums with a single column.
inline Complex permanent_ryser(const Matrix& a) {
    const int k = static_cast<int>(a.rows());
    if (a.cols() != k) throw DimensionError("permanent needs a square matrix");
    require_bounds(k <= 16, "Ryser permanent limited to k <= 16");
    if (k == 0) return 1.0;
    std::vector<Complex> rowsum(static_cast<std::size_t>(k), 0.0);
    Complex total = 0;
    std::uint32_t gray = 0;
    const std::uint32_t subsets = 1u << k;
    for (std::uint32_t step = 1; step < subsets; ++step) {
        const int col = std::countr_zero(step);
        const std::uint32_t bit = 1u << col;
        const bool adding = !(gray & bit);
        gray ^= bit;
        for (int i = 0; i < k; ++i) rowsum[static_cast<std::size_t>(i)] += adding ? a(i, col) : -a(i, col);
        Complex prod = 1;
        for (int i = 0; i < k; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
        total += (std::popcount(gray) & 1) ? -prod : prod;
    }
    return (k & 1) ? -total : total;
}

inline Complex permanent(const Matrix& a, PermanentMethod method = PermanentMethod::ryser) {
    return method == PermanentMethod::naive ? permanent_naive(a) : permanent_ryser(a);
}

/// X_σ = ∏_i U(in_i, out_σ(i)).
inline Complex path_amplitude(const Matrix& u, const Permutation& sigma, const std::vector<int>& inputs,
                              const std::vector<int>& outputs) {
    const int n = sigma.size();
    if (static_cast<int>(inputs.size()) != n || static_cast<int>(outputs.size()) != n)
        throw DimensionError("path_amplitude: index lists must have n entries");
    Complex x = 1;
    for (int i = 0; i < n; ++i) {
        const int r = inputs[static_cast<std::size_t>(i)];
        const int c = outputs[static_cast<std::size_t>(sigma(i))];
        if (r < 0 || c < 0 || r >= u.rows() || c >= u.cols()) throw BoundsError("path_amplitude: index out of range");
        x *= u(r, c);
    }
    return x;
}

/// Submatrix with rows = given inputs and columns = given outputs (repeats allowed).
inline Matrix submatrix(const Matrix& u, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(rows[i], cols[j]);
    return a;
}

/// q_ρ = Σ_τ X_τ X*_{τρ} for each ρ (rank order), written as Perm(A ∘ A*_ρ⁻¹)
/// where A is the n×n outcome submatrix.
inline std::vector<Complex> interference_weights(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    const auto& t = detail::group_tables(n);
    std::vector<Complex> q(t.perms.size());
    parallel_for(q.size(), [&](std::size_t r) {
        const auto inv = t.perms[r].inverse();
        Matrix b(n, n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) b(k, j) = a(k, j) * std::conj(a(inv(k), j));
        q[r] = permanent_ryser(b);
    }, 16);
    return q;
}

inline double probability_from_weights(const Spectrum& s, const std::vector<Complex>& q) {
    Complex p = 0;
    for (std::size_t r = 0; r < q.size(); ++r) p += s.at_rank(r) * q[r];
    return p.real();
}

/// Outcome probability Σ_ρ M_ρ Σ_τ X_τ X*_{τρ} for a collision-free pattern.
inline double probability_from_spectrum(const Interferometer& u, const Spectrum& s, const OutcomePattern& outcome) {
    if (outcome.modes() != u.modes()) throw DimensionError("outcome has wrong number of modes");
    if (outcome.total() != s.size()) throw DimensionError("outcome photon count differs from spectrum size");
    if (u.photons() != s.size()) throw DimensionError("interferometer photon count differs from spectrum size");
    if (!outcome.collision_free())
        throw UnsupportedOutcomeError("bunched outcome " + outcome.to_string() +
                                      ": use partition_probability or fock_oracle_probability");
    require_bounds(s.size() <= 7, "probability_from_spectrum supports n <= 7");
    const auto a = submatrix(u.matrix(), u.input_modes(), outcome.occupied_modes());
    return probability_from_weights(s, interference_weights(a));
}

/// All C(m+n−1, n) patterns of n photons in m modes, lexicographically descending.
inline std::vector<OutcomePattern> enumerate_outcomes(int modes, int photons) {
    std::vector<OutcomePattern> out;
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == modes - 1) {
            occ[static_cast<std::size_t>(mode)] = left;
            out.emplace_back(occ);
            return;
        }
        for (int c = left; c >= 0; --c) {
            occ[static_cast<std::size_t>(mode)] = c;
            rec(mode + 1, left - c);
        }
    };
    if (modes <= 0) throw DimensionError("need at least one mode");
    rec(0, photons);
    return out;
}

/// Ideal-boson probability for indistinguishable photons entering `rows`:
/// |Perm(U[rows, repeated cols])|² / ∏ t_j!.
inline double indistinguishable_probability(const Matrix& u, const std::vector<int>& rows, const OutcomePattern& t) {
    double norm = 1;
    for (int c : t.occupations) norm *= static_cast<double>(factorial(c));
    return std::norm(permanent_ryser(submatrix(u, rows, t.occupied_modes()))) / norm;
}

/// Probability of `outcome` for the partition state of Λ: a classical
/// convolution of the cells, each interfering perfectly within itself.
inline double partition_probability(const Interferometer& u, const SetPartition& lam, const OutcomePattern& outcome) {
    if (lam.size() != u.photons()) throw DimensionError("partition size differs from photon count");
    if (outcome.modes() != u.modes()) throw DimensionError("outcome has wrong number of modes");
    if (outcome.total() != lam.size()) throw DimensionError("outcome photon count differs from partition size");
    const auto& cells = lam.cells();
    std::vector<int> remaining = outcome.occupations;
    std::vector<int> part(remaining.size(), 0);
    // Recurse over cells; within a cell distribute its photons over modes.
    std::function<double(std::size_t)> over_cells = [&](std::size_t c) -> double {
        if (c == cells.size()) return 1.0;
        std::vector<int> rows;
        for (int i : cells[c]) rows.push_back(u.input_modes()[static_cast<std::size_t>(i)]);
        const int k = static_cast<int>(rows.size());
        double total = 0;
        std::function<void(int, int)> spread = [&](int mode, int left) {
            if (mode == static_cast<int>(remaining.size())) {
                if (left) return;
                const double pc = indistinguishable_probability(u.matrix(), rows, OutcomePattern(part));
                if (pc == 0.0) return;
                for (std::size_t j = 0; j < part.size(); ++j) remaining[j] -= part[j];
                total += pc * over_cells(c + 1);
                for (std::size_t j = 0; j < part.size(); ++j) remaining[j] += part[j];
                return;
            }
            const int cap = std::min(left, remaining[static_cast<std::size_t>(mode)]);
            for (int v = cap; v >= 0; --v) {
                part[static_cast<std::size_t>(mode)] = v;
                spread(mode + 1, left - v);
            }
            part[static_cast<std::size_t>(mode)] = 0;
        };
        auto saved = part;
        std::fill(part.begin(), part.end(), 0);
        spread(0, k);
        part = saved;
        return total;
    };
    return over_cells(0);
}

/// Σ_Λ p_Λ · partition_probability(Λ).
inline double mixture_probability(const Interferometer& u, const PartitionDistribution& p, const OutcomePattern& outcome) {
    double acc = 0;
    for (const auto& [lam, w] : p.weights())
        if (w != 0.0) acc += w * partition_probability(u, lam, outcome);
    return acc;
}

namespace detail {

// Expands ∏_i (Σ_{j,α} U(in_i, j) ψ_i(α) b†_{j,α}) |0⟩ restricted to the
// occupied output modes and sums |c_K|² ∏ n_k! over the monomials whose
// spatial occupation matches the outcome.
inline double fock_pure_probability(const Interferometer& u, const std::vector<Vector>& kets,
                                    const OutcomePattern& outcome) {
    const int d = static_cast<int>(kets.front().size());
    std::vector<int> occ;
    for (int j = 0; j < outcome.modes(); ++j)
        if (outcome.occupations[static_cast<std::size_t>(j)] > 0) occ.push_back(j);
    std::map<std::vector<int>, Complex> terms{{{}, 1.0}};
    for (std::size_t i = 0; i < kets.size(); ++i) {
        const int in = u.input_modes()[i];
        std::map<std::vector<int>, Complex> next;
        for (const auto& [key, c] : terms) {
            for (std::size_t jj = 0; jj < occ.size(); ++jj) {
                const Complex uj = u(in, occ[jj]);
                if (uj == 0.0) continue;
                for (int a = 0; a < d; ++a) {
                    const Complex amp = uj * kets[i](a);
                    if (amp == 0.0) continue;
                    auto k2 = key;
                    k2.insert(std::upper_bound(k2.begin(), k2.end(), static_cast<int>(jj) * d + a),
                              static_cast<int>(jj) * d + a);
                    next[k2] += c * amp;
                }
            }
        }
        terms = std::move(next);
    }
    double p = 0;
    for (const auto& [key, c] : terms) {
        std::vector<int> spatial(occ.size(), 0);
        double mult = 1;
        std::size_t run = 1;
        for (std::size_t r = 0; r < key.size(); ++r) {
            ++spatial[static_cast<std::size_t>(key[r] / d)];
            if (r + 1 < key.size() && key[r + 1] == key[r]) {
                ++run;
            } else {
                mult *= static_cast<double>(factorial(static_cast<int>(run)));
                run = 1;
            }
        }
        bool match = true;
        for (std::size_t jj = 0; jj < occ.size(); ++jj)
            match &= spatial[jj] == outcome.occupations[static_cast<std::size_t>(occ[jj])];
        if (match) p += std::norm(c) * mult;
    }
    return p;
}

}  // namespace detail

inline constexpr int kOracleMaxPhotons = 5;
inline constexpr int kOracleMaxModes = 10;
inline constexpr int kOracleMaxDim = 16;

/// Brute-force Fock-space probability, independent of the permutation
/// formalism. Mixed photons are expanded into their eigen-ensembles.
inline double fock_oracle_probability(const ProductState& state, const Interferometer& u, const OutcomePattern& outcome) {
    const int n = state.size();
    require_bounds(n <= kOracleMaxPhotons && u.modes() <= kOracleMaxModes && state.dim() <= kOracleMaxDim,
                   "Fock oracle limited to n <= 5, m <= 10, d <= 16");
    if (u.photons() != n) throw DimensionError("interferometer photon count differs from state");
    if (outcome.modes() != u.modes() || outcome.total() != n) throw DimensionError("outcome does not match state");
    std::vector<std::vector<std::pair<double, Vector>>> comps;
    for (const auto& ph : state.photons()) comps.push_back(ph.pure_components());
    std::vector<Vector> kets(static_cast<std::size_t>(n));
    double p = 0;
    std::function<void(int, double)> rec = [&](int i, double w) {
        if (i == n) {
            p += w * detail::fock_pure_probability(u, kets, outcome);
            return;
        }
        for (const auto& [wi, k] : comps[static_cast<std::size_t>(i)]) {
            kets[static_cast<std::size_t>(i)] = k;
            rec(i + 1, w * wi);
        }
    };
    rec(0, 1.0);
    return p;
}

inline double fock_oracle_probability(const Mixture& mix, const Interferometer& u, const OutcomePattern& outcome) {
    double p = 0;
    for (const auto& c : mix.components) p += c.weight * fock_oracle_probability(c.state, u, outcome);
    return p;
}

inline double fock_oracle_probability(const PartitionState& ps, const Interferometer& u, const OutcomePattern& outcome) {
    return fock_oracle_probability(ps.state, u, outcome);
}

}  // namespace partmix
