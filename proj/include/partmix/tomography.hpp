#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "partmix/common.hpp"
#include "partmix/interference.hpp"
#include "partmix/spectrum.hpp"
#include "partmix/states.hpp"
#include "partmix/symgroup.hpp"

namespace partmix {

inline constexpr int kMaxCyclicPhotons = 5;

/// 2n-mode network isolating M_σ in the reference outcome [1,0,1,0,…].
///
/// Layout, in order of propagation: 50:50 beam splitters on each row
/// (modes 2r, 2r+1); one phase shifter per cycle of σ on the even mode of the
/// cycle's first row; odd mode of row r routed to the odd mode of row σ(r);
/// a second beam-splitter layer. Photons enter the even modes.
struct CyclicInterferometer {
    Permutation sigma;
    std::vector<double> phases;  // one per cycle of σ, canonical cycle order
    Interferometer unitary;

    int photons() const { return sigma.size(); }
    OutcomePattern reference_outcome() const {
        std::vector<int> occ(static_cast<std::size_t>(2 * photons()), 0);
        for (int r = 0; r < photons(); ++r) occ[static_cast<std::size_t>(2 * r)] = 1;
        return OutcomePattern(occ);
    }
};

namespace detail {
inline Matrix beam_splitter_layer(int n) {
    const double h = 1.0 / std::sqrt(2.0);
    Matrix b = Matrix::Zero(2 * n, 2 * n);
    for (int r = 0; r < n; ++r) {
        b(2 * r, 2 * r) = h;
        b(2 * r, 2 * r + 1) = h;
        b(2 * r + 1, 2 * r) = h;
        b(2 * r + 1, 2 * r + 1) = -h;
    }
    return b;
}
}  // namespace detail

inline CyclicInterferometer build_cyclic(const Permutation& sigma, const std::vector<double>& phases) {
    const int n = sigma.size();
    require_bounds(n >= 1 && n <= kMaxCyclicPhotons, "build_cyclic: n must lie in [1, 5]");
    const auto cycles = sigma.cycles();
    if (phases.size() != cycles.size()) throw DimensionError("build_cyclic: need one phase per cycle");

    Matrix phase = Matrix::Identity(2 * n, 2 * n);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const int row = cycles[c].front();  // smallest row in the cycle
        phase(2 * row, 2 * row) = std::polar(1.0, phases[c]);
    }
    Matrix route = Matrix::Zero(2 * n, 2 * n);
    for (int r = 0; r < n; ++r) {
        route(2 * r, 2 * r) = 1.0;
        route(2 * r + 1, 2 * sigma(r) + 1) = 1.0;
    }
    const Matrix bs = detail::beam_splitter_layer(n);
    // Row-vector convention: amplitude from input i to output j is (A·B)(i, j)
    // when layer A precedes layer B.
    Matrix u = bs * phase * route * bs;
    std::vector<int> inputs;
    for (int r = 0; r < n; ++r) inputs.push_back(2 * r);
    return {sigma, phases, Interferometer(std::move(u), std::move(inputs), 1e-10)};
}

struct FringeScan {
    std::vector<double> phases;
    std::vector<double> probabilities;
};

inline int default_scan_length(const Permutation& sigma) { return 4 * sigma.num_cycles() + 1; }

/// Reference-outcome probability of C_σ with every cycle phase set to φ̄,
/// for φ̄ on a uniform grid of L points over [0, 2π). With `shots`, each
/// point is replaced by a binomial estimate seeded from `seed`.
inline FringeScan fringe_scan(const Mixture& state, const Permutation& sigma, int length,
                              std::optional<long> shots = std::nullopt, std::uint64_t seed = 0) {
    const int k = sigma.num_cycles();
    if (state.size() != sigma.size()) throw DimensionError("fringe_scan: state and permutation sizes differ");
    require_bounds(length >= 2 * k + 1, "fringe_scan: scan length must be at least 2k+1");
    FringeScan scan;
    for (int l = 0; l < length; ++l) {
        const double phi = 2.0 * std::numbers::pi * l / length;
        const auto c = build_cyclic(sigma, std::vector<double>(static_cast<std::size_t>(k), phi));
        double p = fock_oracle_probability(state, c.unitary, c.reference_outcome());
        if (shots) {
            std::mt19937_64 eng(mix_seed(seed, static_cast<std::uint64_t>(l)));
            std::binomial_distribution<long> draw(*shots, std::clamp(p, 0.0, 1.0));
            p = static_cast<double>(draw(eng)) / static_cast<double>(*shots);
        }
        scan.phases.push_back(phi);
        scan.probabilities.push_back(p);
    }
    return scan;
}

/// Fourier coefficient (1/L) Σ_l p_l e^{−i f φ_l}.
inline Complex fringe_coefficient(const FringeScan& scan, int frequency) {
    Complex acc = 0;
    for (std::size_t l = 0; l < scan.phases.size(); ++l)
        acc += scan.probabilities[l] * std::polar(1.0, -frequency * scan.phases[l]);
    return acc / static_cast<double>(scan.phases.size());
}

/// Ratio of the top-frequency (k = cycle count) fringe components of `scan`
/// and of an ideal-state `calibration` scan on the same interferometers.
/// Bin +k (coefficient of e^{ikφ̄}) carries M_σ under the spectrum
/// convention; bin −k carries its conjugate.
inline Complex extract_M(const FringeScan& scan, const Permutation& sigma, const FringeScan& calibration) {
    const int k = sigma.num_cycles();
    if (scan.phases.size() != calibration.phases.size()) throw DimensionError("extract_M: scan lengths differ");
    const Complex cal = fringe_coefficient(calibration, k);
    if (std::abs(cal) < 1e-12) throw DegenerateCalibrationError("calibration fringe vanishes at the top frequency");
    return fringe_coefficient(scan, k) / cal;
}

/// Least-squares fit p(φ) ≈ a + b cos(φ + c); returns {a, b, c, rms residual}.
struct FringeFit {
    double offset, amplitude, phase, residual;
};

inline FringeFit fit_single_fringe(const FringeScan& scan) {
    const auto L = static_cast<Eigen::Index>(scan.phases.size());
    Eigen::MatrixXd design(L, 3);
    Eigen::VectorXd y(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        const double phi = scan.phases[static_cast<std::size_t>(l)];
        design(l, 0) = 1.0;
        design(l, 1) = std::cos(phi);
        design(l, 2) = std::sin(phi);
        y(l) = scan.probabilities[static_cast<std::size_t>(l)];
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
    const double resid = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(L));
    // α cos φ + β sin φ = b cos(φ + c) with α = b cos c, β = −b sin c
    return {coef(0), std::hypot(coef(1), coef(2)), std::atan2(-coef(2), coef(1)), resid};
}

inline constexpr int kMaxTomographyPhotons = 4;

/// Extracts every M_σ from noiseless fringe scans.
inline Spectrum full_tomography(const Mixture& state) {
    const int n = state.size();
    require_bounds(n >= 1 && n <= kMaxTomographyPhotons, "full_tomography: n must lie in [1, 4]");
    const Mixture ideal(ideal_state(n));
    const auto& perms = detail::group_tables(n).perms;
    std::vector<Complex> v(perms.size());
    parallel_for(perms.size(), [&](std::size_t r) {
        const int L = default_scan_length(perms[r]);
        v[r] = extract_M(fringe_scan(state, perms[r], L), perms[r], fringe_scan(ideal, perms[r], L));
    }, 1);
    return Spectrum(n, std::move(v));
}

}  // namespace partmix
