#include <numbers>

#include <gtest/gtest.h>

#include "partmix/tomography.hpp"
#include "test_support.hpp"

using namespace partmix;

namespace {
Permutation cyc(int n, std::vector<std::vector<int>> one_based) {
    for (auto& c : one_based)
        for (auto& v : c) --v;
    return Permutation::from_cycles(n, one_based);
}

Complex extract(const Mixture& st, const Permutation& s, int L = 0) {
    if (!L) L = default_scan_length(s);
    return extract_M(fringe_scan(st, s, L), s, fringe_scan(Mixture(ideal_state(s.size())), s, L));
}
}  // namespace

TEST(BuildCyclic, SinglePhoton) {
    const auto c = build_cyclic(Permutation::identity(1), {0.0});
    EXPECT_EQ(c.unitary.modes(), 2);
    EXPECT_LT(c.unitary.defect(), 1e-10);
    EXPECT_EQ(c.reference_outcome(), OutcomePattern({1, 0}));
}

TEST(BuildCyclic, UnitaryForRandomPhases) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> ph(0, 2 * std::numbers::pi);
    for (int n = 1; n <= 5; ++n)
        for (const auto& s : enumerate(n)) {
            std::vector<double> phases;
            for (int c = 0; c < s.num_cycles(); ++c) phases.push_back(ph(rng));
            ASSERT_LT(build_cyclic(s, phases).unitary.defect(), 1e-10);
        }
}

TEST(BuildCyclic, WiringFollowsPermutation) {
    const auto s = cyc(4, {{1, 2, 4, 3}});
    const auto c = build_cyclic(s, {0.3});
    const Matrix& u = c.unitary.matrix();
    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 8; ++j) {
            const int row = j / 2;
            const bool reachable = row == r || row == s(r);
            if (!reachable) ASSERT_EQ(std::abs(u(2 * r, j)), 0.0) << "input row " << r << " output mode " << j;
            else ASSERT_GT(std::abs(u(2 * r, j)), 0.1);
        }
    EXPECT_EQ(c.unitary.input_modes(), (std::vector<int>{0, 2, 4, 6}));
    EXPECT_THROW(build_cyclic(s, {0.1, 0.2}), DimensionError);
    EXPECT_THROW(build_cyclic(Permutation::identity(6), std::vector<double>(6, 0.0)), BoundsError);
}

TEST(BuildCyclic, IdealTwoPhotonZeroPhaseBranch) {
    const auto c = build_cyclic(cyc(2, {{1, 2}}), {0.0});
    const double p = fock_oracle_probability(ideal_state(2), c.unitary, c.reference_outcome());
    const double plus = (1 + 1) / 8.0, minus = (1 - 1) / 8.0;
    EXPECT_TRUE(std::abs(p - plus) < 1e-12 || std::abs(p - minus) < 1e-12) << p;
}

TEST(FringeScan, IdealSingleCycleAmplitude) {
    for (int n = 2; n <= 3; ++n) {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        const auto s = Permutation::from_cycles(n, {all});
        const auto scan = fringe_scan(Mixture(ideal_state(n)), s, 9);
        const auto fit = fit_single_fringe(scan);
        EXPECT_NEAR(fit.amplitude, 1.0 / std::ldexp(1.0, 2 * n - 1), 1e-12);
        for (double p : scan.probabilities) {
            EXPECT_GE(p, -1e-15);
            EXPECT_LE(p, 1.0);
        }
    }
}

TEST(FringeScan, DistinguishableIsFlatAtTopFrequency) {
    const auto s = cyc(3, {{1, 2}});
    const auto scan = fringe_scan(Mixture(partition_state(SetPartition::singletons(3)).state), s, default_scan_length(s));
    EXPECT_LT(std::abs(fringe_coefficient(scan, s.num_cycles())), 1e-14);
}

TEST(FringeScan, Validation) {
    const auto s = cyc(3, {{1, 2}});
    EXPECT_THROW(fringe_scan(Mixture(ideal_state(3)), s, 4), BoundsError);
    EXPECT_THROW(fringe_scan(Mixture(ideal_state(2)), s, 9), DimensionError);
}

TEST(FringeScan, ShotNoiseIsSeeded) {
    const auto s = cyc(2, {{1, 2}});
    const Mixture st(obb_state(2, 0.5));
    const auto a = fringe_scan(st, s, 9, 1000, 7), b = fringe_scan(st, s, 9, 1000, 7), c = fringe_scan(st, s, 9, 1000, 8);
    EXPECT_EQ(a.probabilities, b.probabilities);
    EXPECT_NE(a.probabilities, c.probabilities);
}

TEST(FringeFit, SingleCycleResidual) {
    std::mt19937_64 rng(62);
    for (int n = 2; n <= 4; ++n) {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        const auto s = Permutation::from_cycles(n, {all});
        const auto scan = fringe_scan(Mixture(support::random_mixed_product(n, 2, rng)), s, 12);
        EXPECT_LT(fit_single_fringe(scan).residual, 1e-10);
    }
}

TEST(ExtractM, Examples) {
    const auto s = cyc(3, {{1, 2, 3}});
    EXPECT_LT(std::abs(extract(Mixture(ideal_state(3)), s) - 1.0), 1e-12);
    EXPECT_LT(std::abs(extract(Mixture(obb_state(3, 0.6)), s) - 0.216), 1e-8);
    EXPECT_LT(std::abs(extract(Mixture(negative_partition_state()), s) - (-0.125)), 1e-8);
    const auto tri = triad_phase_state(std::numbers::pi / 2);
    EXPECT_LT(std::abs(extract(Mixture(tri), s, 16) - spectrum_of(tri).at(s)), 1e-8);
}

TEST(ExtractM, ConjugatePairing) {
    std::mt19937_64 rng(63);
    const auto st = Mixture(support::random_pure_product(3, 2, rng));
    for (const auto& s : enumerate(3)) {
        const Complex a = extract(st, s), b = extract(st, s.inverse());
        ASSERT_LT(std::abs(a - std::conj(b)), 1e-6);
        ASSERT_LE(std::abs(a), 1.0 + 1e-6);
    }
}

TEST(ExtractM, DegenerateCalibration) {
    const auto s = cyc(2, {{1, 2}});
    const auto flat = fringe_scan(Mixture(partition_state(SetPartition::singletons(2)).state), s, 9);
    EXPECT_THROW(extract_M(flat, s, flat), DegenerateCalibrationError);
    EXPECT_THROW(extract_M(flat, s, fringe_scan(Mixture(ideal_state(2)), s, 7)), DimensionError);
}

TEST(FullTomography, MatchesSpectrum) {
    std::mt19937_64 rng(64);
    const Mixture ideal(ideal_state(3));
    const auto ideal_tomo = full_tomography(ideal);
    for (const auto& v : ideal_tomo.values()) EXPECT_LT(std::abs(v - 1.0), 1e-10);
    const auto tri = triad_phase_state(1.0);
    EXPECT_LT(full_tomography(Mixture(tri)).max_abs_diff(spectrum_of(tri)), 1e-6);
    const auto obb = full_tomography(Mixture(obb_state(3, 0.4)));
    for (const auto& p : obb.permutations()) EXPECT_LT(std::abs(obb.at(p) - std::pow(0.4, 3 - p.fixed_points())), 1e-6);
    for (int n = 2; n <= 3; ++n) {
        const auto st = support::random_mixed_product(n, 2, rng);
        EXPECT_LT(full_tomography(Mixture(st)).max_abs_diff(spectrum_of(st)), 1e-6);
    }
    EXPECT_THROW(full_tomography(Mixture(ideal_state(5))), BoundsError);
}
