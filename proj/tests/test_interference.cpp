#include <numbers>

#include <gtest/gtest.h>

#include "partmix/interference.hpp"
#include "test_support.hpp"

using namespace partmix;

namespace {
SetPartition part(std::vector<std::vector<int>> one_based) {
    for (auto& c : one_based)
        for (auto& v : c) --v;
    return SetPartition(std::move(one_based));
}

Matrix beam_splitter() {
    const double h = 1.0 / std::sqrt(2.0);
    Matrix u(2, 2);
    u << h, h, h, -h;
    return u;
}

Matrix random_matrix(int k, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double re = g(rng);
            a(i, j) = Complex(re, g(rng));
        }
    return a;
}
}  // namespace

TEST(Permanent, Definition) {
    Matrix a(2, 2);
    a << Complex(1, 2), 3.0, Complex(0, 1), -2.0;
    const Complex want = a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);
    EXPECT_LT(std::abs(permanent_naive(a) - want), 1e-15);
    EXPECT_LT(std::abs(permanent_ryser(a) - want), 1e-15);
    for (int k = 1; k <= 7; ++k) {
        EXPECT_LT(std::abs(permanent_ryser(Matrix::Identity(k, k)) - 1.0), 1e-15);
        EXPECT_LT(std::abs(permanent_naive(Matrix::Identity(k, k)) - 1.0), 1e-15);
    }
    EXPECT_EQ(permanent(Matrix(0, 0)), Complex(1.0));
}

TEST(Permanent, AllOnesIsFactorial) {
    for (int k = 1; k <= 10; ++k)
        EXPECT_NEAR(permanent_ryser(Matrix::Ones(k, k)).real(), static_cast<double>(factorial(k)), 1e-6);
}

TEST(Permanent, NaiveMatchesRyser) {
    std::mt19937_64 rng(41);
    for (int k = 2; k <= 8; ++k)
        for (int trial = 0; trial < 3; ++trial) {
            const auto a = random_matrix(k, rng);
            const Complex n = permanent_naive(a), r = permanent_ryser(a);
            ASSERT_LT(std::abs(n - r), 1e-10 * std::max(1.0, std::abs(n)));
        }
    EXPECT_THROW(permanent_naive(Matrix::Identity(9, 9)), BoundsError);
    EXPECT_THROW(permanent_ryser(Matrix::Identity(17, 17)), BoundsError);
    EXPECT_THROW(permanent_ryser(Matrix(2, 3)), DimensionError);
}

TEST(PathAmplitude, Conventions) {
    const Matrix id = Matrix::Identity(3, 3);
    EXPECT_EQ(path_amplitude(id, Permutation::identity(3), {0, 1, 2}, {0, 1, 2}), Complex(1.0));
    std::mt19937_64 rng(42);
    const Matrix u = support::random_unitary(3, rng);
    const auto s132 = Permutation::from_cycles(3, {{0, 2, 1}});
    // U13 U32 U21 in one-based labels
    EXPECT_LT(std::abs(path_amplitude(u, s132, {0, 1, 2}, {0, 1, 2}) - u(0, 2) * u(2, 1) * u(1, 0)), 1e-15);
    EXPECT_THROW(path_amplitude(u, s132, {0, 1}, {0, 1, 2}), DimensionError);
}

TEST(Interferometer, Validation) {
    Matrix bad = beam_splitter();
    bad(0, 0) *= 1.1;
    EXPECT_THROW(Interferometer(bad, 2), NotUnitaryError);
    EXPECT_THROW(Interferometer(Matrix::Identity(2, 3), 2), DimensionError);
    EXPECT_THROW(Interferometer(beam_splitter(), std::vector<int>{0, 0}), DimensionError);
    EXPECT_THROW(Interferometer(beam_splitter(), std::vector<int>{0, 2}), DimensionError);
    EXPECT_NEAR(Interferometer(beam_splitter(), 2).defect(), 0.0, 1e-15);
}

TEST(EnumerateOutcomes, CountAndOrder) {
    for (int m = 1; m <= 5; ++m)
        for (int n = 0; n <= 4; ++n) {
            const auto all = enumerate_outcomes(m, n);
            ASSERT_EQ(all.size(), binomial(m + n - 1, n));
            for (std::size_t i = 1; i < all.size(); ++i) ASSERT_TRUE(all[i] < all[i - 1]);
            for (const auto& o : all) ASSERT_EQ(o.total(), n);
        }
}

TEST(ProbabilityFromSpectrum, IdealIsPermanentSquared) {
    std::mt19937_64 rng(43);
    const Interferometer u(support::random_unitary(5, rng), 3);
    const auto ideal = Spectrum::constant(3, 1.0);
    for (const auto& o : enumerate_outcomes(5, 3)) {
        if (!o.collision_free()) continue;
        const double want = std::norm(permanent_naive(submatrix(u.matrix(), {0, 1, 2}, o.occupied_modes())));
        ASSERT_NEAR(probability_from_spectrum(u, ideal, o), want, 1e-14);
    }
}

TEST(ProbabilityFromSpectrum, HongOuMandel) {
    const Interferometer u(beam_splitter(), 2);
    const OutcomePattern coinc({1, 1});
    EXPECT_NEAR(probability_from_spectrum(u, Spectrum::constant(2, 1.0), coinc), 0.0, 1e-15);
    for (double x : {0.0, 0.25, 0.7, 1.0})
        EXPECT_NEAR(probability_from_spectrum(u, Spectrum(2, {1.0, x}), coinc), (1 - x) / 2, 1e-15);
    EXPECT_THROW(probability_from_spectrum(u, Spectrum::constant(2, 1.0), OutcomePattern({2, 0})),
                 UnsupportedOutcomeError);
    EXPECT_THROW(probability_from_spectrum(u, Spectrum::constant(2, 1.0), OutcomePattern({1, 1, 0})), DimensionError);
}

TEST(ProbabilityFromSpectrum, InvariantUnderSpectrumConjugation) {
    std::mt19937_64 rng(44);
    const Interferometer u(support::random_unitary(3, rng), 3);
    const auto st = triad_phase_state(std::numbers::pi / 2);
    const auto s = spectrum_of(st);
    std::vector<Complex> conj;
    for (const auto& v : s.values()) conj.push_back(std::conj(v));
    const OutcomePattern o({1, 1, 1});
    const double oracle = fock_oracle_probability(st, u, o);
    EXPECT_NEAR(probability_from_spectrum(u, s, o), oracle, 1e-12);
    // photocounts cannot see the traversal direction; only the state map can
    EXPECT_NEAR(probability_from_spectrum(u, Spectrum(3, conj), o), oracle, 1e-12);
}

TEST(FockOracle, HongOuMandel) {
    const Interferometer u(beam_splitter(), 2);
    EXPECT_NEAR(fock_oracle_probability(ideal_state(2), u, OutcomePattern({1, 1})), 0.0, 1e-15);
    EXPECT_NEAR(fock_oracle_probability(ideal_state(2), u, OutcomePattern({2, 0})), 0.5, 1e-15);
    EXPECT_NEAR(fock_oracle_probability(partition_state(SetPartition::singletons(2)), u, OutcomePattern({1, 1})), 0.5,
                1e-15);
}

TEST(FockOracle, NormalizesOverAllOutcomes) {
    std::mt19937_64 rng(45);
    const Interferometer u(support::random_unitary(4, rng), 3);
    const auto st = support::random_mixed_product(3, 2, rng);
    double total = 0;
    for (const auto& o : enumerate_outcomes(4, 3)) total += fock_oracle_probability(st, u, o);
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_THROW(fock_oracle_probability(ideal_state(6), Interferometer(Matrix::Identity(6, 6), 6),
                                         OutcomePattern({1, 1, 1, 1, 1, 1})),
                 BoundsError);
}

TEST(FockOracle, MatchesSpectrumFormula) {
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + trial % 3;
        const int m = n + 1;
        const Interferometer u(support::random_unitary(m, rng), n);
        const ProductState st = trial % 2 ? support::random_mixed_product(n, 2, rng) : support::random_pure_product(n, 3, rng);
        const auto s = spectrum_of(st);
        for (const auto& o : enumerate_outcomes(m, n))
            if (o.collision_free()) ASSERT_NEAR(probability_from_spectrum(u, s, o), fock_oracle_probability(st, u, o), 1e-12);
    }
}

TEST(FockOracle, NonDefaultInputModes) {
    std::mt19937_64 rng(47);
    const Interferometer u(support::random_unitary(4, rng), std::vector<int>{3, 1});
    const auto st = support::random_pure_product(2, 2, rng);
    const auto s = spectrum_of(st);
    for (const auto& o : enumerate_outcomes(4, 2))
        if (o.collision_free()) ASSERT_NEAR(probability_from_spectrum(u, s, o), fock_oracle_probability(st, u, o), 1e-12);
}

TEST(FockOracle, TriadAndObb) {
    std::mt19937_64 rng(48);
    const Interferometer u(support::random_unitary(3, rng), 3);
    const OutcomePattern o({1, 1, 1});
    const auto tri = triad_phase_state(std::numbers::pi / 2);
    EXPECT_NEAR(fock_oracle_probability(tri, u, o), probability_from_spectrum(u, spectrum_of(tri), o), 1e-12);
    for (double x : {0.2, 0.6}) {
        const double want = mixture_probability(u, obb_partition_distribution(3, x), o);
        EXPECT_NEAR(fock_oracle_probability(obb_state(3, x), u, o), want, 1e-12);
    }
}

TEST(PartitionProbability, Extremes) {
    std::mt19937_64 rng(49);
    const Interferometer u(support::random_unitary(4, rng), 3);
    for (const auto& o : enumerate_outcomes(4, 3)) {
        double norm = 1;
        for (int c : o.occupations) norm *= static_cast<double>(factorial(c));
        const auto a = submatrix(u.matrix(), {0, 1, 2}, o.occupied_modes());
        ASSERT_NEAR(partition_probability(u, SetPartition::full(3), o), std::norm(permanent_naive(a)) / norm, 1e-14);
        const Matrix classical = a.cwiseAbs2().cast<Complex>();
        ASSERT_NEAR(partition_probability(u, SetPartition::singletons(3), o), permanent_naive(classical).real() / norm,
                    1e-14);
    }
}

TEST(PartitionProbability, MatchesOracleAndNormalizes) {
    std::mt19937_64 rng(50);
    const Interferometer u(support::random_unitary(3, rng), 3);
    const auto lam = part({{1, 2}, {3}});
    const auto outs = enumerate_outcomes(3, 3);
    ASSERT_EQ(outs.size(), 10u);
    double total = 0;
    for (const auto& o : outs) {
        const double p = partition_probability(u, lam, o);
        total += p;
        ASSERT_NEAR(p, fock_oracle_probability(partition_state(lam), u, o), 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PartitionProbability, EveryPartitionNormalizes) {
    std::mt19937_64 rng(51);
    const Interferometer u(support::random_unitary(5, rng), 4);
    for (const auto& lam : enumerate_partitions(4)) {
        double total = 0;
        for (const auto& o : enumerate_outcomes(5, 4)) total += partition_probability(u, lam, o);
        ASSERT_NEAR(total, 1.0, 1e-10);
    }
}
