#include <set>

#include <gtest/gtest.h>

#include "partmix/io.hpp"
#include "partmix/symgroup.hpp"
#include "test_support.hpp"

using namespace partmix;

namespace {
Permutation cyc(int n, std::vector<std::vector<int>> one_based) {
    for (auto& c : one_based)
        for (auto& v : c) --v;
    return Permutation::from_cycles(n, one_based);
}
}  // namespace

TEST(Enumerate, SmallCounts) {
    auto one = enumerate(1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_TRUE(one[0].is_identity());
    EXPECT_EQ(enumerate(3).size(), 6u);
    auto five = enumerate(5);
    EXPECT_EQ(five.size(), 120u);
    EXPECT_EQ(std::set<Permutation>(five.begin(), five.end()).size(), 120u);
}

TEST(Enumerate, ExhaustiveDistinctAndLexicographic) {
    for (int n = 1; n <= 6; ++n) {
        auto all = enumerate(n);
        EXPECT_EQ(all.size(), factorial(n));
        EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
        EXPECT_EQ(std::set<Permutation>(all.begin(), all.end()).size(), all.size());
        for (std::size_t r = 0; r < all.size(); ++r) {
            EXPECT_EQ(all[r].rank(), r);
            EXPECT_EQ(Permutation::unrank(n, r), all[r]);
        }
    }
}

TEST(Enumerate, Bounds) {
    EXPECT_THROW(enumerate(0), BoundsError);
    EXPECT_THROW(enumerate(9), BoundsError);
}

TEST(Permutation, RejectsNonBijection) {
    EXPECT_THROW(Permutation({0, 0, 1}), DimensionError);
    EXPECT_THROW(Permutation({0, 3, 1}), DimensionError);
}

TEST(Permutation, InverseAndComposition) {
    for (const auto& s : enumerate(4)) {
        EXPECT_TRUE(compose(s.inverse(), s).is_identity());
        EXPECT_TRUE(compose(s, s.inverse()).is_identity());
    }
    const auto a = cyc(4, {{1, 2}}), b = cyc(4, {{2, 3, 4}}), c = cyc(4, {{1, 4}});
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
}

TEST(Permutation, CanonicalCycles) {
    const auto s = Permutation({2, 0, 1, 3});  // 0→2→1→0
    const auto cycles = s.cycles();
    ASSERT_EQ(cycles.size(), 2u);
    EXPECT_EQ(cycles[0], (std::vector<int>{0, 2, 1}));
    EXPECT_EQ(cycles[1], (std::vector<int>{3}));
    EXPECT_EQ(s.to_string(), "(1 3 2)");
    for (const auto& p : enumerate(5)) EXPECT_EQ(Permutation::from_cycles(5, p.cycles()), p);
}

TEST(CyclePartition, Examples) {
    EXPECT_EQ(cycle_partition(Permutation::identity(3)).to_string(), "{1}{2}{3}");
    EXPECT_EQ(cycle_partition(cyc(3, {{1, 2, 3}})).to_string(), "{1,2,3}");
    EXPECT_EQ(cycle_partition(cyc(4, {{1, 2}, {3, 4}})).to_string(), "{1,2}{3,4}");
}

TEST(Conjugate, Examples) {
    const auto s = cyc(3, {{1, 2}});
    EXPECT_EQ(conjugate(s, Permutation::identity(3)), s);
    EXPECT_EQ(conjugate(s, cyc(3, {{1, 3}})), cyc(3, {{2, 3}}));
    EXPECT_THROW(conjugate(s, Permutation::identity(4)), DimensionError);
}

TEST(Conjugate, PreservesCellSizesExhaustive) {
    for (int n = 1; n <= 5; ++n) {
        const auto all = enumerate(n);
        for (const auto& s : all) {
            auto sizes = cycle_partition(s).cell_sizes();
            std::sort(sizes.begin(), sizes.end());
            for (const auto& t : all) {
                auto other = cycle_partition(conjugate(s, t)).cell_sizes();
                std::sort(other.begin(), other.end());
                ASSERT_EQ(sizes, other);
            }
        }
    }
}

TEST(ConnectingConjugator, Examples) {
    const auto s = cyc(3, {{1, 2}});
    EXPECT_EQ(conjugate(s, connecting_conjugator(s, s)), s);
    const auto t = cyc(3, {{2, 3}});
    EXPECT_EQ(conjugate(s, connecting_conjugator(s, t)), t);
    EXPECT_THROW(connecting_conjugator(cyc(3, {{1, 2, 3}}), s), NoConjugatorError);
}

TEST(ConnectingConjugator, SatisfiesContractForEveryConjugatePair) {
    for (int n = 1; n <= 5; ++n) {
        const auto all = enumerate(n);
        for (const auto& s : all)
            for (const auto& t : all) {
                if (s.cycle_type() != t.cycle_type()) {
                    EXPECT_THROW(connecting_conjugator(s, t), NoConjugatorError);
                    continue;
                }
                ASSERT_EQ(conjugate(s, connecting_conjugator(s, t)), t);
            }
    }
}

TEST(Rencontres, Examples) {
    EXPECT_EQ(rencontres(3, 3), 1u);
    // brute-force oracle, frozen: 2 derangements of 3, 8 permutations of 4 with one fixed point
    EXPECT_EQ(support::count_permutations_with_fixed(3, 0), 2.0);
    EXPECT_EQ(support::count_permutations_with_fixed(4, 1), 8.0);
    EXPECT_EQ(rencontres(3, 0), 2u);
    EXPECT_EQ(rencontres(4, 1), 8u);
}

TEST(Rencontres, MatchesBruteForceAndSumsToFactorial) {
    for (int n = 0; n <= 6; ++n)
        for (int j = 0; j <= n; ++j)
            if (n > 0) EXPECT_EQ(static_cast<double>(rencontres(n, j)), support::count_permutations_with_fixed(n, j));
    for (int n = 0; n <= 12; ++n) {
        std::uint64_t total = 0;
        for (int j = 0; j <= n; ++j) total += rencontres(n, j);
        EXPECT_EQ(total, factorial(n));
    }
    EXPECT_THROW(rencontres(13, 0), BoundsError);
    EXPECT_THROW(rencontres(3, 4), BoundsError);
}

TEST(PermutationJson, ImagesArray) {
    const auto s = cyc(3, {{1, 2, 3}});
    EXPECT_EQ(io::canonical_dump(io::to_json(s)), "[1,2,0]");
    EXPECT_EQ(io::permutation_from_json(io::parse_text("[1,2,0]")), s);
    EXPECT_THROW(io::permutation_from_json(io::parse_text("[1,1,0]")), io::SchemaError);
}
