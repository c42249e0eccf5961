#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "partmix/common.hpp"
#include "partmix/set_partition.hpp"

namespace partmix {

inline constexpr int kMaxEnumerationSize = 8;

/// Element of the symmetric group S_n stored by its images: images()[i] = σ(i).
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        const int n = size();
        if (n <= 0) throw DimensionError("permutation must act on at least one element");
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (int v : images_) {
            if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
                throw DimensionError("permutation images are not a bijection of {0..n-1}");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> im(static_cast<std::size_t>(n));
        std::iota(im.begin(), im.end(), 0);
        return Permutation(std::move(im));
    }

    /// From 0-based disjoint cycles; elements not mentioned are fixed.
    static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
        std::vector<int> im(static_cast<std::size_t>(n));
        std::iota(im.begin(), im.end(), 0);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (const auto& c : cycles) {
            for (std::size_t k = 0; k < c.size(); ++k) {
                int a = c[k];
                if (a < 0 || a >= n || used[static_cast<std::size_t>(a)])
                    throw DimensionError("cycles are not disjoint or out of range");
                used[static_cast<std::size_t>(a)] = true;
                im[static_cast<std::size_t>(a)] = c[(k + 1) % c.size()];
            }
        }
        return Permutation(std::move(im));
    }

    int size() const noexcept { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const noexcept { return images_; }

    bool is_identity() const {
        for (int i = 0; i < size(); ++i)
            if (images_[static_cast<std::size_t>(i)] != i) return false;
        return true;
    }

    Permutation inverse() const {
        std::vector<int> inv(images_.size());
        for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
        return Permutation(std::move(inv));
    }

    /// Canonical cycles: each starts at its smallest element, sorted by that
    /// element; fixed points appear as length-1 cycles.
    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::vector<bool> seen(images_.size(), false);
        for (int s = 0; s < size(); ++s) {
            if (seen[static_cast<std::size_t>(s)]) continue;
            std::vector<int> cyc;
            for (int i = s; !seen[static_cast<std::size_t>(i)]; i = (*this)(i)) {
                seen[static_cast<std::size_t>(i)] = true;
                cyc.push_back(i);
            }
            out.push_back(std::move(cyc));
        }
        return out;
    }

    int num_cycles() const { return static_cast<int>(cycles().size()); }

    int fixed_points() const {
        int f = 0;
        for (int i = 0; i < size(); ++i) f += (images_[static_cast<std::size_t>(i)] == i);
        return f;
    }

    std::vector<int> cycle_type() const {
        std::vector<int> t;
        for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
        std::sort(t.begin(), t.end(), std::greater<>());
        return t;
    }

    /// Lexicographic rank among all permutations of the same size; matches the
    /// position in enumerate().
    std::size_t rank() const {
        const int n = size();
        std::size_t r = 0;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            int smaller = 0;
            for (int v = 0; v < images_[static_cast<std::size_t>(i)]; ++v) smaller += !used[static_cast<std::size_t>(v)];
            used[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = true;
            r += static_cast<std::size_t>(smaller) * factorial(n - 1 - i);
        }
        return r;
    }

    static Permutation unrank(int n, std::size_t r) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> im;
        for (int i = 0; i < n; ++i) {
            auto f = static_cast<std::size_t>(factorial(n - 1 - i));
            auto idx = r / f;
            r %= f;
            im.push_back(pool[idx]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        return Permutation(std::move(im));
    }

    /// 1-based cycle notation omitting fixed points, "()" for the identity.
    std::string to_string() const {
        std::string out;
        for (const auto& c : cycles()) {
            if (c.size() == 1) continue;
            out += '(';
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (k) out += ' ';
                out += std::to_string(c[k] + 1);
            }
            out += ')';
        }
        return out.empty() ? "()" : out;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.images_ <=> b.images_; }

private:
    std::vector<int> images_;
};

/// (a ∘ b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw DimensionError("cannot compose permutations of different sizes");
    std::vector<int> im(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) im[static_cast<std::size_t>(i)] = a(b(i));
    return Permutation(std::move(im));
}

/// All n! permutations in lexicographic order of their image arrays.
inline std::vector<Permutation> enumerate(int n) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "enumerate: n must lie in [1, 8]");
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

/// Set partition whose cells are the orbits of σ.
inline SetPartition cycle_partition(const Permutation& sigma) { return SetPartition(sigma.cycles()); }

/// νσν⁻¹.
inline Permutation conjugate(const Permutation& sigma, const Permutation& nu) {
    if (sigma.size() != nu.size()) throw DimensionError("conjugate: size mismatch");
    return compose(compose(nu, sigma), nu.inverse());
}

/// Some ν with νσν⁻¹ = τ, built by aligning cycles of equal length.
inline Permutation connecting_conjugator(const Permutation& sigma, const Permutation& tau) {
    if (sigma.size() != tau.size()) throw DimensionError("connecting_conjugator: size mismatch");
    auto by_length = [](std::vector<std::vector<int>> cs) {
        std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
        return cs;
    };
    const auto cs = by_length(sigma.cycles());
    const auto ct = by_length(tau.cycles());
    if (cs.size() != ct.size()) throw NoConjugatorError("permutations have different cycle structures");
    std::vector<int> nu(static_cast<std::size_t>(sigma.size()));
    for (std::size_t c = 0; c < cs.size(); ++c) {
        if (cs[c].size() != ct[c].size()) throw NoConjugatorError("permutations have different cycle structures");
        for (std::size_t k = 0; k < cs[c].size(); ++k) nu[static_cast<std::size_t>(cs[c][k])] = ct[c][k];
    }
    return Permutation(std::move(nu));
}

/// Derangement numbers D_0..D_n.
inline std::vector<std::uint64_t> derangements(int n) {
    std::vector<std::uint64_t> d(static_cast<std::size_t>(std::max(n, 1)) + 1, 0);
    d[0] = 1;
    if (n >= 1) d[1] = 0;
    for (int k = 2; k <= n; ++k)
        d[static_cast<std::size_t>(k)] = static_cast<std::uint64_t>(k - 1) *
                                         (d[static_cast<std::size_t>(k - 1)] + d[static_cast<std::size_t>(k - 2)]);
    return d;
}

/// Number of permutations of n elements with exactly j fixed points.
inline std::uint64_t rencontres(int n, int j) {
    require_bounds(0 <= j && j <= n && n <= 12, "rencontres: need 0 <= j <= n <= 12");
    return binomial(n, j) * derangements(n - j)[static_cast<std::size_t>(n - j)];
}

}  // namespace partmix
