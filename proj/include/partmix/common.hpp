#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace partmix {

using Complex = std::complex<double>;

// Error hierarchy. Every failure raised by the library derives from Error so
// callers (and the CLI) can map them onto a single validation exit path.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PARTMIX_DEFINE_ERROR(Name, tag)                                        \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    };

PARTMIX_DEFINE_ERROR(BoundsError, "bounds")
PARTMIX_DEFINE_ERROR(DimensionError, "dimension")
PARTMIX_DEFINE_ERROR(NoConjugatorError, "no_conjugator")
PARTMIX_DEFINE_ERROR(NormalizationError, "normalization")
PARTMIX_DEFINE_ERROR(InvalidStateError, "invalid_state")
PARTMIX_DEFINE_ERROR(CoherenceResidueError, "coherence_residue")
PARTMIX_DEFINE_ERROR(SingularDiagonalError, "singular_diagonal")
PARTMIX_DEFINE_ERROR(UnsupportedOutcomeError, "unsupported_outcome")
PARTMIX_DEFINE_ERROR(OutcomeMismatchError, "outcome_mismatch")
PARTMIX_DEFINE_ERROR(NotUnitaryError, "not_unitary")
PARTMIX_DEFINE_ERROR(DegenerateCalibrationError, "degenerate_calibration")
PARTMIX_DEFINE_ERROR(QuasiProbabilityError, "quasi_probability_unsupported")
PARTMIX_DEFINE_ERROR(PreconditionError, "precondition")

#undef PARTMIX_DEFINE_ERROR

/// Default tolerances shared across modules.
namespace tol {
inline constexpr double real_solution = 1e-9;   // |Im| allowed in Möbius solves
inline constexpr double orbit_invariance = 1e-9;
inline constexpr double unitarity = 1e-9;
inline constexpr double cli_unitarity = 1e-6;
inline constexpr double normalization = 1e-10;
inline constexpr double hermiticity = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double singular = 1e-12;
}  // namespace tol

inline void require_bounds(bool ok, const std::string& what) {
    if (!ok) throw BoundsError(what);
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// splitmix64 finalizer; used to derive independent per-task seeds from a
// (seed, task index) pair so parallel runs reproduce serial ones.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
template <class Engine>
double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

namespace detail {
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> value{0};
    return value;
}
}  // namespace detail

/// Cap on worker threads for internal parallel maps. 0 means "consult
/// PARTMIX_THREADS, else hardware concurrency".
inline void set_thread_count(int n) { detail::thread_setting() = std::max(0, n); }

inline int thread_count() {
    int n = detail::thread_setting();
    if (n > 0) return n;
    if (const char* env = std::getenv("PARTMIX_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker, so results written to per-index slots are independent of the
/// worker count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         std::size_t min_chunk = 64) {
    const auto workers = static_cast<std::size_t>(thread_count());
    if (workers <= 1 || count < 2 * min_chunk) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t used = std::min(workers, (count + min_chunk - 1) / min_chunk);
    std::vector<std::thread> pool;
    pool.reserve(used);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += used) body(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace partmix
