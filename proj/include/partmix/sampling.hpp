#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "partmix/common.hpp"
#include "partmix/interference.hpp"
#include "partmix/partitions.hpp"
#include "partmix/spectrum.hpp"

namespace partmix {

struct SamplerConfig {
    Interferometer unitary;
    PartitionDistribution distribution;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
};

namespace detail {

// Validated, renormalized partition weights in canonical order.
inline std::vector<std::pair<SetPartition, double>> sampler_weights(const SamplerConfig& cfg) {
    if (cfg.distribution.size() != cfg.unitary.photons())
        throw DimensionError("distribution size differs from interferometer photon count");
    std::vector<std::pair<SetPartition, double>> out;
    double total = 0;
    for (const auto& [lam, w] : cfg.distribution.weights()) {
        if (w < -1e-12)
            throw QuasiProbabilityError("partition " + lam.to_string() + " has negative weight " + std::to_string(w));
        if (w > 0) {
            out.emplace_back(lam, w);
            total += w;
        }
    }
    if (total <= 0) throw PreconditionError("partition distribution has no positive weight");
    for (auto& [lam, w] : out) w /= total;
    return out;
}

struct CellLaw {
    std::vector<OutcomePattern> outcomes;
    std::vector<double> cdf;
    std::vector<double> prob;
};

inline constexpr int kMaxCellPhotons = 5;

// Exact distribution of one cell's photons, all C(m+k−1, k) outcomes.
inline CellLaw cell_law(const Interferometer& u, const std::vector<int>& cell) {
    require_bounds(static_cast<int>(cell.size()) <= kMaxCellPhotons, "exact per-cell sampling limited to 5 photons");
    std::vector<int> rows;
    for (int i : cell) rows.push_back(u.input_modes()[static_cast<std::size_t>(i)]);
    CellLaw law;
    law.outcomes = enumerate_outcomes(u.modes(), static_cast<int>(cell.size()));
    double acc = 0;
    for (const auto& o : law.outcomes) {
        const double p = indistinguishable_probability(u.matrix(), rows, o);
        law.prob.push_back(p);
        acc += p;
        law.cdf.push_back(acc);
    }
    return law;
}

template <class Engine>
std::size_t draw_index(const std::vector<double>& cdf, Engine& eng) {
    const double r = uniform01(eng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace detail

/// Σ_i |Λ_i| 2^{|Λ_i|}: operation-count proxy for exact per-cell sampling.
inline double partition_cost(const SetPartition& lam) {
    double c = 0;
    for (int s : lam.cell_sizes()) c += s * std::ldexp(1.0, s);
    return c;
}

struct CostReport {
    std::vector<double> per_sample;
    double mean = 0.0;
};

struct SampleRun {
    std::vector<OutcomePattern> samples;
    CostReport cost;
};

/// Partition sampling: draw Λ ∝ p_Λ, draw each cell from its exact
/// indistinguishable law, add the occupation vectors. Sample i uses an engine
/// seeded from (seed, i), so output is independent of the worker count.
inline SampleRun partition_sample(const SamplerConfig& cfg) {
    const auto weights = detail::sampler_weights(cfg);
    std::vector<double> cdf;
    double acc = 0;
    for (const auto& [lam, w] : weights) cdf.push_back(acc += w);

    std::map<std::vector<int>, detail::CellLaw> laws;
    for (const auto& [lam, w] : weights)
        for (const auto& cell : lam.cells())
            if (!laws.count(cell)) laws.emplace(cell, detail::cell_law(cfg.unitary, cell));

    SampleRun run;
    run.samples.resize(cfg.samples);
    run.cost.per_sample.resize(cfg.samples);
    parallel_for(cfg.samples, [&](std::size_t i) {
        std::mt19937_64 eng(mix_seed(cfg.seed, i));
        const auto& lam = weights[detail::draw_index(cdf, eng)].first;
        std::vector<int> occ(static_cast<std::size_t>(cfg.unitary.modes()), 0);
        for (const auto& cell : lam.cells()) {
            const auto& law = laws.at(cell);
            const auto& o = law.outcomes[detail::draw_index(law.cdf, eng)];
            for (std::size_t j = 0; j < occ.size(); ++j) occ[j] += o.occupations[j];
        }
        run.samples[i] = OutcomePattern(std::move(occ));
        run.cost.per_sample[i] = partition_cost(lam);
    }, 1024);
    double total = 0;
    for (double c : run.cost.per_sample) total += c;
    run.cost.mean = cfg.samples ? total / static_cast<double>(cfg.samples) : 0.0;
    return run;
}

/// Exact output law of partition_sample: per-cell laws convolved and summed
/// over Λ.
inline OutcomeDistribution sampler_exact_distribution(const SamplerConfig& cfg) {
    const auto weights = detail::sampler_weights(cfg);
    OutcomeDistribution total;
    for (const auto& o : enumerate_outcomes(cfg.unitary.modes(), cfg.unitary.photons())) total[o] = 0.0;
    std::map<std::vector<int>, detail::CellLaw> laws;
    for (const auto& [lam, w] : weights) {
        std::map<std::vector<int>, double> conv{{std::vector<int>(static_cast<std::size_t>(cfg.unitary.modes()), 0), 1.0}};
        for (const auto& cell : lam.cells()) {
            auto it = laws.find(cell);
            if (it == laws.end()) it = laws.emplace(cell, detail::cell_law(cfg.unitary, cell)).first;
            std::map<std::vector<int>, double> next;
            for (const auto& [occ, p] : conv)
                for (std::size_t k = 0; k < it->second.outcomes.size(); ++k) {
                    const double q = it->second.prob[k];
                    if (q == 0.0) continue;
                    auto sum = occ;
                    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += it->second.outcomes[k].occupations[j];
                    next[sum] += p * q;
                }
            conv = std::move(next);
        }
        for (const auto& [occ, p] : conv) total[OutcomePattern(occ)] += w * p;
    }
    return total;
}

/// Σ_k C(n,k) x^k (1−x)^{n−k} · n·2^k by direct summation.
inline double obb_cost_curve(int n, double x) {
    require_bounds(n >= 1 && n <= 20, "obb_cost_curve: n must lie in [1, 20]");
    double acc = 0;
    for (int k = 0; k <= n; ++k)
        acc += static_cast<double>(binomial(n, k)) * std::pow(x, k) * std::pow(1.0 - x, n - k) * n * std::ldexp(1.0, k);
    return acc;
}

/// Circular-unitary-ensemble draw: QR of a standard complex Gaussian matrix
/// with the phases of R's diagonal moved into Q.
template <class Engine>
Matrix haar_unitary(int m, Engine& eng) {
    std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
    Matrix z(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double re = g(eng);
            z(i, j) = Complex(re, g(eng));
        }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0));
    }
    return q;
}

inline Matrix haar_unitary(int m, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    return haar_unitary(m, eng);
}

struct HaarExperimentReport {
    long trials = 0;
    int modes = 0;
    int photons = 0;
    std::uint64_t seed = 0;
    double mean_sq_raw = 0.0;
    double mean_sq_twirled = 0.0;
    double stderr_raw = 0.0;
    double stderr_twirled = 0.0;

    /// raw ≥ twirled within two combined standard errors.
    bool inequality_holds() const {
        return mean_sq_raw >= mean_sq_twirled - 2.0 * std::hypot(stderr_raw, stderr_twirled);
    }
};

/// Mean squared deviation from the ideal probability of the collision-free
/// outcome on the first n modes, over Haar-random m-mode interferometers,
/// for the raw spectrum and for its twirl.
inline HaarExperimentReport haar_variance_experiment(const Spectrum& s, int modes, long trials, std::uint64_t seed) {
    const int n = s.size();
    require_bounds(n >= 1 && n <= 4, "haar_variance_experiment: n must lie in [1, 4]");
    require_bounds(modes >= n, "haar_variance_experiment: need m >= n");
    require_bounds(trials >= 1, "haar_variance_experiment: need at least one trial");
    const Spectrum tw = twirl(s);
    const Spectrum ideal = Spectrum::constant(n, 1.0);
    std::vector<double> raw(static_cast<std::size_t>(trials)), twd(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const Matrix u = haar_unitary(modes, mix_seed(seed, t));
        const auto q = interference_weights(u.topLeftCorner(n, n));
        const double p0 = probability_from_weights(ideal, q);
        raw[t] = std::pow(p0 - probability_from_weights(s, q), 2);
        twd[t] = std::pow(p0 - probability_from_weights(tw, q), 2);
    }, 32);
    auto stats = [](const std::vector<double>& v) {
        double mean = 0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
        return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
    };
    HaarExperimentReport rep;
    rep.trials = trials;
    rep.modes = modes;
    rep.photons = n;
    rep.seed = seed;
    std::tie(rep.mean_sq_raw, rep.stderr_raw) = stats(raw);
    std::tie(rep.mean_sq_twirled, rep.stderr_twirled) = stats(twd);
    return rep;
}

inline HaarExperimentReport haar_variance_experiment(const Mixture& state, int modes, long trials, std::uint64_t seed) {
    return haar_variance_experiment(spectrum_of(state), modes, trials, seed);
}

}  // namespace partmix
