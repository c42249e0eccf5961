#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "partmix/common.hpp"
#include "partmix/partitions.hpp"

namespace partmix {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Single-photon internal density operator; keeps the ket when it is pure.
class InternalState {
public:
    InternalState() = default;

    static InternalState from_ket(const Vector& ket, double norm_tol = tol::normalization) {
        if (ket.size() == 0) throw DimensionError("ket must have positive dimension");
        if (std::abs(ket.squaredNorm() - 1.0) > norm_tol)
            throw NormalizationError("ket norm squared is " + std::to_string(ket.squaredNorm()));
        InternalState s;
        s.rho_ = ket * ket.adjoint();
        s.ket_ = ket;
        return s;
    }

    static InternalState from_density(const Matrix& rho, double declared_trace = 1.0) {
        if (rho.rows() == 0 || rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity)
            throw InvalidStateError("density matrix is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
        if (eig.eigenvalues().minCoeff() < -tol::psd)
            throw InvalidStateError("density matrix is not positive semidefinite");
        if (std::abs(rho.trace().real() - declared_trace) > tol::normalization)
            throw NormalizationError("density matrix trace is " + std::to_string(rho.trace().real()));
        InternalState s;
        s.rho_ = rho;
        return s;
    }

    int dim() const { return static_cast<int>(rho_.rows()); }
    const Matrix& rho() const noexcept { return rho_; }
    bool is_pure() const noexcept { return ket_.has_value(); }
    const Vector& ket() const { return ket_.value(); }

    /// Pure decomposition Σ w_k |e_k⟩⟨e_k| (eigenvectors with positive weight).
    std::vector<std::pair<double, Vector>> pure_components() const {
        if (ket_) return {{1.0, *ket_}};
        Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_);
        std::vector<std::pair<double, Vector>> out;
        for (int k = 0; k < dim(); ++k) {
            double w = eig.eigenvalues()(k);
            if (w > 1e-14) out.emplace_back(w, eig.eigenvectors().col(k));
        }
        return out;
    }

private:
    Matrix rho_;
    std::optional<Vector> ket_;
};

/// n photons, one per input mode, in a tensor-product internal state.
class ProductState {
public:
    ProductState() = default;

    explicit ProductState(std::vector<InternalState> photons) : photons_(std::move(photons)) {
        if (photons_.empty()) throw DimensionError("product state needs at least one photon");
        for (const auto& p : photons_)
            if (p.dim() != photons_.front().dim()) throw DimensionError("photons have different internal dimensions");
    }

    int size() const { return static_cast<int>(photons_.size()); }
    int dim() const { return photons_.front().dim(); }
    bool is_pure() const {
        for (const auto& p : photons_)
            if (!p.is_pure()) return false;
        return true;
    }
    const std::vector<InternalState>& photons() const noexcept { return photons_; }
    const InternalState& photon(int i) const { return photons_.at(static_cast<std::size_t>(i)); }

private:
    std::vector<InternalState> photons_;
};

/// Classically weighted list of product states. Covers correlated mixtures
/// that are not themselves separable.
struct Mixture {
    struct Component {
        double weight = 1.0;
        ProductState state;
    };
    std::vector<Component> components;

    Mixture() = default;
    Mixture(const ProductState& s) : components{{1.0, s}} {}  // NOLINT(google-explicit-constructor)
    explicit Mixture(std::vector<Component> c) : components(std::move(c)) {
        if (components.empty()) throw DimensionError("mixture needs at least one component");
        for (const auto& comp : components)
            if (comp.state.size() != components.front().state.size())
                throw DimensionError("mixture components have different photon numbers");
    }

    int size() const { return components.front().state.size(); }
    double total_weight() const {
        double w = 0;
        for (const auto& c : components) w += c.weight;
        return w;
    }
};

inline Vector basis_vector(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

inline ProductState pure_product(const std::vector<Vector>& kets) {
    if (kets.empty()) throw DimensionError("pure_product: no kets");
    std::vector<InternalState> ph;
    for (const auto& k : kets) {
        if (k.size() != kets.front().size()) throw DimensionError("pure_product: kets have different dimensions");
        ph.push_back(InternalState::from_ket(k));
    }
    return ProductState(std::move(ph));
}

inline ProductState mixed_product(const std::vector<Matrix>& rhos) {
    std::vector<InternalState> ph;
    for (const auto& r : rhos) ph.push_back(InternalState::from_density(r));
    return ProductState(std::move(ph));
}

/// n identical photons.
inline ProductState ideal_state(int n) {
    require_bounds(n >= 1, "ideal_state: n must be at least 1");
    return pure_product(std::vector<Vector>(static_cast<std::size_t>(n), basis_vector(1, 0)));
}

/// |1_a⟩ ⊗ (|1_a⟩+|1_b⟩)/√2 ⊗ (|1_a⟩+e^{iφ}|1_b⟩)/√2
inline ProductState triad_phase_state(double phi) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector a = basis_vector(2, 0);
    Vector b(2), c(2);
    b << r, r;
    c << r, r * std::polar(1.0, phi);
    return pure_product({a, b, c});
}

/// (|c⟩+|a⟩) ⊗ (|a⟩+|b⟩) ⊗ (−|b⟩+|c⟩), each factor normalized; basis a,b,c.
inline ProductState negative_partition_state() {
    const double r = 1.0 / std::sqrt(2.0);
    Vector p1(3), p2(3), p3(3);
    p1 << r, 0, r;
    p2 << r, r, 0;
    p3 << 0, -r, r;
    return pure_product({p1, p2, p3});
}

/// Photon i is √x|shared⟩ + √(1−x)|private_i⟩ in dimension n+1.
inline ProductState obb_state(int n, double x) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "obb_state: n must lie in [1, 8]");
    require_bounds(x >= 0.0 && x <= 1.0, "obb_state: x must lie in [0, 1]");
    std::vector<Vector> kets;
    for (int i = 0; i < n; ++i) {
        Vector k = Vector::Zero(n + 1);
        k(0) = std::sqrt(x);
        k(i + 1) = std::sqrt(1.0 - x);
        kets.push_back(k);
    }
    return pure_product(kets);
}

/// Weight x^k (1−x)^(n−k) on each partition with one cell holding k signal
/// photons and singletons elsewhere.
inline PartitionDistribution obb_partition_distribution(int n, double x) {
    require_bounds(n >= 1 && n <= kMaxEnumerationSize, "obb_partition_distribution: n must lie in [1, 8]");
    require_bounds(x >= 0.0 && x <= 1.0, "obb_partition_distribution: x must lie in [0, 1]");
    RealClassValues w;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> labels(static_cast<std::size_t>(n));
        int k = 0;
        for (int i = 0; i < n; ++i) {
            bool signal = (mask >> i) & 1u;
            k += signal;
            labels[static_cast<std::size_t>(i)] = signal ? n : i;  // signal photons share label n
        }
        const double weight = std::pow(x, k) * std::pow(1.0 - x, n - k);
        w[SetPartition::from_labels(labels)] += weight;  // k ≤ 1 masks coincide with singletons
    }
    return PartitionDistribution(n, w);
}

struct PartitionState {
    SetPartition partition;
    ProductState state;
};

/// Photons in cell b carry the basis ket e_b of dimension |Λ|.
inline PartitionState partition_state(const SetPartition& lam) {
    std::vector<Vector> kets;
    for (int i = 0; i < lam.size(); ++i) kets.push_back(basis_vector(lam.num_cells(), lam.block_of(i)));
    return {lam, pure_product(kets)};
}

/// Tensors each photon with an orthonormal tag for its cell of Λ, making
/// photons in different cells perfectly distinguishable.
inline ProductState apply_time_delay_partition(const ProductState& state, const SetPartition& lam) {
    if (state.size() != lam.size()) throw DimensionError("apply_time_delay_partition: photon count mismatch");
    const int d = state.dim();
    const int tags = lam.num_cells();
    std::vector<InternalState> out;
    for (int i = 0; i < state.size(); ++i) {
        const auto& ph = state.photon(i);
        const int b = lam.block_of(i);
        if (ph.is_pure()) {
            Vector k = Vector::Zero(d * tags);
            for (int a = 0; a < d; ++a) k(a * tags + b) = ph.ket()(a);
            out.push_back(InternalState::from_ket(k));
        } else {
            Matrix r = Matrix::Zero(d * tags, d * tags);
            for (int a = 0; a < d; ++a)
                for (int c = 0; c < d; ++c) r(a * tags + b, c * tags + b) = ph.rho()(a, c);
            out.push_back(InternalState::from_density(r));
        }
    }
    return ProductState(std::move(out));
}

inline Mixture apply_time_delay_partition(const Mixture& mix, const SetPartition& lam) {
    std::vector<Mixture::Component> comps;
    for (const auto& c : mix.components) comps.push_back({c.weight, apply_time_delay_partition(c.state, lam)});
    return Mixture(std::move(comps));
}

}  // namespace partmix
