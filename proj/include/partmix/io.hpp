#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "partmix/common.hpp"
#include "partmix/interference.hpp"
#include "partmix/partitions.hpp"
#include "partmix/reconstruct.hpp"
#include "partmix/spectrum.hpp"
#include "partmix/states.hpp"
#include "partmix/symgroup.hpp"

namespace partmix::io {

using Json = nlohmann::json;

/// Malformed input; `pointer` is the JSON pointer of the offending node.
class SchemaError : public Error {
public:
    SchemaError(std::string pointer, const std::string& what)
        : Error("schema", what + " at " + (pointer.empty() ? std::string("/") : pointer)), pointer_(std::move(pointer)) {}
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

// ---------------------------------------------------------------- emission

namespace detail {
inline void dump_to(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys already sorted
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump_to(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_to(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                break;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}
}  // namespace detail

/// Sorted keys, no whitespace, doubles printed with 17 significant digits.
inline std::string canonical_dump(const Json& j) {
    std::string out;
    detail::dump_to(j, out);
    return out;
}

inline Json to_json(const Permutation& p) { return p.images(); }
inline Json to_json(const SetPartition& p) { return p.cells(); }
inline Json to_json(const OutcomePattern& o) { return o.occupations; }
inline Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const PartitionDistribution& d) {
    Json arr = Json::array();
    for (const auto& p : enumerate_partitions(d.size())) arr.push_back({{"partition", to_json(p)}, {"weight", d.weight(p)}});
    return arr;
}

inline Json to_json(const Spectrum& s) {
    Json arr = Json::array();
    for (std::size_t r = 0; r < s.values().size(); ++r) {
        const auto z = s.at_rank(r);
        arr.push_back({{"sigma", to_json(s.permutations()[r])}, {"re", z.real()}, {"im", z.imag()}});
    }
    return arr;
}

inline Json to_json(const ClassValues& c) {
    Json arr = Json::array();
    for (const auto& p : enumerate_partitions(c.begin()->first.size()))
        arr.push_back({{"partition", to_json(p)}, {"re", c.at(p).real()}, {"im", c.at(p).imag()}});
    return arr;
}

inline Json to_json(const MitigationPlan& plan) {
    Json w = Json::array();
    for (const auto& p : plan.partitions) w.push_back({{"partition", to_json(p)}, {"w", plan.weights.at(p)}});
    return {{"order", plan.order}, {"weights", w}};
}

inline Json to_json(const IncoherentClassification& c) {
    Json j = {{"member", c.member}, {"max_orbit_deviation", c.max_orbit_deviation},
              {"reduction", "class_mean"}, {"negativity", c.negativity}};
    if (c.distribution) {
        j["distribution"] = to_json(*c.distribution);
        j["nonzero_weights"] = c.distribution->nonzero_count(1e-12);
    } else {
        j["distribution"] = nullptr;
    }
    return j;
}

/// Row-major array of [re, im] pairs.
inline Json unitary_to_json(const Matrix& u) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j) arr.push_back(complex_pair(u(i, j)));
    return arr;
}

// ----------------------------------------------------------------- parsing

namespace detail {
inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline const Json& field(const Json& j, const std::string& key, const std::string& ptr) {
    if (!j.is_object()) throw SchemaError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(child(ptr, key), "missing field");
    return *it;
}

inline double number(const Json& j, const std::string& ptr) {
    if (!j.is_number()) throw SchemaError(ptr, "expected a number");
    return j.get<double>();
}

inline int integer(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
    return j.get<int>();
}

inline const Json& array(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw SchemaError(ptr, "expected an array");
    return j;
}
}  // namespace detail

inline Json parse_text(const std::string& text, const std::string& ptr = "") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError(ptr, std::string("malformed JSON: ") + e.what());
    }
}

inline Complex complex_from_json(const Json& j, const std::string& ptr) {
    const auto& a = detail::array(j, ptr);
    if (a.size() != 2) throw SchemaError(ptr, "expected a [re, im] pair");
    return {detail::number(a[0], detail::child(ptr, 0)), detail::number(a[1], detail::child(ptr, 1))};
}

inline std::vector<int> int_list(const Json& j, const std::string& ptr) {
    const auto& a = detail::array(j, ptr);
    std::vector<int> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(detail::integer(a[i], detail::child(ptr, i)));
    return v;
}

inline Permutation permutation_from_json(const Json& j, const std::string& ptr = "") {
    auto v = int_list(j, ptr);
    try {
        return Permutation(std::move(v));
    } catch (const Error& e) {
        throw SchemaError(ptr, e.what());
    }
}

inline SetPartition partition_from_json(const Json& j, const std::string& ptr = "") {
    const auto& a = detail::array(j, ptr);
    std::vector<std::vector<int>> cells;
    for (std::size_t i = 0; i < a.size(); ++i) cells.push_back(int_list(a[i], detail::child(ptr, i)));
    try {
        return SetPartition(std::move(cells));
    } catch (const Error& e) {
        throw SchemaError(ptr, e.what());
    }
}

inline OutcomePattern outcome_from_json(const Json& j, const std::string& ptr = "") {
    auto v = int_list(j, ptr);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < 0) throw SchemaError(detail::child(ptr, i), "occupation must be nonnegative");
    return OutcomePattern(std::move(v));
}

inline PartitionDistribution distribution_from_json(const Json& j, const std::string& ptr = "") {
    const auto& a = detail::array(j, ptr);
    if (a.empty()) throw SchemaError(ptr, "empty distribution");
    RealClassValues w;
    int n = -1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = detail::child(ptr, i);
        auto part = partition_from_json(detail::field(a[i], "partition", p), detail::child(p, "partition"));
        if (n < 0) n = part.size();
        if (part.size() != n) throw SchemaError(detail::child(p, "partition"), "partition size differs from first entry");
        w[part] = detail::number(detail::field(a[i], "weight", p), detail::child(p, "weight"));
    }
    return PartitionDistribution(n, w);
}

/// Square matrix from a flat row-major list of [re, im] pairs or a list of rows.
inline Matrix unitary_from_json(const Json& j, const std::string& ptr = "") {
    const auto& a = detail::array(j, ptr);
    if (a.empty()) throw SchemaError(ptr, "empty matrix");
    const bool nested = a[0].is_array() && !a[0].empty() && a[0][0].is_array();
    if (nested) {
        const auto m = static_cast<Eigen::Index>(a.size());
        Matrix u(m, m);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto& row = detail::array(a[i], detail::child(ptr, i));
            if (row.size() != a.size()) throw SchemaError(detail::child(ptr, i), "matrix must be square");
            for (std::size_t k = 0; k < row.size(); ++k)
                u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    complex_from_json(row[k], detail::child(detail::child(ptr, i), k));
        }
        return u;
    }
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(a.size()))));
    if (static_cast<std::size_t>(m * m) != a.size()) throw SchemaError(ptr, "flat matrix length is not a perfect square");
    Matrix u(m, m);
    for (std::size_t k = 0; k < a.size(); ++k)
        u(static_cast<Eigen::Index>(k) / m, static_cast<Eigen::Index>(k) % m) = complex_from_json(a[k], detail::child(ptr, k));
    return u;
}

/// Parses a matrix and rejects it before any computation when its unitarity
/// defect exceeds `tolerance`.
inline Interferometer interferometer_from_json(const Json& j, std::vector<int> inputs,
                                               double tolerance = tol::cli_unitarity, const std::string& ptr = "") {
    const Matrix u = unitary_from_json(j, ptr);
    const double defect = unitarity_defect(u);
    if (defect > tolerance)
        throw SchemaError(ptr, "matrix is not unitary (defect " + std::to_string(defect) + ")");
    try {
        return Interferometer(u, std::move(inputs), tolerance);
    } catch (const Error& e) {
        throw SchemaError(ptr, e.what());
    }
}

namespace detail {
inline ProductState photons_from_json(const Json& j, const std::string& ptr) {
    const auto& a = array(j, ptr);
    if (a.empty()) throw SchemaError(ptr, "no photons");
    std::vector<InternalState> ph;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto p = child(ptr, i);
        if (!a[i].is_object()) throw SchemaError(p, "expected an object with \"ket\" or \"rho\"");
        try {
            if (a[i].contains("ket")) {
                const auto& k = array(a[i]["ket"], child(p, "ket"));
                Vector v(static_cast<Eigen::Index>(k.size()));
                for (std::size_t c = 0; c < k.size(); ++c)
                    v(static_cast<Eigen::Index>(c)) = complex_from_json(k[c], child(child(p, "ket"), c));
                ph.push_back(InternalState::from_ket(v));
            } else if (a[i].contains("rho")) {
                const Matrix r = unitary_from_json(a[i]["rho"], child(p, "rho"));
                ph.push_back(InternalState::from_density(r));
            } else {
                throw SchemaError(p, "photon needs \"ket\" or \"rho\"");
            }
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            throw SchemaError(p, e.what());
        }
    }
    try {
        return ProductState(std::move(ph));
    } catch (const Error& e) {
        throw SchemaError(ptr, e.what());
    }
}
}  // namespace detail

/// Named family builders: obb, triad, partition, negative, ideal.
inline Mixture family_state(const Json& j, const std::string& ptr = "") {
    const auto& fam = detail::field(j, "family", ptr);
    if (!fam.is_string()) throw SchemaError(detail::child(ptr, "family"), "expected a string");
    const auto name = fam.get<std::string>();
    // library errors are reported at the parameter that caused them
    const auto at = [&](const char* key, auto build) -> Mixture {
        try {
            return build();
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            throw SchemaError(detail::child(ptr, key), e.what());
        }
    };
    if (name == "obb") {
        const double x = detail::number(detail::field(j, "x", ptr), detail::child(ptr, "x"));
        if (!(x >= 0.0 && x <= 1.0)) throw SchemaError(detail::child(ptr, "x"), "x must lie in [0, 1]");
        return at("n", [&] { return Mixture(obb_state(detail::integer(detail::field(j, "n", ptr), detail::child(ptr, "n")), x)); });
    }
    if (name == "triad")
        return at("phi", [&] { return Mixture(triad_phase_state(detail::number(detail::field(j, "phi", ptr), detail::child(ptr, "phi")))); });
    if (name == "partition")
        return at("cells", [&] {
            return Mixture(partition_state(partition_from_json(detail::field(j, "cells", ptr), detail::child(ptr, "cells"))).state);
        });
    if (name == "negative") return negative_partition_state();
    if (name == "ideal")
        return at("n", [&] { return Mixture(ideal_state(detail::integer(detail::field(j, "n", ptr), detail::child(ptr, "n")))); });
    throw SchemaError(detail::child(ptr, "family"), "unknown family \"" + name + "\"");
}

/// State document: a family builder, or {"n","dim","photons":[…]} with an
/// optional "mixture":[{"weight","photons"}] replacing "photons".
inline Mixture state_from_json(const Json& j, const std::string& ptr = "") {
    if (!j.is_object()) throw SchemaError(ptr, "expected an object");
    if (j.contains("family")) return family_state(j, ptr);
    std::vector<Mixture::Component> comps;
    if (j.contains("mixture")) {
        const auto mp = detail::child(ptr, "mixture");
        const auto& a = detail::array(j["mixture"], mp);
        if (a.empty()) throw SchemaError(mp, "empty mixture");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto p = detail::child(mp, i);
            comps.push_back({detail::number(detail::field(a[i], "weight", p), detail::child(p, "weight")),
                             detail::photons_from_json(detail::field(a[i], "photons", p), detail::child(p, "photons"))});
        }
    } else {
        comps.push_back({1.0, detail::photons_from_json(detail::field(j, "photons", ptr), detail::child(ptr, "photons"))});
    }
    for (const auto& c : comps) {
        if (j.contains("n") && detail::integer(j["n"], detail::child(ptr, "n")) != c.state.size())
            throw SchemaError(detail::child(ptr, "n"), "photon count does not match \"n\"");
        if (j.contains("dim") && detail::integer(j["dim"], detail::child(ptr, "dim")) != c.state.dim())
            throw SchemaError(detail::child(ptr, "dim"), "internal dimension does not match \"dim\"");
    }
    try {
        return Mixture(std::move(comps));
    } catch (const Error& e) {
        throw SchemaError(ptr, e.what());
    }
}

inline Json state_to_json(const ProductState& s) {
    Json ph = Json::array();
    for (const auto& p : s.photons()) {
        Json rows = Json::array();
        if (p.is_pure()) {
            Json k = Json::array();
            for (Eigen::Index a = 0; a < p.ket().size(); ++a) k.push_back(complex_pair(p.ket()(a)));
            ph.push_back({{"ket", k}});
        } else {
            for (Eigen::Index a = 0; a < p.rho().rows(); ++a) {
                Json row = Json::array();
                for (Eigen::Index b = 0; b < p.rho().cols(); ++b) row.push_back(complex_pair(p.rho()(a, b)));
                rows.push_back(row);
            }
            ph.push_back({{"rho", rows}});
        }
    }
    return {{"n", s.size()}, {"dim", s.dim()}, {"photons", ph}};
}

}  // namespace partmix::io
