#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "partmix/partmix.hpp"

namespace partmix::cli {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUsage = 64;

struct StateOptions {
    std::string state;  // file path or inline JSON
    std::string family;
    double phi = 0.0;
    int n = 0;
    double x = 0.0;
    std::string cells;
};

struct UnitaryOptions {
    std::string unitary;  // file path or inline JSON
    int modes = 0;
    std::int64_t haar_seed = -1;
    std::string inputs;   // JSON list of input modes
};

inline std::string read_source(const std::string& src, const std::string& what) {
    if (!src.empty() && (src.front() == '{' || src.front() == '[')) return src;
    std::ifstream f(src);
    if (!f) throw io::SchemaError("", "cannot read " + what + " file '" + src + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void add_state_options(CLI::App* sub, StateOptions& o) {
    sub->add_option("--state", o.state, "State JSON file or inline JSON");
    sub->add_option("--family", o.family, "Named family: obb, triad, partition, negative, ideal");
    sub->add_option("--phi", o.phi, "Triad phase (radians)");
    sub->add_option("--n", o.n, "Photon number for obb/ideal");
    sub->add_option("--x", o.x, "OBB signal weight");
    sub->add_option("--cells", o.cells, "Partition cells as JSON, e.g. [[0,1],[2]]");
}

inline void add_unitary_options(CLI::App* sub, UnitaryOptions& o) {
    sub->add_option("--unitary", o.unitary, "Unitary JSON file or inline JSON (row-major [re,im] pairs)");
    sub->add_option("--modes", o.modes, "Number of modes for a Haar-random unitary");
    sub->add_option("--haar-seed", o.haar_seed, "Seed for a Haar-random unitary");
    sub->add_option("--inputs", o.inputs, "Input modes as JSON list (default 0..n-1)");
}

/// Resolves the state flags into a document understood by io::state_from_json.
inline Json state_document(const StateOptions& o) {
    if (!o.state.empty()) return io::parse_text(read_source(o.state, "state"));
    if (o.family.empty()) throw io::SchemaError("", "no state given: use --state or --family");
    Json j = {{"family", o.family}};
    if (o.family == "obb") {
        j["n"] = o.n;
        j["x"] = o.x;
    } else if (o.family == "triad") {
        j["phi"] = o.phi;
    } else if (o.family == "partition") {
        j["cells"] = io::parse_text(o.cells, "/cells");
    } else if (o.family == "ideal") {
        j["n"] = o.n;
    }
    return j;
}

inline Interferometer resolve_unitary(const UnitaryOptions& o, int photons, Json& config) {
    std::vector<int> inputs = Interferometer::first_modes(photons);
    if (!o.inputs.empty()) inputs = io::int_list(io::parse_text(o.inputs, "/inputs"), "/inputs");
    if (static_cast<int>(inputs.size()) != photons) throw io::SchemaError("/inputs", "need one input mode per photon");
    config["inputs"] = inputs;
    if (!o.unitary.empty()) {
        const auto doc = io::parse_text(read_source(o.unitary, "unitary"));
        config["unitary"] = doc;
        return io::interferometer_from_json(doc, inputs);
    }
    if (o.haar_seed >= 0 && o.modes > 0) {
        config["haar_seed"] = o.haar_seed;
        config["modes"] = o.modes;
        return Interferometer(haar_unitary(o.modes, static_cast<std::uint64_t>(o.haar_seed)), inputs);
    }
    throw io::SchemaError("", "no interferometer given: use --unitary or --modes with --haar-seed");
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw io::SchemaError("", "cannot write output file '" + path + "'");
    f << text << '\n';
}

inline Json envelope(const Json& config, const Json& result) { return {{"config", config}, {"result", result}}; }

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"partmix: multi-photon partial distinguishability toolkit", "partmix"};
    app.require_subcommand(1, 1);

    std::string output;
    int threads = 0;
    double tolerance = tol::orbit_invariance;
    app.add_option("--threads", threads, "Worker thread cap (fallback: PARTMIX_THREADS)");

    StateOptions st;
    UnitaryOptions un;
    std::string outcome_text, method = "spectrum", distribution_text, sigma_text, format = "jsonl", report_path;
    std::string export_unitary;
    int depth = -1, scan_length = 0;
    long samples = 1000, trials = 4000, shots = 0;
    std::uint64_t seed = 1;
    int cost_n = 0;
    double cost_x = 0.0;
    bool with_classes = false, all_outcomes = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "Output path (default stdout)");
        sub->add_option("--tol", tolerance, "Orbit-invariance / real-solution tolerance");
    };

    auto* c_spectrum = app.add_subcommand("spectrum", "Generalized indistinguishabilities M_sigma of a state");
    add_state_options(c_spectrum, st);
    common(c_spectrum);
    c_spectrum->add_flag("--classes", with_classes, "Also emit the class-reduced spectrum");

    auto* c_classify = app.add_subcommand("classify", "Incoherent-regime membership and partition distribution");
    add_state_options(c_classify, st);
    common(c_classify);

    auto* c_twirl = app.add_subcommand("twirl", "Permutation-twirled spectrum");
    add_state_options(c_twirl, st);
    common(c_twirl);

    auto* c_project = app.add_subcommand("project", "Strict partition projection of the spectrum");
    add_state_options(c_project, st);
    common(c_project);

    auto* c_gi = app.add_subcommand("gi", "Genuine indistinguishability GI_part and GI_sym");
    add_state_options(c_gi, st);
    common(c_gi);

    auto* c_prob = app.add_subcommand("probability", "Outcome probability of a state through an interferometer");
    add_state_options(c_prob, st);
    add_unitary_options(c_prob, un);
    common(c_prob);
    c_prob->add_option("--outcome", outcome_text, "Occupation array, e.g. [1,1,0]")->required();
    c_prob->add_option("--method", method, "spectrum, oracle or both")->check(CLI::IsMember({"spectrum", "oracle", "both"}));

    auto* c_pprob = app.add_subcommand("partition-prob", "Outcome probabilities of a partition state");
    add_unitary_options(c_pprob, un);
    common(c_pprob);
    c_pprob->add_option("--cells", st.cells, "Partition cells as JSON")->required();
    c_pprob->add_option("--outcome", outcome_text, "Single occupation array (default: all outcomes)");

    auto* c_mitigate = app.add_subcommand("mitigate", "Partition mitigation weights");
    add_state_options(c_mitigate, st);
    common(c_mitigate);
    c_mitigate->add_option("--depth", depth, "Number of lattice rows to solve (default all)");

    auto* c_sample = app.add_subcommand("sample", "Partition sampling");
    add_state_options(c_sample, st);
    add_unitary_options(c_sample, un);
    common(c_sample);
    c_sample->add_option("--distribution", distribution_text, "Partition distribution JSON (default: from the state)");
    c_sample->add_option("--samples", samples, "Number of samples");
    c_sample->add_option("--seed", seed, "RNG seed");
    c_sample->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    c_sample->add_option("--report", report_path, "Write the run report JSON here");

    auto* c_tomo = app.add_subcommand("tomography", "Simulated distinguishability tomography");
    add_state_options(c_tomo, st);
    common(c_tomo);
    c_tomo->add_option("--sigma", sigma_text, "Only scan this permutation (JSON images); emits CSV");
    c_tomo->add_option("--scan-length", scan_length, "Phase points per scan (default 4k+1)");
    c_tomo->add_option("--shots", shots, "Binomial shot noise per phase point (0 = exact)");
    c_tomo->add_option("--seed", seed, "Shot-noise seed");
    c_tomo->add_option("--export-unitary", export_unitary, "Write the C_sigma matrix (zero phases) as JSON here");

    auto* c_haar = app.add_subcommand("haar-experiment", "Haar-random deviation experiment, raw vs twirled");
    add_state_options(c_haar, st);
    common(c_haar);
    c_haar->add_option("--modes", un.modes, "Number of modes m")->required();
    c_haar->add_option("--trials", trials, "Number of Haar trials");
    c_haar->add_option("--seed", seed, "RNG seed");

    auto* c_cost = app.add_subcommand("obb-cost", "Expected partition-sampling cost under OBB noise");
    common(c_cost);
    c_cost->add_option("--n", cost_n, "Photon number")->required();
    c_cost->add_option("--x", cost_x, "OBB signal weight")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    if (threads > 0) set_thread_count(threads);

    try {
        Json config = {{"tolerance", tolerance}, {"threads", thread_count()}};
        auto load_state = [&] {
            const auto doc = state_document(st);
            config["state"] = doc;
            return io::state_from_json(doc);
        };

        if (c_spectrum->parsed()) {
            const auto s = spectrum_of(load_state());
            Json res = {{"n", s.size()}, {"spectrum", io::to_json(s)}};
            if (with_classes) res["classes"] = io::to_json(class_reduce(s));
            emit(io::canonical_dump(envelope(config, res)), output, out);
        } else if (c_classify->parsed()) {
            const auto c = classify(spectrum_of(load_state()), tolerance);
            emit(io::canonical_dump(envelope(config, io::to_json(c))), output, out);
        } else if (c_twirl->parsed() || c_project->parsed()) {
            const auto s = spectrum_of(load_state());
            const auto t = c_twirl->parsed() ? twirl(s) : strict_projection(s);
            emit(io::canonical_dump(envelope(config, {{"n", t.size()}, {"spectrum", io::to_json(t)}})), output, out);
        } else if (c_gi->parsed()) {
            const auto s = spectrum_of(load_state());
            const auto gp = gi_part(s);
            Json res = {{"gi_part", {{"re", gp.real()}, {"im", gp.imag()}}}, {"gi_sym", gi_sym(s)}};
            emit(io::canonical_dump(envelope(config, res)), output, out);
        } else if (c_prob->parsed()) {
            const auto state = load_state();
            const auto u = resolve_unitary(un, state.size(), config);
            const auto o = io::outcome_from_json(io::parse_text(outcome_text, "/outcome"), "/outcome");
            if (o.modes() != u.modes()) throw io::SchemaError("/outcome", "outcome length differs from mode count");
            if (o.total() != state.size()) throw io::SchemaError("/outcome", "outcome photon count differs from state");
            config["method"] = method;
            Json res = {{"outcome", io::to_json(o)}};
            if (method != "oracle") res["spectrum_probability"] = probability_from_spectrum(u, spectrum_of(state), o);
            if (method != "spectrum") res["oracle_probability"] = fock_oracle_probability(state, u, o);
            emit(io::canonical_dump(envelope(config, res)), output, out);
        } else if (c_pprob->parsed()) {
            const auto lam = io::partition_from_json(io::parse_text(st.cells, "/cells"), "/cells");
            config["cells"] = io::to_json(lam);
            const auto u = resolve_unitary(un, lam.size(), config);
            Json res = Json::array();
            std::vector<OutcomePattern> outs;
            if (!outcome_text.empty()) {
                outs.push_back(io::outcome_from_json(io::parse_text(outcome_text, "/outcome"), "/outcome"));
                if (outs.back().modes() != u.modes() || outs.back().total() != lam.size())
                    throw io::SchemaError("/outcome", "outcome does not match modes or photon count");
            } else {
                outs = enumerate_outcomes(u.modes(), lam.size());
            }
            for (const auto& o : outs) res.push_back({{"outcome", io::to_json(o)}, {"p", partition_probability(u, lam, o)}});
            emit(io::canonical_dump(envelope(config, res)), output, out);
        } else if (c_mitigate->parsed()) {
            const auto s = spectrum_of(load_state());
            if (depth >= 0) config["depth"] = depth;
            const auto plan = mitigation_weights(s, depth >= 0 ? std::optional<int>(depth) : std::nullopt, tolerance);
            emit(io::canonical_dump(envelope(config, io::to_json(plan))), output, out);
        } else if (c_sample->parsed()) {
            PartitionDistribution dist;
            if (!distribution_text.empty()) {
                const auto doc = io::parse_text(read_source(distribution_text, "distribution"), "/distribution");
                config["distribution"] = doc;
                dist = io::distribution_from_json(doc, "/distribution");
            } else {
                const auto c = classify(spectrum_of(load_state()), tolerance);
                if (!c.member) throw PreconditionError("state has no partition representation; cannot sample");
                dist = *c.distribution;
            }
            SamplerConfig cfg{resolve_unitary(un, dist.size(), config), dist, seed, static_cast<std::size_t>(samples)};
            config["seed"] = seed;
            config["samples"] = samples;
            const auto run = partition_sample(cfg);
            std::string text;
            if (format == "csv") {
                for (int j = 0; j < cfg.unitary.modes(); ++j) text += (j ? ",s" : "s") + std::to_string(j);
                text += '\n';
            }
            for (std::size_t i = 0; i < run.samples.size(); ++i) {
                const auto& occ = run.samples[i].occupations;
                if (format == "csv") {
                    for (std::size_t j = 0; j < occ.size(); ++j) text += (j ? "," : "") + std::to_string(occ[j]);
                } else {
                    text += io::canonical_dump(io::to_json(run.samples[i]));
                }
                if (i + 1 < run.samples.size()) text += '\n';
            }
            emit(text, output, out);
            if (!report_path.empty())
                emit(io::canonical_dump(envelope(config, {{"mean_cost", run.cost.mean}})), report_path, out);
        } else if (c_tomo->parsed()) {
            const auto state = load_state();
            if (!sigma_text.empty()) {
                const auto sigma = io::permutation_from_json(io::parse_text(sigma_text, "/sigma"), "/sigma");
                if (sigma.size() != state.size()) throw io::SchemaError("/sigma", "permutation size differs from state");
                const int L = scan_length > 0 ? scan_length : default_scan_length(sigma);
                const auto scan = fringe_scan(state, sigma, L, shots > 0 ? std::optional<long>(shots) : std::nullopt, seed);
                if (!export_unitary.empty()) {
                    const auto c = build_cyclic(sigma, std::vector<double>(static_cast<std::size_t>(sigma.num_cycles()), 0.0));
                    emit(io::canonical_dump(io::unitary_to_json(c.unitary.matrix())), export_unitary, out);
                }
                std::string text = "phase,probability\n";
                char buf[80];
                for (std::size_t l = 0; l < scan.phases.size(); ++l) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", scan.phases[l], scan.probabilities[l]);
                    text += buf;
                }
                const auto cal = fringe_scan(Mixture(ideal_state(state.size())), sigma, L);
                const auto m = extract_M(scan, sigma, cal);
                std::snprintf(buf, sizeof buf, "# M,%.17g,%.17g", m.real(), m.imag());
                text += buf;
                emit(text, output, out);
            } else {
                const auto s = full_tomography(state);
                emit(io::canonical_dump(envelope(config, {{"n", s.size()}, {"spectrum", io::to_json(s)}})), output, out);
            }
        } else if (c_haar->parsed()) {
            const auto s = spectrum_of(load_state());
            config["modes"] = un.modes;
            config["trials"] = trials;
            config["seed"] = seed;
            const auto r = haar_variance_experiment(s, un.modes, trials, seed);
            Json res = {{"mean_sq_raw", r.mean_sq_raw},       {"mean_sq_twirled", r.mean_sq_twirled},
                        {"stderr_raw", r.stderr_raw},         {"stderr_twirled", r.stderr_twirled},
                        {"inequality_holds", r.inequality_holds()}, {"photons", r.photons},
                        {"modes", r.modes},                   {"trials", r.trials}};
            emit(io::canonical_dump(envelope(config, res)), output, out);
        } else if (c_cost->parsed()) {
            config["n"] = cost_n;
            config["x"] = cost_x;
            Json res = {{"cost", obb_cost_curve(cost_n, cost_x)},
                        {"closed_form", cost_n * std::pow(1.0 + cost_x, cost_n)}};
            emit(io::canonical_dump(envelope(config, res)), output, out);
        }
    } catch (const io::SchemaError& e) {
        err << io::canonical_dump({{"error", e.kind()}, {"message", e.what()}, {"pointer", e.pointer()}}) << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        err << io::canonical_dump({{"error", e.kind()}, {"message", e.what()}}) << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace partmix::cli
