#pragma once

// Experiment configuration: a JSON document with a closed set of keys. Unknown
// keys are rejected so typos cannot silently fall back to defaults.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "upbkit/errors.hpp"
#include "upbkit/perturbation.hpp"
#include "upbkit/upb.hpp"

namespace upbkit::cli {

using nlohmann::json;

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"build",         "certify",       "perturb-scan",
                                                   "rank-mixtures", "subspace-hunt", "witness-radius"};
    return names;
}

struct Tolerances {
    double rank_tol = kDefaultRankTol;
    double ppt_tol = kPptTol;
    double seesaw_tol = kSeesawTol;
};

struct NoiseConfig {
    std::string kind = "mix";      // "mix" | "local"
    std::string model = "white";   // mix: "white" | "random" | "npt_fixture" | "degenerate_fixture"
    std::size_t samples = 1;       // mix/random only
    std::size_t rank = 0;          // mix/random only; 0 cycles ranks 1..D
    std::map<std::string, double> coefficients;  // local only, keys like "0,phi1,1"
};

struct SubspaceConfig {
    std::string source = "random";  // "random" | "planted" | "upb_complement"
    std::size_t dimension = 5;
    std::size_t samples = 4;
};

struct DirectionConfig {
    bool uniform = true;
    std::map<std::string, double> coefficients;
};

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::size_t restarts = kDefaultRestarts;
    ShiftsParams shifts{std::numbers::pi / 4, std::numbers::pi / 4, std::numbers::pi / 4};
    ShiftsParams shifts_alt{0.3, 0.7, 1.1};
    NoiseConfig noise;
    std::vector<double> epsilon_grid{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    SubspaceConfig subspace;
    DirectionConfig direction;
    Tolerances tolerances;
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
}

template <class T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument("bad value for '" + key + "': " + e.what());
    }
}

inline ShiftsParams parse_shifts(const json& j, const std::string& where) {
    reject_unknown(j, {"a", "b", "c"}, where);
    return {get_as<double>(j, "a"), get_as<double>(j, "b"), get_as<double>(j, "c")};
}

inline std::map<std::string, double> parse_coefficients(const json& j, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be an object of label -> coefficient");
    std::map<std::string, double> out;
    for (const auto& [key, value] : j.items()) {
        ProjectorBasisIndex::parse(key);  // validates labels
        if (!value.is_number()) throw InvalidArgument("coefficient for '" + key + "' must be a number");
        out.emplace(key, value.get<double>());
    }
    return out;
}

inline bool is_nonnegative_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline json shifts_json(const ShiftsParams& p) { return {{"a", p.a}, {"b", p.b}, {"c", p.c}}; }

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), c.command) == names.end())
        throw InvalidArgument("unknown command '" + c.command + "'");
    if (c.restarts == 0) throw InvalidArgument("restarts must be positive");
    for (double t : {c.tolerances.rank_tol, c.tolerances.ppt_tol, c.tolerances.seesaw_tol})
        if (!(t > 0.0)) throw InvalidArgument("tolerances must be positive");
    if (c.noise.kind != "mix" && c.noise.kind != "local") throw InvalidArgument("noise.kind must be 'mix' or 'local'");
    static const std::set<std::string> models = {"white", "random", "npt_fixture", "degenerate_fixture"};
    if (c.noise.kind == "mix" && !models.contains(c.noise.model))
        throw InvalidArgument("unknown noise model '" + c.noise.model + "'");
    if (c.noise.samples == 0) throw InvalidArgument("noise.samples must be positive");
    static const std::set<std::string> sources = {"random", "planted", "upb_complement"};
    if (!sources.contains(c.subspace.source)) throw InvalidArgument("unknown subspace source '" + c.subspace.source + "'");
    if (c.subspace.dimension == 0 || c.subspace.dimension >= 8)
        throw InvalidArgument("subspace.dimension must be in [1, 7]");
    if (c.subspace.samples == 0) throw InvalidArgument("subspace.samples must be positive");
}

/// Parses a config document. `command` may be absent when supplied by the CLI.
inline ExperimentConfig parse_config(const json& j) {
    detail::reject_unknown(j, {"command", "seed", "restarts", "shifts", "shifts_alt", "noise", "epsilon_grid",
                               "subspace", "direction", "tolerances"},
                           "config");
    ExperimentConfig c;
    if (j.contains("command")) c.command = detail::get_as<std::string>(j, "command");
    if (!j.contains("seed")) throw InvalidArgument("config must specify 'seed' (runs are always seeded)");
    if (!detail::is_nonnegative_integer(j.at("seed"))) throw InvalidArgument("seed must be an unsigned 64-bit integer");
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts")) {
        if (!detail::is_nonnegative_integer(j.at("restarts"))) throw InvalidArgument("restarts must be a positive integer");
        c.restarts = j.at("restarts").get<std::size_t>();
    }
    if (j.contains("shifts")) c.shifts = detail::parse_shifts(j.at("shifts"), "shifts");
    if (j.contains("shifts_alt")) c.shifts_alt = detail::parse_shifts(j.at("shifts_alt"), "shifts_alt");
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        detail::reject_unknown(n, {"kind", "model", "samples", "rank", "coefficients"}, "noise");
        if (n.contains("kind")) c.noise.kind = detail::get_as<std::string>(n, "kind");
        if (n.contains("model")) c.noise.model = detail::get_as<std::string>(n, "model");
        if (n.contains("samples")) c.noise.samples = detail::get_as<std::size_t>(n, "samples");
        if (n.contains("rank")) c.noise.rank = detail::get_as<std::size_t>(n, "rank");
        if (n.contains("coefficients")) c.noise.coefficients = detail::parse_coefficients(n.at("coefficients"), "noise.coefficients");
    }
    if (j.contains("epsilon_grid")) c.epsilon_grid = detail::get_as<std::vector<double>>(j, "epsilon_grid");
    if (j.contains("subspace")) {
        const json& s = j.at("subspace");
        detail::reject_unknown(s, {"source", "dimension", "samples"}, "subspace");
        if (s.contains("source")) c.subspace.source = detail::get_as<std::string>(s, "source");
        if (s.contains("dimension")) c.subspace.dimension = detail::get_as<std::size_t>(s, "dimension");
        if (s.contains("samples")) c.subspace.samples = detail::get_as<std::size_t>(s, "samples");
    }
    if (j.contains("direction")) {
        const json& d = j.at("direction");
        if (d.is_string()) {
            if (d.get<std::string>() != "uniform") throw InvalidArgument("direction must be 'uniform' or an object");
        } else {
            detail::reject_unknown(d, {"coefficients"}, "direction");
            c.direction.uniform = false;
            c.direction.coefficients = detail::parse_coefficients(d.at("coefficients"), "direction.coefficients");
        }
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        detail::reject_unknown(t, {"rank_tol", "ppt_tol", "seesaw_tol"}, "tolerances");
        if (t.contains("rank_tol")) c.tolerances.rank_tol = detail::get_as<double>(t, "rank_tol");
        if (t.contains("ppt_tol")) c.tolerances.ppt_tol = detail::get_as<double>(t, "ppt_tol");
        if (t.contains("seesaw_tol")) c.tolerances.seesaw_tol = detail::get_as<double>(t, "seesaw_tol");
    }
    return c;
}

/// Normalized echo of every field, defaults included.
inline json to_json(const ExperimentConfig& c) {
    json noise = {{"kind", c.noise.kind}};
    if (c.noise.kind == "mix") {
        noise["model"] = c.noise.model;
        noise["samples"] = c.noise.samples;
        noise["rank"] = c.noise.rank;
    } else {
        noise["coefficients"] = c.noise.coefficients;
    }
    json direction = c.direction.uniform ? json("uniform") : json{{"coefficients", c.direction.coefficients}};
    return {{"command", c.command},
            {"seed", c.seed},
            {"restarts", c.restarts},
            {"shifts", detail::shifts_json(c.shifts)},
            {"shifts_alt", detail::shifts_json(c.shifts_alt)},
            {"noise", noise},
            {"epsilon_grid", c.epsilon_grid},
            {"subspace", {{"source", c.subspace.source}, {"dimension", c.subspace.dimension}, {"samples", c.subspace.samples}}},
            {"direction", direction},
            {"tolerances",
             {{"rank_tol", c.tolerances.rank_tol}, {"ppt_tol", c.tolerances.ppt_tol}, {"seesaw_tol", c.tolerances.seesaw_tol}}}};
}

inline LocalNoiseSpec to_noise_spec(const std::map<std::string, double>& coefficients) {
    std::map<ProjectorBasisIndex, double> c;
    for (const auto& [key, value] : coefficients) c.emplace(ProjectorBasisIndex::parse(key), value);
    return LocalNoiseSpec(std::move(c));
}

}  // namespace upbkit::cli
