#pragma once

// Report envelope and schema check. Everything except `elapsed_seconds` is
// the deterministic payload.

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "upbkit/errors.hpp"
#include "upbkit/linalg.hpp"
#include "upbkit/states.hpp"

namespace upbkit::cli {

using nlohmann::json;

inline constexpr const char* kToolkitName = "upbkit";
inline constexpr const char* kToolkitVersion = "0.1.0";

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json vector_json(std::span<const cplx> v) {
    json out = json::array();
    for (const cplx& z : v) out.push_back(complex_json(z));
    return out;
}

inline json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json product_vector_json(const ProductVector& v) {
    json out = json::array();
    for (const CVector& l : v.locals()) out.push_back(vector_json(l));
    return out;
}

inline json ppt_json(const PptReport& r) {
    json out = json::array();
    for (const PptEntry& e : r.entries)
        out.push_back({{"cut", e.cut.side_a()}, {"ppt", e.ppt}, {"min_eigenvalue", e.min_eigenvalue}});
    return out;
}

/// Required result keys per command; the report may carry no others.
inline const std::map<std::string, std::set<std::string>>& result_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"build", {"members", "state", "spectrum", "rank", "ppt", "ppt_cuts", "cuts_total"}},
        {"certify", {"max_overlap", "restarts", "gap", "certified", "best_product_vector", "witness"}},
        {"perturb-scan", {"noise_kind", "samples", "summary"}},
        {"rank-mixtures",
         {"rank_state", "rank_state_alt", "rank_equal_mixture", "rank_state_plus_member", "member_index", "rank_tol"}},
        {"subspace-hunt", {"source", "samples", "histogram"}},
        {"witness-radius", {"label", "direction", "tr_w_rho", "radius", "radius_infinite", "inside", "outside",
                            "consistent"}},
    };
    return schema;
}

inline const std::set<std::string>& envelope_keys() {
    static const std::set<std::string> keys = {"toolkit", "version", "command", "config", "result", "elapsed_seconds"};
    return keys;
}

/// Throws InvalidArgument describing the first violation.
inline void validate_report(const json& report) {
    if (!report.is_object()) throw InvalidArgument("report must be an object");
    for (const auto& [key, value] : report.items())
        if (!envelope_keys().contains(key)) throw InvalidArgument("unknown report field '" + key + "'");
    for (const std::string& key : envelope_keys())
        if (!report.contains(key)) throw InvalidArgument("report is missing '" + key + "'");
    if (report.at("toolkit") != kToolkitName) throw InvalidArgument("report toolkit name mismatch");
    if (!report.at("elapsed_seconds").is_number()) throw InvalidArgument("elapsed_seconds must be a number");
    const std::string command = report.at("command").get<std::string>();
    const auto it = result_schema().find(command);
    if (it == result_schema().end()) throw InvalidArgument("report has unknown command '" + command + "'");
    const json& result = report.at("result");
    if (!result.is_object()) throw InvalidArgument("result must be an object");
    for (const auto& [key, value] : result.items())
        if (!it->second.contains(key)) throw InvalidArgument("unknown result field '" + key + "' for " + command);
    for (const std::string& key : it->second)
        if (!result.contains(key)) throw InvalidArgument("result for " + command + " is missing '" + key + "'");
}

/// The part of a report that must be byte-identical across reruns.
inline std::string payload_dump(const json& report) {
    json p = report;
    p.erase("elapsed_seconds");
    return p.dump();
}

}  // namespace upbkit::cli
