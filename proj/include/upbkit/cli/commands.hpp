#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "upbkit/cli/config.hpp"
#include "upbkit/cli/report.hpp"
#include "upbkit/perturbation.hpp"
#include "upbkit/rng.hpp"
#include "upbkit/states.hpp"
#include "upbkit/upb.hpp"
#include "upbkit/witness.hpp"

namespace upbkit::cli {

inline const char* kRadiusLabel = "detection radius (lower bound on entanglement persistence)";

inline json cmd_build(const ExperimentConfig& c) {
    const UPB u = shifts_family(c.shifts);
    const DensityMatrix rho = upb_state(u);
    const PptReport ppt = is_ppt_all_cuts(rho, c.tolerances.ppt_tol);
    json members = json::array();
    for (const ProductVector& m : u.members()) members.push_back(product_vector_json(m));
    return {{"members", members},
            {"state", matrix_json(rho.matrix())},
            {"spectrum", eigenvalues(rho.op())},
            {"rank", numerical_rank(rho.op(), c.tolerances.rank_tol)},
            {"ppt", ppt_json(ppt)},
            {"ppt_cuts", ppt.ppt_count()},
            {"cuts_total", ppt.entries.size()}};
}

inline json cmd_certify(const ExperimentConfig& c) {
    UPB u = shifts_family_unchecked(c.shifts);
    const UnextendibilityCertificate cert = certify_unextendible(u, c.restarts, c.seed, c.tolerances.seesaw_tol);
    if (!cert.certifies())
        throw CertificationError("unextendibility not certified: product overlap " + std::to_string(cert.max_overlap) +
                                 " reaches 1 - gap (gap " + std::to_string(kUnextendibilityGap) + ")");
    const Witness w = build_upb_witness(u, cert);
    return {{"max_overlap", cert.max_overlap},
            {"restarts", cert.restarts},
            {"gap", kUnextendibilityGap},
            {"certified", true},
            {"best_product_vector", product_vector_json(cert.best_product_vector)},
            {"witness",
             {{"trace", w.op().trace()},
              {"shift", w.shift()},
              {"tr_w_rho", w.detected_value()},
              {"matrix", matrix_json(w.op().matrix())}}}};
}

namespace detail {

struct NoiseSample {
    std::string description;
    DensityMatrix rho1;
};

inline DensityMatrix npt_fixture() {
    const double r = 1.0 / std::sqrt(2.0);
    const CVector bell{r, 0.0, 0.0, r};
    const CVector zero{1.0, 0.0};
    return DensityMatrix::pure(kron(bell, zero), PartyStructure::qubits(3));
}

inline std::vector<NoiseSample> mix_samples(const ExperimentConfig& c, const UPB& u) {
    const PartyStructure& parts = u.parts();
    std::vector<NoiseSample> out;
    if (c.noise.model == "white") {
        out.push_back({"white noise I/8", DensityMatrix::maximally_mixed(parts)});
    } else if (c.noise.model == "npt_fixture") {
        out.push_back({"|phi+><phi+| on parties 0,1 tensor |0><0| on party 2", npt_fixture()});
    } else if (c.noise.model == "degenerate_fixture") {
        out.push_back({"the UPB state itself (A = 0)", upb_state(u)});
    } else {
        for (std::size_t i = 0; i < c.noise.samples; ++i) {
            Rng rng(sub_seed(c.seed, stream::kNoise, i));
            const std::size_t rank = c.noise.rank != 0 ? c.noise.rank : 1 + i % parts.total_dim();
            out.push_back({"random Ginibre state of rank " + std::to_string(rank),
                           random_density_matrix(rng, parts, rank)});
        }
    }
    return out;
}

inline void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidArgument("epsilon_grid must be nonempty");
    for (double e : grid)
        if (!(e > 0.0) || e > kMaxPerturbativeEpsilon)
            throw InvalidArgument("epsilon_grid values must lie in (0, " + std::to_string(kMaxPerturbativeEpsilon) + "]");
}

}  // namespace detail

inline json cmd_perturb_scan(const ExperimentConfig& c) {
    detail::check_grid(c.epsilon_grid);
    const UPB u = shifts_family(c.shifts);
    const DensityMatrix rho = upb_state(u);
    const std::vector<Bipartition> cuts = canonical_cuts(u.parts());

    if (c.noise.kind == "local") {
        const LocalNoiseSpec direction = to_noise_spec(c.noise.coefficients);
        json grid = json::array();
        std::size_t ppt_all = 0, not_ppt = 0, invalid = 0;
        for (double e : c.epsilon_grid) {
            json point = {{"epsilon", e}};
            try {
                const DensityMatrix out = perturb_local(rho, direction.scaled(e));
                const PptReport r = is_ppt_all_cuts(out, c.tolerances.ppt_tol);
                point["valid"] = true;
                point["ppt"] = ppt_json(r);
                point["rank"] = numerical_rank(out.op(), c.tolerances.rank_tol);
                (r.all_ppt() ? ppt_all : not_ppt) += 1;
            } catch (const NumericalError& err) {
                point["valid"] = false;
                point["error"] = err.what();
                ++invalid;
            }
            grid.push_back(std::move(point));
        }
        json sample = {{"index", 0},
                       {"description", "local noise along the E(mu) projectors"},
                       {"nonnegative", direction.nonnegative()},
                       {"grid", grid}};
        return {{"noise_kind", "local"},
                {"samples", json::array({sample})},
                {"summary", {{"ppt_all_cuts", ppt_all}, {"not_ppt", not_ppt}, {"invalid", invalid}}}};
    }

    std::map<std::string, std::size_t> counts = {
        {verdict_name(NoiseVerdict::PptPreserving), 0},
        {verdict_name(NoiseVerdict::NptInducing), 0},
        {verdict_name(NoiseVerdict::Degenerate), 0}};
    json samples = json::array();
    std::size_t index = 0;
    for (const detail::NoiseSample& s : detail::mix_samples(c, u)) {
        json cut_rows = json::array();
        for (const Bipartition& cut : cuts) {
            json grid = json::array();
            NoiseClassification cls = classify_noise(s.rho1, u, cut);
            const AMatrix a = a_matrix(s.rho1, u, cut);
            for (double e : c.epsilon_grid) {
                const ResolvedNoise res = resolve_noise(rho, u, s.rho1, cut, e, c.tolerances.ppt_tol);
                const double predicted = predict_first_order(a, e).front();
                grid.push_back({{"epsilon", e},
                                {"predicted_min", predicted},
                                {"exact_min", res.exact_min_pt},
                                {"abs_error", std::abs(predicted - res.exact_min_pt)},
                                {"ppt", res.ppt},
                                {"decided_by", decision_path_name(res.decided_by)}});
            }
            counts[verdict_name(cls.verdict)] += 1;
            cut_rows.push_back({{"cut", cut.side_a()},
                                {"a_eigenvalues", cls.a_eigenvalues},
                                {"lambda_min", cls.lambda_min},
                                {"verdict", verdict_name(cls.verdict)},
                                {"grid", grid}});
        }
        samples.push_back({{"index", index++}, {"description", s.description}, {"cuts", cut_rows}});
    }
    return {{"noise_kind", "mix"}, {"samples", samples}, {"summary", counts}};
}

inline json cmd_rank_mixtures(const ExperimentConfig& c) {
    if (c.shifts == c.shifts_alt) throw InvalidArgument("rank-mixtures needs two distinct parameter sets");
    const UPB u = shifts_family(c.shifts);
    const UPB v = shifts_family(c.shifts_alt);
    const DensityMatrix rho = upb_state(u);
    const DensityMatrix sigma = upb_state(v);
    const DensityMatrix member = DensityMatrix::pure(u.expanded().front(), u.parts());
    const double tol = c.tolerances.rank_tol;
    return {{"rank_state", numerical_rank(rho.op(), tol)},
            {"rank_state_alt", numerical_rank(sigma.op(), tol)},
            {"rank_equal_mixture", numerical_rank(mixture({rho, sigma}, {0.5, 0.5}).op(), tol)},
            {"rank_state_plus_member", numerical_rank(mixture({rho, member}, {0.5, 0.5}).op(), tol)},
            {"member_index", 0},
            {"rank_tol", tol}};
}

namespace detail {

inline std::vector<CVector> complement_basis(const UPB& u) {
    const EigDecomposition eig = hermitian_eig(u.complement_projector());
    std::vector<CVector> out;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (eig.eigenvalues[k] > 0.5) out.push_back(eig.vector(k));
    return out;
}

}  // namespace detail

inline json cmd_subspace_hunt(const ExperimentConfig& c) {
    const PartyStructure parts = PartyStructure::qubits(3);
    json samples = json::array();
    std::map<std::string, std::size_t> histogram;
    for (std::size_t i = 0; i < c.subspace.samples; ++i) {
        Rng rng(sub_seed(c.seed, stream::kSubspace, i));
        std::vector<CVector> basis;
        if (c.subspace.source == "upb_complement") {
            basis = detail::complement_basis(shifts_family(c.shifts));
        } else {
            for (std::size_t k = 0; k < c.subspace.dimension; ++k)
                basis.push_back(c.subspace.source == "planted" ? expand(random_product_vector(rng, parts))
                                                               : random_unit_vector(rng, parts.total_dim()));
        }
        const SubspaceHunt hunt =
            subspace_product_hunt(basis, parts, c.restarts, sub_seed(c.seed, stream::kSeesaw, i));
        json found = json::array();
        for (const ProductVector& s : hunt.solutions) found.push_back(product_vector_json(s));
        samples.push_back({{"index", i},
                           {"dimension", hunt.subspace_dim},
                           {"hits", hunt.hits},
                           {"distinct", hunt.distinct()},
                           {"rank", hunt.independence_rank},
                           {"solutions", found}});
        histogram[std::to_string(hunt.distinct())] += 1;
    }
    return {{"source", c.subspace.source}, {"samples", samples}, {"histogram", histogram}};
}

inline json cmd_witness_radius(const ExperimentConfig& c) {
    UPB u = shifts_family(c.shifts);
    const UnextendibilityCertificate cert = certify_unextendible(u, c.restarts, c.seed, c.tolerances.seesaw_tol);
    if (!cert.certifies()) throw CertificationError("unextendibility not certified; no witness available");
    const Witness w = build_upb_witness(u, cert);
    const DensityMatrix rho = upb_state(u);

    const LocalNoiseSpec direction = c.direction.uniform ? LocalNoiseSpec::uniform(3, 1.0 / 64.0)
                                                         : to_noise_spec(c.direction.coefficients);
    if (!direction.nonnegative() || std::abs(direction.sum() - 1.0) > 1e-12)
        throw InvalidArgument("direction must be nonnegative and sum to 1");
    const double radius = robustness_radius(w, rho, direction);
    const bool infinite = std::isinf(radius);
    auto probe = [&](double scale) {
        return json{{"scale", scale}, {"value", evaluate(w, perturb_local(rho, direction.scaled(scale)))}};
    };
    json inside = probe(infinite ? 1.0 : 0.5 * radius);
    json outside = infinite ? json(nullptr) : probe(2.0 * radius);
    const bool consistent =
        inside.at("value").get<double>() < 0.0 && (infinite || outside.at("value").get<double>() >= 0.0);
    return {{"label", kRadiusLabel},
            {"direction", c.direction.uniform ? "uniform" : "custom"},
            {"tr_w_rho", w.detected_value()},
            {"radius", infinite ? json(nullptr) : json(radius)},
            {"radius_infinite", infinite},
            {"inside", inside},
            {"outside", outside},
            {"consistent", consistent}};
}

inline json run_command(const ExperimentConfig& c) {
    validate(c);
    if (c.command == "build") return cmd_build(c);
    if (c.command == "certify") return cmd_certify(c);
    if (c.command == "perturb-scan") return cmd_perturb_scan(c);
    if (c.command == "rank-mixtures") return cmd_rank_mixtures(c);
    if (c.command == "subspace-hunt") return cmd_subspace_hunt(c);
    return cmd_witness_radius(c);
}

/// Runs the command and wraps the result in the report envelope.
inline json make_report(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    json result = run_command(c);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return {{"toolkit", kToolkitName},
            {"version", kToolkitVersion},
            {"command", c.command},
            {"config", to_json(c)},
            {"result", std::move(result)},
            {"elapsed_seconds", elapsed.count()}};
}

}  // namespace upbkit::cli
