#pragma once

// Three-qubit UPB family, UPB states, and the multi-start seesaw that bounds
// the largest product-vector overlap with a subspace.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "upbkit/linalg.hpp"
#include "upbkit/rng.hpp"
#include "upbkit/states.hpp"

namespace upbkit {

inline constexpr double kUnextendibilityGap = 1e-3;
inline constexpr double kSeesawTol = 1e-12;
inline constexpr int kSeesawMaxSweeps = 500;
inline constexpr std::size_t kDefaultRestarts = 64;
inline constexpr double kClusterFidelity = 1.0 - 1e-6;

struct ShiftsParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool valid() const {
        const double hi = std::numbers::pi / 2.0;
        return a > 0.0 && a < hi && b > 0.0 && b < hi && c > 0.0 && c < hi;
    }

    bool operator==(const ShiftsParams&) const = default;
};

inline ShiftsParams random_shifts(Rng& rng, double margin = 0.0) {
    const double hi = std::numbers::pi / 2.0;
    auto draw = [&] {
        double x = 0.0;
        while (!(x > margin && x < hi - margin)) x = rng.uniform(margin, hi - margin);
        return x;
    };
    const double a = draw();
    const double b = draw();
    const double c = draw();
    return {a, b, c};
}

struct UnextendibilityCertificate {
    double max_overlap = 0.0;
    std::size_t restarts = 0;
    ProductVector best_product_vector;

    bool certifies(double gap = kUnextendibilityGap) const { return max_overlap < 1.0 - gap; }
};

/// An orthogonal set of product vectors; unextendibility is recorded
/// separately by a numerical certificate.
class UPB {
public:
    UPB(PartyStructure parts, std::vector<ProductVector> members) : parts_(std::move(parts)), members_(std::move(members)) {
        if (members_.empty()) throw InvalidArgument("UPB needs at least one member");
        if (members_.size() >= parts_.total_dim()) throw InvalidArgument("UPB must have fewer members than D");
        for (const ProductVector& m : members_)
            if (!m.matches(parts_)) throw InvalidArgument("UPB member does not match the party structure");
        expanded_.reserve(members_.size());
        for (const ProductVector& m : members_) expanded_.push_back(expand(m));
        for (std::size_t i = 0; i < expanded_.size(); ++i)
            for (std::size_t j = i + 1; j < expanded_.size(); ++j)
                if (std::abs(inner(expanded_[i], expanded_[j])) > 1e-10)
                    throw InvalidArgument("UPB members " + std::to_string(i) + " and " + std::to_string(j) +
                                          " are not orthogonal");
    }

    const PartyStructure& parts() const { return parts_; }
    const std::vector<ProductVector>& members() const { return members_; }
    const std::vector<CVector>& expanded() const { return expanded_; }
    std::size_t size() const { return members_.size(); }

    const std::optional<UnextendibilityCertificate>& certificate() const { return certificate_; }
    void attach(UnextendibilityCertificate cert) { certificate_ = std::move(cert); }

    /// Σ_i |ψ_i><ψ_i|
    ComplexMatrix member_projector() const {
        ComplexMatrix p(parts_.total_dim());
        for (const CVector& v : expanded_) p += projector(v);
        return p;
    }

    /// I − Σ_i |ψ_i><ψ_i|
    HermitianMatrix complement_projector() const {
        return HermitianMatrix(ComplexMatrix::identity(parts_.total_dim()) - member_projector());
    }

private:
    PartyStructure parts_;
    std::vector<ProductVector> members_;
    std::vector<CVector> expanded_;
    std::optional<UnextendibilityCertificate> certificate_;
};

namespace detail {

inline CVector angle_vector(double t) { return {std::cos(t), std::sin(t)}; }
inline CVector angle_vector_bar(double t) { return {std::sin(t), -std::cos(t)}; }

}  // namespace detail

/// The family |000>, |1 B C>, |A 1 C̄>, |Ā B̄ 1> without the angle check.
/// Boundary angles give orthogonal but extendible sets.
inline UPB shifts_family_unchecked(const ShiftsParams& p) {
    using detail::angle_vector;
    using detail::angle_vector_bar;
    const CVector zero{1.0, 0.0}, one{0.0, 1.0};
    std::vector<ProductVector> members;
    members.emplace_back(std::vector<CVector>{zero, zero, zero});
    members.emplace_back(std::vector<CVector>{one, angle_vector(p.b), angle_vector(p.c)});
    members.emplace_back(std::vector<CVector>{angle_vector(p.a), one, angle_vector_bar(p.c)});
    members.emplace_back(std::vector<CVector>{angle_vector_bar(p.a), angle_vector_bar(p.b), one});
    return UPB(PartyStructure::qubits(3), std::move(members));
}

inline UPB shifts_family(const ShiftsParams& p) {
    if (!p.valid())
        throw InvalidArgument("shifts family angles must lie strictly inside (0, pi/2); at the boundary the "
                              "complement contains product vectors");
    return shifts_family_unchecked(p);
}

/// Applies a local unitary per party to every member.
inline UPB local_transform(const UPB& u, const std::vector<ComplexMatrix>& locals) {
    if (locals.size() != u.parts().parties()) throw InvalidArgument("one local unitary per party required");
    std::vector<ProductVector> members;
    for (const ProductVector& m : u.members()) {
        std::vector<CVector> vs;
        for (std::size_t k = 0; k < m.parties(); ++k) vs.push_back(normalized(locals[k].apply(m.local(k))));
        members.emplace_back(std::move(vs));
    }
    return UPB(u.parts(), std::move(members));
}

/// ρ = (I − Σ|ψ_i><ψ_i|)/(D − m)
inline DensityMatrix upb_state(const UPB& u) {
    const std::size_t d = u.parts().total_dim();
    ComplexMatrix m = u.complement_projector().matrix();
    m *= cplx(1.0 / static_cast<double>(d - u.size()));
    return DensityMatrix(HermitianMatrix(std::move(m)), u.parts());
}

// ---------------------------------------------------------------------------
// Seesaw

struct SeesawRun {
    double overlap = 0.0;
    ProductVector vector;
    int sweeps = 0;
    bool converged = false;
    std::vector<double> history;  // objective after each sweep
    std::uint64_t sub_seed = 0;
};

namespace detail {

inline void check_projector(const HermitianMatrix& p, const PartyStructure& parts) {
    if (p.dim() != parts.total_dim()) throw InvalidArgument("projector does not match the party structure");
    const double defect = max_abs_diff(p.matrix() * p.matrix(), p.matrix());
    if (defect > 1e-10) throw InvalidArgument("seesaw input is not an orthogonal projector (P^2 != P)");
}

// M_k[a,b] = <w_a|P|w_b>, w_a the product vector with party k replaced by e_a.
inline ComplexMatrix contracted_operator(const ComplexMatrix& p, const PartyStructure& parts,
                                         const std::vector<CVector>& locals, std::size_t k) {
    const std::size_t dk = parts.local_dim(k);
    std::vector<CVector> ws;
    ws.reserve(dk);
    for (std::size_t a = 0; a < dk; ++a) {
        CVector w{1.0};
        for (std::size_t j = 0; j < parts.parties(); ++j)
            w = kron(w, j == k ? basis_vector(dk, a) : locals[j]);
        ws.push_back(std::move(w));
    }
    std::vector<CVector> pw;
    pw.reserve(dk);
    for (const CVector& w : ws) pw.push_back(p.apply(w));
    ComplexMatrix m(dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = a; b < dk; ++b) {
            m(a, b) = inner(ws[a], pw[b]);
            m(b, a) = std::conj(m(a, b));
        }
    for (std::size_t a = 0; a < dk; ++a) m(a, a) = m(a, a).real();
    return m;
}

}  // namespace detail

/// Alternating maximization of <φ|P|φ> from a given start. Each local update
/// takes the top eigenvector of the operator obtained by contracting P with
/// the other parties' vectors, so the objective never decreases.
inline SeesawRun seesaw_single(const HermitianMatrix& p, const PartyStructure& parts, std::vector<CVector> locals,
                               double tol = kSeesawTol, int max_sweeps = kSeesawMaxSweeps) {
    SeesawRun run{0.0, ProductVector(locals), 0, false, {}, 0};
    const ComplexMatrix& pm = p.matrix();
    double prev = inner(expand(run.vector), pm.apply(expand(run.vector))).real();
    run.history.push_back(prev);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double value = prev;
        for (std::size_t k = 0; k < parts.parties(); ++k) {
            const EigDecomposition eig = hermitian_eig(HermitianMatrix(detail::contracted_operator(pm, parts, locals, k)));
            locals[k] = normalized(eig.vector(eig.eigenvalues.size() - 1));
            value = eig.eigenvalues.back();
        }
        run.history.push_back(value);
        run.sweeps = sweep;
        if (value < prev - tol)
            throw NumericalError("seesaw objective decreased from " + std::to_string(prev) + " to " +
                                 std::to_string(value));
        const bool done = value - prev < tol;
        prev = std::max(prev, value);
        if (done) {
            run.converged = true;
            break;
        }
    }
    run.vector = ProductVector(locals);
    run.overlap = std::min(1.0, std::max(0.0, inner(expand(run.vector), pm.apply(expand(run.vector))).real()));
    return run;
}

/// Every restart's final point. Restart k starts from a Haar-random product
/// vector drawn with sub_seed(seed, stream::kSeesaw, k).
inline std::vector<SeesawRun> seesaw_runs(const HermitianMatrix& p, const PartyStructure& parts, std::size_t restarts,
                                          std::uint64_t seed, double tol = kSeesawTol) {
    detail::check_projector(p, parts);
    if (restarts == 0) throw InvalidArgument("seesaw needs at least one restart");
    std::vector<SeesawRun> runs;
    runs.reserve(restarts);
    for (std::size_t k = 0; k < restarts; ++k) {
        const std::uint64_t s = sub_seed(seed, stream::kSeesaw, k);
        Rng rng(s);
        SeesawRun run = seesaw_single(p, parts, random_product_vector(rng, parts).locals(), tol);
        run.sub_seed = s;
        runs.push_back(std::move(run));
    }
    return runs;
}

/// max over product |φ> of <φ|P|φ>; ties keep the lowest restart index.
inline UnextendibilityCertificate seesaw_max_product_overlap(const HermitianMatrix& p, const PartyStructure& parts,
                                                             std::size_t restarts, std::uint64_t seed,
                                                             double tol = kSeesawTol) {
    const std::vector<SeesawRun> runs = seesaw_runs(p, parts, restarts, seed, tol);
    const SeesawRun* best = &runs.front();
    for (const SeesawRun& r : runs)
        if (r.overlap > best->overlap) best = &r;
    return {best->overlap, restarts, best->vector};
}

/// Seesaw on I − Σ|ψ_i><ψ_i|; the certificate is attached to `u`.
inline UnextendibilityCertificate certify_unextendible(UPB& u, std::size_t restarts, std::uint64_t seed,
                                                       double tol = kSeesawTol) {
    UnextendibilityCertificate cert = seesaw_max_product_overlap(u.complement_projector(), u.parts(), restarts, seed, tol);
    u.attach(cert);
    return cert;
}

// ---------------------------------------------------------------------------
// Product vectors inside a subspace

inline constexpr double kHuntPolishTol = 1e-15;

struct SubspaceHunt {
    std::vector<ProductVector> solutions;  // distinct, in order of discovery
    std::vector<double> overlaps;
    std::size_t hits = 0;                  // restarts that reached overlap >= 1 − gap
    std::size_t independence_rank = 0;     // rank of the expanded solutions
    std::size_t subspace_dim = 0;

    std::size_t distinct() const { return solutions.size(); }
};

/// Same product vector up to a phase on every party.
inline bool same_product_vector(const ProductVector& x, const ProductVector& y, double fidelity = kClusterFidelity) {
    if (x.parties() != y.parties()) return false;
    for (std::size_t k = 0; k < x.parties(); ++k)
        if (std::norm(inner(x.local(k), y.local(k))) <= fidelity) return false;
    return true;
}

inline SubspaceHunt subspace_product_hunt(const std::vector<CVector>& basis, const PartyStructure& parts,
                                          std::size_t restarts, std::uint64_t seed,
                                          double gap = kUnextendibilityGap, double rank_tol = kDefaultRankTol) {
    if (basis.empty()) throw InvalidArgument("subspace basis is empty");
    for (const CVector& v : basis)
        if (v.size() != parts.total_dim()) throw InvalidArgument("subspace basis vector has the wrong dimension");
    const std::vector<CVector> ortho = orthonormalize(basis);
    if (ortho.size() != basis.size()) throw InvalidArgument("subspace basis is linearly dependent");

    const std::size_t d = parts.total_dim();
    ComplexMatrix proj(d);
    for (const CVector& u : ortho) proj += projector(u);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) proj(j, i) = std::conj(proj(i, j));
    const HermitianMatrix p(std::move(proj));

    SubspaceHunt out;
    out.subspace_dim = ortho.size();
    for (SeesawRun run : seesaw_runs(p, parts, restarts, seed)) {
        if (run.overlap < 1.0 - gap) continue;
        ++out.hits;
        // Near exact solutions the sweep can crawl into the iteration cap;
        // polish so duplicates land inside the clustering fidelity.
        run = seesaw_single(p, parts, run.vector.locals(), kHuntPolishTol);
        bool fresh = true;
        for (const ProductVector& s : out.solutions)
            if (same_product_vector(s, run.vector)) {
                fresh = false;
                break;
            }
        if (fresh) {
            out.solutions.push_back(run.vector);
            out.overlaps.push_back(run.overlap);
        }
    }
    if (!out.solutions.empty()) {
        ComplexMatrix sum(d);
        for (const ProductVector& s : out.solutions) sum += projector(expand(s));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) sum(j, i) = std::conj(sum(i, j));
        out.independence_rank = numerical_rank(HermitianMatrix(std::move(sum)), rank_tol);
    }
    return out;
}

}  // namespace upbkit
