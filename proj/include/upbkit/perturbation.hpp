#pragma once

// Noise models around UPB states and the first-order spectral analysis of the
// partially transposed perturbed state.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "upbkit/linalg.hpp"
#include "upbkit/states.hpp"
#include "upbkit/upb.hpp"

namespace upbkit {

inline constexpr double kDegeneracyBand = 1e-9;
inline constexpr double kMaxPerturbativeEpsilon = 0.1;
inline constexpr double kLocalNoisePsdTol = 1e-9;

// ---------------------------------------------------------------------------
// Local noise along the separable projector basis

class LocalNoiseSpec {
public:
    LocalNoiseSpec() = default;

    explicit LocalNoiseSpec(std::map<ProjectorBasisIndex, double> coefficients) : coefficients_(std::move(coefficients)) {
        std::size_t n = 0;
        for (const auto& [mu, eps] : coefficients_) {
            if (!std::isfinite(eps) || std::abs(eps) > 1.0)
                throw InvalidArgument("local noise coefficient for " + mu.str() + " outside [-1, 1]");
            if (n != 0 && mu.size() != n) throw InvalidArgument("local noise indices have inconsistent lengths");
            n = mu.size();
        }
    }

    /// Every coefficient set to `value` over the 4^n basis.
    static LocalNoiseSpec uniform(std::size_t n, double value) {
        std::map<ProjectorBasisIndex, double> c;
        const std::size_t count = std::size_t{1} << (2 * n);
        for (std::size_t k = 0; k < count; ++k) c.emplace(ProjectorBasisIndex::from_ordinal(n, k), value);
        return LocalNoiseSpec(std::move(c));
    }

    const std::map<ProjectorBasisIndex, double>& coefficients() const { return coefficients_; }

    double sum() const {
        double s = 0.0;
        for (const auto& [mu, eps] : coefficients_) s += eps;
        return s;
    }

    /// All ε_μ ≥ 0 (local noise proper).
    bool nonnegative() const {
        return std::all_of(coefficients_.begin(), coefficients_.end(), [](const auto& kv) { return kv.second >= 0.0; });
    }

    LocalNoiseSpec scaled(double t) const {
        std::map<ProjectorBasisIndex, double> c;
        for (const auto& [mu, eps] : coefficients_) c.emplace(mu, t * eps);
        return LocalNoiseSpec(std::move(c));
    }

private:
    std::map<ProjectorBasisIndex, double> coefficients_;
};

/// ρ(ε_μ) = (ρ + Σ_μ ε_μ E(μ)) / (1 + Σ_μ ε_μ). Positivity is checked on the
/// full spectrum afterwards.
inline DensityMatrix perturb_local(const DensityMatrix& rho, const LocalNoiseSpec& spec) {
    const PartyStructure& parts = rho.parts();
    if (spec.coefficients().empty()) return rho;
    if (!parts.all_qubits()) throw InvalidArgument("local noise is defined for qubit systems only");
    ComplexMatrix sum = rho.matrix();
    for (const auto& [mu, eps] : spec.coefficients()) {
        if (eps == 0.0) continue;
        sum += projector_E(mu, parts).matrix() * cplx(eps);
    }
    const double norm_c = 1.0 + spec.sum();
    if (!(norm_c > 0.0)) throw NumericalError("local noise normalization constant is not positive");
    sum *= cplx(1.0 / norm_c);
    const HermitianMatrix h(std::move(sum));
    const double lo = min_eigenvalue(h);
    if (lo < -kLocalNoisePsdTol)
        throw NumericalError("local noise drives an eigenvalue to " + std::to_string(lo) + " (positivity violated)");
    return DensityMatrix(h, parts, kLocalNoisePsdTol);
}

// ---------------------------------------------------------------------------
// Mixing noise

class MixNoiseSpec {
public:
    MixNoiseSpec(DensityMatrix rho1, double epsilon) : rho1_(std::move(rho1)), epsilon_(epsilon) {
        if (!(epsilon > 0.0) || epsilon > kMaxPerturbativeEpsilon)
            throw InvalidArgument("mixing epsilon must lie in (0, " + std::to_string(kMaxPerturbativeEpsilon) + "]");
    }

    const DensityMatrix& rho1() const { return rho1_; }
    double epsilon() const { return epsilon_; }

private:
    DensityMatrix rho1_;
    double epsilon_;
};

/// ρ(ε) = (ρ + ε ρ₁) / (1 + ε)
inline DensityMatrix perturb_mix(const DensityMatrix& rho, const MixNoiseSpec& spec) {
    if (!(spec.rho1().parts() == rho.parts())) throw InvalidArgument("noise state does not match the party structure");
    const double e = spec.epsilon();
    ComplexMatrix m = rho.matrix() + spec.rho1().matrix() * cplx(e);
    m *= cplx(1.0 / (1.0 + e));
    return DensityMatrix(HermitianMatrix(std::move(m)), rho.parts());
}

// ---------------------------------------------------------------------------
// Kernel of the partially transposed UPB state

/// {|a'_i>|b_i>}: members with the side-A local vectors complex-conjugated.
inline std::vector<ProductVector> kernel_product_basis(const UPB& u, const Bipartition& cut) {
    if (cut.parties() != u.parts().parties()) throw InvalidArgument("cut does not match the UPB's parties");
    std::vector<ProductVector> out;
    out.reserve(u.size());
    for (const ProductVector& m : u.members()) {
        std::vector<CVector> locals = m.locals();
        for (std::size_t k : cut.side_a()) locals[k] = conjugated(std::move(locals[k]));
        out.emplace_back(std::move(locals));
    }
    return out;
}

inline std::vector<CVector> expanded(const std::vector<ProductVector>& vs) {
    std::vector<CVector> out;
    out.reserve(vs.size());
    for (const ProductVector& v : vs) out.push_back(expand(v));
    return out;
}

struct AMatrix {
    HermitianMatrix entries;
    std::vector<double> eigenvalues;  // ascending

    double lambda_min() const { return eigenvalues.front(); }
};

/// A_ij = <a'_i b_i| ρ₁^{T_a} |a'_j b_j>
inline AMatrix a_matrix(const DensityMatrix& rho1, const UPB& u, const Bipartition& cut) {
    if (!(rho1.parts() == u.parts())) throw InvalidArgument("noise state does not match the UPB's parties");
    const ComplexMatrix pt = partial_transpose(rho1.matrix(), rho1.parts(), cut);
    const std::vector<CVector> ks = expanded(kernel_product_basis(u, cut));
    const std::size_t m = ks.size();
    std::vector<CVector> pk;
    pk.reserve(m);
    for (const CVector& k : ks) pk.push_back(pt.apply(k));
    ComplexMatrix a(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            a(i, j) = inner(ks[i], pk[j]);
            a(j, i) = std::conj(a(i, j));
        }
    for (std::size_t i = 0; i < m; ++i) a(i, i) = a(i, i).real();
    HermitianMatrix h(std::move(a));
    std::vector<double> ev = eigenvalues(h);
    return {std::move(h), std::move(ev)};
}

/// ε·λ_r ascending, the first-order lowest eigenvalues of ρ(ε)^{T_a}.
inline std::vector<double> predict_first_order(const AMatrix& a, double epsilon) {
    if (!(epsilon >= 0.0) || epsilon > kMaxPerturbativeEpsilon)
        throw InvalidArgument("prediction epsilon must lie in [0, " + std::to_string(kMaxPerturbativeEpsilon) + "]");
    std::vector<double> out;
    out.reserve(a.eigenvalues.size());
    for (double l : a.eigenvalues) out.push_back(epsilon * l);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Classification

enum class NoiseVerdict { PptPreserving, NptInducing, Degenerate };

inline std::string verdict_name(NoiseVerdict v) {
    switch (v) {
        case NoiseVerdict::PptPreserving: return "PPT_PRESERVING";
        case NoiseVerdict::NptInducing: return "NPT_INDUCING";
        case NoiseVerdict::Degenerate: return "DEGENERATE";
    }
    return "?";
}

struct NoiseClassification {
    NoiseVerdict verdict;
    double lambda_min;
    std::vector<double> a_eigenvalues;
};

/// Sign of λ_min(A) outside the band ±δ_deg decides; inside it is DEGENERATE.
inline NoiseClassification classify_noise(const DensityMatrix& rho1, const UPB& u, const Bipartition& cut,
                                          double band = kDegeneracyBand) {
    const AMatrix a = a_matrix(rho1, u, cut);
    const double lo = a.lambda_min();
    NoiseVerdict v = NoiseVerdict::Degenerate;
    if (lo > band)
        v = NoiseVerdict::PptPreserving;
    else if (lo < -band)
        v = NoiseVerdict::NptInducing;
    return {v, lo, a.eigenvalues};
}

enum class DecisionPath { FirstOrder, ExactSpectrum };

inline std::string decision_path_name(DecisionPath p) {
    return p == DecisionPath::FirstOrder ? "first_order" : "exact_spectrum";
}

struct ResolvedNoise {
    NoiseClassification classification;
    bool ppt;  // final PPT verdict at the requested epsilon
    DecisionPath decided_by;
    double exact_min_pt;  // smallest eigenvalue of ρ(ε)^{T_a}
};

/// First-order verdict where it is decisive; DEGENERATE falls back to the exact
/// spectrum of ρ(ε)^{T_a} at the given ε.
inline ResolvedNoise resolve_noise(const DensityMatrix& rho, const UPB& u, const DensityMatrix& rho1,
                                   const Bipartition& cut, double epsilon, double ppt_tol = kPptTol) {
    NoiseClassification cls = classify_noise(rho1, u, cut);
    const double exact = min_pt_eigenvalue(perturb_mix(rho, MixNoiseSpec(rho1, epsilon)), cut);
    if (cls.verdict == NoiseVerdict::Degenerate) return {std::move(cls), exact >= -ppt_tol, DecisionPath::ExactSpectrum, exact};
    const bool ppt = cls.verdict == NoiseVerdict::PptPreserving;
    return {std::move(cls), ppt, DecisionPath::FirstOrder, exact};
}

/// The m smallest eigenvalues of ρ(ε)^{T_a}, ascending.
inline std::vector<double> lowest_pt_eigenvalues(const DensityMatrix& rho, const DensityMatrix& rho1,
                                                 const Bipartition& cut, double epsilon, std::size_t m) {
    const DensityMatrix mixed = perturb_mix(rho, MixNoiseSpec(rho1, epsilon));
    std::vector<double> ev = eigenvalues(partial_transpose(mixed.op(), mixed.parts(), cut));
    ev.resize(std::min(m, ev.size()));
    return ev;
}

/// Coefficients c_μ with ρ₁ = Σ_μ c_μ E(μ), from the Gram system G c = b,
/// b_μ = tr(E(μ) ρ₁). Solved through the Gram eigendecomposition.
inline LocalNoiseSpec projector_decomposition(const DensityMatrix& rho1, double scale = 1.0) {
    const PartyStructure& parts = rho1.parts();
    if (!parts.all_qubits()) throw InvalidArgument("projector decomposition needs qubit parties");
    const std::size_t n = parts.parties();
    const std::vector<DensityMatrix> basis = projector_basis(n);
    const EigDecomposition g = hermitian_eig(gram_matrix(basis));
    const std::size_t count = basis.size();
    std::vector<double> b(count);
    for (std::size_t mu = 0; mu < count; ++mu) b[mu] = trace_of_product(basis[mu].matrix(), rho1.matrix()).real();
    std::vector<double> c(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        if (g.eigenvalues[k] < 1e-12) throw NumericalError("projector Gram matrix is singular");
        cplx proj = 0.0;
        for (std::size_t mu = 0; mu < count; ++mu) proj += std::conj(g.eigenvectors(mu, k)) * b[mu];
        for (std::size_t mu = 0; mu < count; ++mu) c[mu] += (g.eigenvectors(mu, k) * proj).real() / g.eigenvalues[k];
    }
    std::map<ProjectorBasisIndex, double> coeffs;
    for (std::size_t mu = 0; mu < count; ++mu) coeffs.emplace(ProjectorBasisIndex::from_ordinal(n, mu), scale * c[mu]);
    return LocalNoiseSpec(std::move(coeffs));
}

}  // namespace upbkit
