#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "upbkit/linalg.hpp"
#include "upbkit/perturbation.hpp"
#include "upbkit/states.hpp"
#include "upbkit/upb.hpp"

namespace upbkit {

inline constexpr double kWitnessSafetyMargin = 1e-6;
inline constexpr double kRadiusDenominatorFloor = 1e-15;

/// Unit-trace Hermitian operator with a cached negative value on the state it
/// was built to detect.
class Witness {
public:
    Witness(HermitianMatrix op, double detected_value) : op_(std::move(op)), detected_value_(detected_value) {
        if (std::abs(op_.trace() - 1.0) > 1e-12) throw InvalidArgument("witness must have unit trace");
        if (!(detected_value_ < 0.0)) throw InvalidArgument("witness must detect its target state (negative value)");
    }

    const HermitianMatrix& op() const { return op_; }
    double detected_value() const { return detected_value_; }
    // c in W ∝ Σ|ψ_i><ψ_i| − c·I; zero for witnesses not built from a UPB
    double shift() const { return shift_; }

private:
    friend Witness build_upb_witness(const UPB&, const UnextendibilityCertificate&);
    HermitianMatrix op_;
    double detected_value_;
    double shift_ = 0.0;
};

inline double evaluate(const Witness& w, const DensityMatrix& rho) {
    if (w.op().dim() != rho.dim()) throw InvalidArgument("witness and state dimensions differ");
    return trace_of_product(w.op().matrix(), rho.matrix()).real();
}

/// W = (Σ|ψ_i><ψ_i| − c·I)/(m − c·D) with c = 1 − max_overlap − margin.
/// For product |φ>, Σ|<ψ_i|φ>|² = 1 − <φ|Q|φ> ≥ 1 − max_overlap, so
/// <φ|W|φ> ≥ 0 while tr(W ρ_UPB) = −c/(m − c·D).
inline Witness build_upb_witness(const UPB& u, const UnextendibilityCertificate& cert) {
    if (!cert.certifies())
        throw CertificationError("cannot build a witness: max product overlap " + std::to_string(cert.max_overlap) +
                                 " is not below 1 - gap");
    const double c = 1.0 - cert.max_overlap - kWitnessSafetyMargin;
    const std::size_t d = u.parts().total_dim();
    const double trace = static_cast<double>(u.size()) - c * static_cast<double>(d);
    if (!(trace > kRadiusDenominatorFloor)) throw NumericalError("UPB witness has non-positive trace before scaling");
    ComplexMatrix w = u.member_projector() - ComplexMatrix::identity(d) * cplx(c);
    w *= cplx(1.0 / trace);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) w(j, i) = std::conj(w(i, j));
    HermitianMatrix op(std::move(w));
    const double value = trace_of_product(op.matrix(), upb_state(u).matrix()).real();
    Witness out(std::move(op), value);
    out.shift_ = c;
    return out;
}

/// Witness for a UPB carrying an attached certificate.
inline Witness build_upb_witness(const UPB& u) {
    if (!u.certificate()) throw CertificationError("UPB has no unextendibility certificate");
    return build_upb_witness(u, *u.certificate());
}

/// Noise scale t* along a normalized nonnegative direction at which `w` stops
/// detecting ρ(t·ε̂): t* = |tr(Wρ)| / Σ_μ ε̂_μ tr(W E(μ)). This is a detection
/// radius, a lower bound on entanglement persistence for this witness only.
/// Returns +infinity when the denominator is ≤ 1e-15.
inline double robustness_radius(const Witness& w, const DensityMatrix& rho, const LocalNoiseSpec& direction) {
    if (!direction.nonnegative()) throw InvalidArgument("robustness direction must have nonnegative coefficients");
    if (std::abs(direction.sum() - 1.0) > 1e-12) throw InvalidArgument("robustness direction must sum to 1");
    const double value = evaluate(w, rho);
    if (!(value < 0.0)) throw InvalidArgument("witness does not detect the state");
    double denom = 0.0;
    for (const auto& [mu, eps] : direction.coefficients()) {
        if (eps == 0.0) continue;
        denom += eps * evaluate(w, projector_E(mu, rho.parts()));
    }
    if (denom <= kRadiusDenominatorFloor) return std::numeric_limits<double>::infinity();
    return std::abs(value) / denom;
}

}  // namespace upbkit
