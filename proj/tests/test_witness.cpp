#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "upbkit/witness.hpp"

using namespace upbkit;

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

struct Fixture {
    UPB u;
    DensityMatrix rho;
    Witness w;
};

Fixture quarter_pi() {
    UPB u = shifts_family({kQuarterPi, kQuarterPi, kQuarterPi});
    certify_unextendible(u, 256, 1);
    const Witness w = build_upb_witness(u);
    return {u, upb_state(u), w};
}

LocalNoiseSpec random_direction(Rng& rng) {
    std::map<ProjectorBasisIndex, double> c;
    double total = 0.0;
    for (std::size_t k = 0; k < 64; ++k) {
        const double x = rng.uniform();
        c.emplace(ProjectorBasisIndex::from_ordinal(3, k), x);
        total += x;
    }
    for (auto& [mu, v] : c) v /= total;
    // absorb rounding in the last coefficient so the sum is 1 to the last bit
    double s = 0.0;
    for (auto it = c.begin(); std::next(it) != c.end(); ++it) s += it->second;
    c.rbegin()->second = 1.0 - s;
    return LocalNoiseSpec(std::move(c));
}

}  // namespace

TEST(UpbWitness, DetectsTheUpbState) {
    const Fixture f = quarter_pi();
    EXPECT_NEAR(f.w.op().trace(), 1.0, 1e-12);
    EXPECT_LT(evaluate(f.w, f.rho), -1e-6);
    EXPECT_DOUBLE_EQ(evaluate(f.w, f.rho), f.w.detected_value());
    // tr(W ρ) = −c/(m − c·D) with c the stored shift
    const double c = f.w.shift();
    EXPECT_NEAR(f.w.detected_value(), -c / (4.0 - 8.0 * c), 1e-14);
}

TEST(UpbWitness, NonnegativeOnProductStates) {
    const Fixture f = quarter_pi();
    Rng rng(50);
    double lo = 1.0;
    for (int t = 0; t < 10000; ++t) {
        const CVector v = expand(random_product_vector(rng, f.u.parts()));
        lo = std::min(lo, inner(v, f.w.op().matrix().apply(v)).real());
    }
    EXPECT_GE(lo, -1e-9);
    // at the seesaw optimum the margin keeps the value strictly positive
    const CVector best = expand(f.u.certificate()->best_product_vector);
    EXPECT_GT(inner(best, f.w.op().matrix().apply(best)).real(), 0.0);
}

TEST(UpbWitness, NonnegativeOnSeparableProjectors) {
    const Fixture f = quarter_pi();
    for (const DensityMatrix& e : projector_basis(3)) EXPECT_GE(evaluate(f.w, e), -1e-12);
    EXPECT_NEAR(evaluate(f.w, DensityMatrix::maximally_mixed(f.u.parts())), 0.125, 1e-14);
}

TEST(UpbWitness, LinearInTheState) {
    const Fixture f = quarter_pi();
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
        const DensityMatrix a = random_density_matrix(rng, f.u.parts(), 3);
        const DensityMatrix b = random_density_matrix(rng, f.u.parts(), 8);
        const double p = rng.uniform();
        EXPECT_NEAR(evaluate(f.w, mixture({a, b}, {p, 1.0 - p})), p * evaluate(f.w, a) + (1 - p) * evaluate(f.w, b),
                    1e-13);
    }
}

TEST(UpbWitness, RequiresCertificate) {
    UPB u = shifts_family_unchecked({0.0, 0.7, 1.1});
    EXPECT_THROW(build_upb_witness(u), CertificationError);
    const UnextendibilityCertificate cert = certify_unextendible(u, 64, 1);
    EXPECT_THROW(build_upb_witness(u, cert), CertificationError);
}

TEST(RobustnessRadius, UniformDirection) {
    const Fixture f = quarter_pi();
    const LocalNoiseSpec dir = LocalNoiseSpec::uniform(3, 1.0 / 64.0);
    const double t = robustness_radius(f.w, f.rho, dir);
    ASSERT_TRUE(std::isfinite(t));
    EXPECT_GT(t, 0.0);
    // Single-qubit sum of the four label projectors is S = 2I + (X + Y)/2, so
    // the uniform mixture is (S/4)^{⊗3}.
    const ComplexMatrix s{{0.5, cplx(0.125, -0.125)}, {cplx(0.125, 0.125), 0.5}};
    const ComplexMatrix avg = kron(kron(s, s), s);
    EXPECT_NEAR(t, std::abs(f.w.detected_value()) / trace_of_product(f.w.op().matrix(), avg).real(), 1e-12);
    EXPECT_LT(evaluate(f.w, perturb_local(f.rho, dir.scaled(0.5 * t))), 0.0);
    EXPECT_GE(evaluate(f.w, perturb_local(f.rho, dir.scaled(2.0 * t))), 0.0);
}

TEST(RobustnessRadius, RandomDirections) {
    const Fixture f = quarter_pi();
    Rng rng(52);
    for (int t = 0; t < 100; ++t) {
        const LocalNoiseSpec dir = random_direction(rng);
        const double r = robustness_radius(f.w, f.rho, dir);
        ASSERT_TRUE(std::isfinite(r));
        for (double s : {0.1, 0.5, 0.9}) EXPECT_LT(evaluate(f.w, perturb_local(f.rho, dir.scaled(s * r))), 0.0);
        EXPECT_GE(evaluate(f.w, perturb_local(f.rho, dir.scaled(2.0 * r))), 0.0);
    }
}

// Two qubits, W = SWAP/2 detects the singlet (value −1/2) and has
// tr(W |01><01|) = 0, so noise along E(0,1) never undoes the detection.
TEST(RobustnessRadius, ZeroDenominatorIsInfinite) {
    const ComplexMatrix swap_half{{0.5, 0, 0, 0}, {0, 0, 0.5, 0}, {0, 0.5, 0, 0}, {0, 0, 0, 0.5}};
    const double r = 1.0 / std::sqrt(2.0);
    const DensityMatrix singlet = DensityMatrix::pure(CVector{0.0, r, -r, 0.0}, PartyStructure::qubits(2));
    const Witness w(HermitianMatrix(swap_half), -0.5);
    EXPECT_NEAR(evaluate(w, singlet), -0.5, 1e-15);
    const LocalNoiseSpec dir({{ProjectorBasisIndex::parse("0,1"), 1.0}});
    EXPECT_TRUE(std::isinf(robustness_radius(w, singlet, dir)));
    EXPECT_LT(evaluate(w, perturb_local(singlet, dir.scaled(1.0))), 0.0);
}

TEST(RobustnessRadius, RejectsBadDirections) {
    const Fixture f = quarter_pi();
    EXPECT_THROW(robustness_radius(f.w, f.rho, LocalNoiseSpec::uniform(3, 1.0 / 32.0)), InvalidArgument);
    const LocalNoiseSpec negative({{ProjectorBasisIndex::parse("0,0,0"), 1.0},
                                   {ProjectorBasisIndex::parse("0,1,0"), 0.5},
                                   {ProjectorBasisIndex::parse("1,1,1"), -0.5}});
    EXPECT_THROW(robustness_radius(f.w, f.rho, negative), InvalidArgument);
    const LocalNoiseSpec single({{ProjectorBasisIndex::parse("0,0,0"), 1.0}});
    EXPECT_NO_THROW(robustness_radius(f.w, f.rho, single));
}
