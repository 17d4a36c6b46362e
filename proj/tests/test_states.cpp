#include <gtest/gtest.h>

#include <cmath>

#include "upbkit/states.hpp"

using namespace upbkit;

namespace {

// Laplace expansion along the first row; independent of the eigensolver.
double determinant(const std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    double det = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<std::vector<double>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != col) row.push_back(m[i][j]);
            minor.push_back(row);
        }
        det += (col % 2 == 0 ? 1.0 : -1.0) * m[0][col] * determinant(minor);
    }
    return det;
}

}  // namespace

TEST(LocalVector, Labels) {
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(local_vector("0"), (CVector{1.0, 0.0}));
    EXPECT_EQ(local_vector("1"), (CVector{0.0, 1.0}));
    EXPECT_EQ(local_vector("phi1"), (CVector{r, r}));
    EXPECT_EQ(local_vector("phi2"), (CVector{r, cplx(0.0, r)}));
    EXPECT_THROW(local_vector("phi3"), InvalidArgument);
}

TEST(ProjectorE, Examples) {
    const DensityMatrix e000 = projector_E(ProjectorBasisIndex::parse("0,0,0"));
    std::vector<double> d(8, 0.0);
    d[0] = 1.0;
    EXPECT_EQ(e000.matrix(), ComplexMatrix::diagonal(d));

    const DensityMatrix plus = projector_E(ProjectorBasisIndex::parse("phi1"));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(plus.matrix()(i, j) - 0.5), 0.0, 1e-15);

    EXPECT_THROW(projector_E(ProjectorBasisIndex::parse("0,1"), PartyStructure{2, 3}), InvalidArgument);
    EXPECT_THROW(projector_E(ProjectorBasisIndex::parse("0,1"), PartyStructure::qubits(3)), InvalidArgument);
}

TEST(ProjectorBasis, ProjectorLawsAtThreeQubits) {
    const std::vector<DensityMatrix> basis = projector_basis(3);
    ASSERT_EQ(basis.size(), 64u);
    for (const DensityMatrix& e : basis) {
        EXPECT_NEAR(e.op().trace(), 1.0, 1e-15);
        EXPECT_LE(max_abs_diff(e.matrix() * e.matrix(), e.matrix()), 1e-15);
        EXPECT_EQ(hermiticity_defect(e.matrix()), 0.0);
    }
}

TEST(ProjectorBasis, LexicographicOrder) {
    EXPECT_EQ(ProjectorBasisIndex::from_ordinal(2, 0).str(), "0,0");
    EXPECT_EQ(ProjectorBasisIndex::from_ordinal(2, 1).str(), "0,1");
    EXPECT_EQ(ProjectorBasisIndex::from_ordinal(2, 4).str(), "1,0");
    EXPECT_EQ(ProjectorBasisIndex::from_ordinal(2, 15).str(), "phi2,phi2");
    EXPECT_LT(ProjectorBasisIndex::parse("0,phi2"), ProjectorBasisIndex::parse("1,0"));
}

TEST(ProjectorBasis, SingleQubitGramDeterminant) {
    const HermitianMatrix g = gram_matrix(projector_basis(1));
    std::vector<std::vector<double>> rows(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) rows[i][j] = g.matrix()(i, j).real();
    // Overlaps |<a|b>|² of {|0>,|1>,|φ1>,|φ2>}: 1 on the diagonal, 0 for <0|1>, 1/2 elsewhere.
    const std::vector<std::vector<double>> hand{{1, 0, .5, .5}, {0, 1, .5, .5}, {.5, .5, 1, .5}, {.5, .5, .5, 1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(rows[i][j], hand[i][j], 1e-15);
    EXPECT_NEAR(determinant(rows), 0.25, 1e-14);
}

// G_n = G_1^{⊗n}, so λ_min(G_n) = λ_min(G_1)^n with λ_min(G_1) = (5 − √17)/4.
TEST(ProjectorBasis, GramNonsingularUpToThreeQubits) {
    const double lmin1 = (5.0 - std::sqrt(17.0)) / 4.0;
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::vector<double> ev = eigenvalues(gram_matrix(projector_basis(n)));
        EXPECT_NEAR(ev.front(), std::pow(lmin1, static_cast<double>(n)), 1e-12) << "n=" << n;
        EXPECT_GT(ev.front(), 1e-6);
    }
}

TEST(ProjectorBasis, SizeGuard) {
    EXPECT_THROW(projector_basis(0), InvalidArgument);
    EXPECT_THROW(projector_basis(7), InvalidArgument);
}

TEST(Expand, Examples) {
    const CVector z{1.0, 0.0}, o{0.0, 1.0};
    EXPECT_EQ(expand(ProductVector({z, z, z})), basis_vector(8, 0));
    EXPECT_EQ(expand(ProductVector({o, o, o})), basis_vector(8, 7));
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(expand(ProductVector({CVector{r, r}, z})), (CVector{r, 0.0, r, 0.0}));
    EXPECT_THROW(ProductVector({CVector{1.0, 1.0}}), InvalidArgument);
}

TEST(MinPtEigenvalue, MaximallyMixedAndBell) {
    const PartyStructure three = PartyStructure::qubits(3);
    for (const Bipartition& cut : canonical_cuts(three))
        EXPECT_NEAR(min_pt_eigenvalue(DensityMatrix::maximally_mixed(three), cut), 0.125, 1e-15);

    const double r = 1.0 / std::sqrt(2.0);
    const PartyStructure two = PartyStructure::qubits(2);
    const DensityMatrix bell = DensityMatrix::pure(CVector{r, 0.0, 0.0, r}, two);
    EXPECT_NEAR(min_pt_eigenvalue(bell, Bipartition(two, {0})), -0.5, 1e-14);
}

TEST(PptAllCuts, CanonicalCutsAndVerdicts) {
    const PartyStructure three = PartyStructure::qubits(3);
    const PptReport mixed = is_ppt_all_cuts(DensityMatrix::maximally_mixed(three));
    ASSERT_EQ(mixed.entries.size(), 3u);
    EXPECT_EQ(mixed.entries[0].cut.side_a(), (std::vector<std::size_t>{0}));
    EXPECT_EQ(mixed.entries[1].cut.side_a(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(mixed.entries[2].cut.side_a(), (std::vector<std::size_t>{0, 2}));
    EXPECT_TRUE(mixed.all_ppt());

    const double r = 1.0 / std::sqrt(2.0);
    CVector ghz(8, 0.0);
    ghz[0] = r;
    ghz[7] = r;
    const PptReport g = is_ppt_all_cuts(DensityMatrix::pure(ghz, three));
    EXPECT_TRUE(g.none_ppt());
    for (const PptEntry& e : g.entries) EXPECT_NEAR(e.min_eigenvalue, -0.5, 1e-14);
}

TEST(PptAllCuts, ComplementSymmetry) {
    Rng rng(17);
    const PartyStructure parts{2, 3, 2};
    for (int t = 0; t < 20; ++t) {
        const DensityMatrix rho = random_density_matrix(rng, parts, 1 + static_cast<std::size_t>(t % 12));
        for (const Bipartition& cut : canonical_cuts(parts))
            EXPECT_NEAR(min_pt_eigenvalue(rho, cut), min_pt_eigenvalue(rho, cut.complement(parts)), 1e-12);
    }
}

TEST(PptAllCuts, SeparableMixturesArePpt) {
    Rng rng(23);
    const PartyStructure parts = PartyStructure::qubits(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<DensityMatrix> terms;
        std::vector<double> w;
        double total = 0.0;
        for (int k = 0; k < 6; ++k) {
            terms.push_back(DensityMatrix::pure(expand(random_product_vector(rng, parts)), parts));
            w.push_back(rng.uniform());
            total += w.back();
        }
        for (double& x : w) x /= total;
        double s = 0.0;
        for (std::size_t k = 0; k + 1 < w.size(); ++k) s += w[k];
        w.back() = 1.0 - s;
        EXPECT_TRUE(is_ppt_all_cuts(mixture(terms, w)).all_ppt());
    }
}

TEST(Bipartition, Validation) {
    const PartyStructure parts = PartyStructure::qubits(3);
    EXPECT_THROW(Bipartition(parts, {}), InvalidArgument);
    EXPECT_THROW(Bipartition(parts, {0, 1, 2}), InvalidArgument);
    EXPECT_THROW(Bipartition(parts, {3}), InvalidArgument);
    EXPECT_EQ(Bipartition(parts, {1}).complement(parts).side_a(), (std::vector<std::size_t>{0, 2}));
}

TEST(DensityMatrix, Validation) {
    const PartyStructure parts = PartyStructure::qubits(1);
    EXPECT_THROW(DensityMatrix(HermitianMatrix(ComplexMatrix::identity(2)), parts), InvalidArgument);
    const std::vector<double> d{1.5, -0.5};
    EXPECT_THROW(DensityMatrix(HermitianMatrix(ComplexMatrix::diagonal(d)), parts), NumericalError);
}
