#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "upbkit/linalg.hpp"
#include "upbkit/rng.hpp"

using namespace upbkit;

namespace {

ComplexMatrix random_matrix(Rng& rng, std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return m;
}

HermitianMatrix random_hermitian(Rng& rng, std::size_t n) {
    ComplexMatrix m = random_matrix(rng, n);
    ComplexMatrix h = (m + m.adjoint()) * cplx(0.5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) h(j, i) = std::conj(h(i, j));
    return HermitianMatrix(h);
}

ComplexMatrix phi_plus_projector() {
    const double r = 1.0 / std::sqrt(2.0);
    return projector(CVector{r, 0.0, 0.0, r});
}

}  // namespace

TEST(Kron, IdentityAndProjectors) {
    EXPECT_EQ(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
    const std::vector<double> p0{1.0, 0.0};
    const std::vector<double> p00{1.0, 0.0, 0.0, 0.0};
    EXPECT_EQ(kron(ComplexMatrix::diagonal(p0), ComplexMatrix::diagonal(p0)), ComplexMatrix::diagonal(p00));
}

TEST(Kron, FlipFlipMaps00To11) {
    const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
    const CVector out = kron(x, x).apply(basis_vector(4, 0));
    EXPECT_EQ(out, basis_vector(4, 3));
}

TEST(Kron, IndexLayout) {
    Rng rng(3);
    const ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 3);
    const ComplexMatrix k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(k(i * 3 + r, j * 3 + s), a(i, j) * b(r, s));
}

TEST(Kron, Associativity) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 3), c = random_matrix(rng, 2);
        EXPECT_LE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-14);
    }
}

TEST(Hermitian, RejectsNonHermitian) {
    ComplexMatrix m = ComplexMatrix::identity(3);
    m(0, 1) = 0.5;
    EXPECT_THROW(HermitianMatrix{m}, InvalidArgument);
    m(1, 0) = 0.5;
    EXPECT_NO_THROW(HermitianMatrix{m});
}

TEST(Eig, Identity) {
    const EigDecomposition e = hermitian_eig(HermitianMatrix(ComplexMatrix::identity(4)));
    for (double v : e.eigenvalues) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Eig, DiagonalSortsAscending) {
    const std::vector<double> d{3.0, -1.0, 2.0};
    const EigDecomposition e = hermitian_eig(HermitianMatrix(ComplexMatrix::diagonal(d)));
    EXPECT_EQ(e.eigenvalues, (std::vector<double>{-1.0, 2.0, 3.0}));
    EXPECT_EQ(e.vector(0), basis_vector(3, 1));
    EXPECT_EQ(e.vector(1), basis_vector(3, 2));
    EXPECT_EQ(e.vector(2), basis_vector(3, 0));
}

// Hand diagonalization: (|φ+><φ+|)^{T_1} = SWAP/2, eigenvalues +1/2 on the
// symmetric triplet and −1/2 on the singlet.
TEST(Eig, PartialTransposeOfBellProjector) {
    const PartyStructure parts{2, 2};
    const ComplexMatrix pt = partial_transpose(phi_plus_projector(), parts, Bipartition(parts, {0}));
    const ComplexMatrix swap_half{{0.5, 0, 0, 0}, {0, 0, 0.5, 0}, {0, 0.5, 0, 0}, {0, 0, 0, 0.5}};
    EXPECT_LE(max_abs_diff(pt, swap_half), 1e-15);
    const std::vector<double> ev = eigenvalues(HermitianMatrix(pt));
    const std::vector<double> expected{-0.5, 0.5, 0.5, 0.5};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(ev[k], expected[k], 1e-14);
}

TEST(Eig, ResidualOrthonormalityAndReconstruction) {
    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        const HermitianMatrix h = random_hermitian(rng, 8);
        const EigDecomposition e = hermitian_eig(h);
        const double scale = 1.0 + h.matrix().max_abs();
        const ComplexMatrix& v = e.eigenvectors;
        EXPECT_LE(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(8)), 1e-10);
        for (std::size_t k = 0; k < 8; ++k) {
            CVector r = h.matrix().apply(e.vector(k));
            for (std::size_t i = 0; i < 8; ++i) r[i] -= e.eigenvalues[k] * e.vector(k)[i];
            EXPECT_LE(norm(r), 1e-10 * scale);
        }
        const ComplexMatrix rec = v * ComplexMatrix::diagonal(e.eigenvalues) * v.adjoint();
        EXPECT_LE(max_abs_diff(rec, h.matrix()), 1e-9 * scale);
        ASSERT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
    }
}

// Independent route: LAPACK-style tridiagonal QR inside Eigen.
TEST(Eig, AgreesWithEigenSelfAdjointSolver) {
    Rng rng(77);
    for (std::size_t n : {2u, 5u, 8u, 16u, 64u}) {
        const HermitianMatrix h = random_hermitian(rng, n);
        Eigen::MatrixXcd em(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) em(i, j) = h.matrix()(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
        const std::vector<double> ours = eigenvalues(h);
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ours[k], solver.eigenvalues()(k), 1e-10) << "n=" << n;
    }
}

TEST(Eig, DeterministicAndOrthonormalOnDegenerateClusters) {
    Rng rng(5);
    // Spectrum {0,0,0,1,1,2} in a random unitary frame.
    const ComplexMatrix u = random_unitary(rng, 6);
    const std::vector<double> d{0, 0, 0, 1, 1, 2};
    ComplexMatrix m = u * ComplexMatrix::diagonal(d) * u.adjoint();
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) m(j, i) = std::conj(m(i, j));
    const HermitianMatrix h(m);
    const EigDecomposition a = hermitian_eig(h), b = hermitian_eig(h);
    EXPECT_EQ(a.eigenvectors, b.eigenvectors);
    EXPECT_LE(max_abs_diff(a.eigenvectors.adjoint() * a.eigenvectors, ComplexMatrix::identity(6)), 1e-10);
    EXPECT_EQ(kernel(h).size(), 3u);
}

TEST(PartialTranspose, DiagonalIsFixed) {
    const PartyStructure parts{2, 3, 2};
    const std::vector<double> d{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    const ComplexMatrix m = ComplexMatrix::diagonal(d);
    for (const Bipartition& cut : canonical_cuts(parts)) EXPECT_EQ(partial_transpose(m, parts, cut), m);
}

TEST(PartialTranspose, InvolutionAndTrace) {
    Rng rng(99);
    const PartyStructure parts = PartyStructure::qubits(3);
    for (int t = 0; t < 100; ++t) {
        const ComplexMatrix m = random_matrix(rng, 8);
        for (const Bipartition& cut : canonical_cuts(parts)) {
            const ComplexMatrix once = partial_transpose(m, parts, cut);
            EXPECT_EQ(partial_transpose(once, parts, cut), m);
            EXPECT_EQ(once.trace(), m.trace());
        }
    }
}

TEST(PartialTranspose, FullTransposeOfKronFactor) {
    // (A ⊗ B)^{T_A} = A^T ⊗ B
    Rng rng(4);
    const ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 3);
    ComplexMatrix at(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) at(i, j) = a(j, i);
    const PartyStructure parts{2, 3};
    EXPECT_EQ(partial_transpose(kron(a, b), parts, Bipartition(parts, {0})), kron(at, b));
}

TEST(PartialTranspose, DimensionMismatch) {
    const PartyStructure parts{2, 2};
    EXPECT_THROW(partial_transpose(ComplexMatrix::identity(8), parts, Bipartition(parts, {0})), InvalidArgument);
}

TEST(KernelRank, Basics) {
    EXPECT_TRUE(kernel(HermitianMatrix(ComplexMatrix::identity(8)), 1e-10).empty());
    EXPECT_EQ(numerical_rank(HermitianMatrix(ComplexMatrix::identity(8))), 8u);
    const std::vector<double> d{0.0, 0.0, 1.0};
    EXPECT_EQ(kernel(HermitianMatrix(ComplexMatrix::diagonal(d))).size(), 2u);
    EXPECT_THROW(kernel(HermitianMatrix(ComplexMatrix::identity(2)), 0.0), InvalidArgument);
}

TEST(KernelRank, CountsAddUp) {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        // random low-rank PSD matrix
        ComplexMatrix m(8);
        const std::size_t r = 1 + static_cast<std::size_t>(t % 8);
        for (std::size_t k = 0; k < r; ++k) m += projector(random_unit_vector(rng, 8));
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i + 1; j < 8; ++j) m(j, i) = std::conj(m(i, j));
        const HermitianMatrix h(m);
        EXPECT_EQ(kernel(h).size() + numerical_rank(h), 8u);
        EXPECT_EQ(numerical_rank(h), r);
    }
}

TEST(SubspaceDistance, Basics) {
    const std::vector<CVector> s{basis_vector(2, 0)};
    EXPECT_EQ(subspace_distance(s, s), 0.0);
    EXPECT_DOUBLE_EQ(subspace_distance(s, {basis_vector(2, 1)}), 1.0);
    // Same span, different basis.
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<CVector> s1{basis_vector(3, 0), basis_vector(3, 1)};
    const std::vector<CVector> s2{CVector{r, r, 0.0}, CVector{r, -r, 0.0}};
    EXPECT_LE(subspace_distance(s1, s2), 1e-15);
}
