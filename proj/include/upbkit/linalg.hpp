#pragma once

// Dense complex linear algebra for the small operators used throughout the
// toolkit (dimensions up to a few hundred). Everything is value-typed and
// free of global state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "upbkit/errors.hpp"
#include "upbkit/parties.hpp"

namespace upbkit {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr int kMaxJacobiSweeps = 100;

// ---------------------------------------------------------------------------
// Vectors

inline cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
    if (u.size() != v.size()) throw InvalidArgument("inner product of vectors with different sizes");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

inline double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline CVector normalized(CVector v) {
    const double n = norm(v);
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    for (cplx& x : v) x /= n;
    return v;
}

inline CVector conjugated(CVector v) {
    for (cplx& x : v) x = std::conj(x);
    return v;
}

inline CVector kron(std::span<const cplx> a, std::span<const cplx> b) {
    CVector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
    return out;
}

inline CVector basis_vector(std::size_t dim, std::size_t k) {
    CVector e(dim, cplx{0.0, 0.0});
    e.at(k) = 1.0;
    return e;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx{0.0, 0.0}) {
        if (dim == 0) throw InvalidArgument("matrix dimension must be positive");
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : ComplexMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != dim_) throw InvalidArgument("matrix literal must be square");
            std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
            ++i;
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    std::span<const cplx> data() const { return data_; }

    CVector column(std::size_t j) const {
        CVector c(dim_);
        for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& x : data_) x *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same(b);
        const std::size_t n = a.dim_;
        ComplexMatrix c(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    CVector apply(std::span<const cplx> v) const {
        if (v.size() != dim_) throw InvalidArgument("matrix-vector dimension mismatch");
        CVector out(dim_, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& x : data_) m = std::max(m, std::abs(x));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& x : data_) s += std::norm(x);
        return std::sqrt(s);
    }

    bool operator==(const ComplexMatrix& o) const { return dim_ == o.dim_ && data_ == o.data_; }

private:
    void check_same(const ComplexMatrix& o) const {
        if (o.dim_ != dim_) throw InvalidArgument("matrix dimension mismatch");
    }

    std::size_t dim_;
    std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

/// |u><v|
inline ComplexMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
    if (u.size() != v.size()) throw InvalidArgument("outer product of vectors with different sizes");
    ComplexMatrix m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

inline ComplexMatrix projector(std::span<const cplx> v) { return outer(v, v); }

/// (A ⊗ B)[(i·dB + k), (j·dB + l)] = A[i,j]·B[k,l]
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
        }
    return out;
}

/// tr(A·B) without forming the product.
inline cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("matrix dimension mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * b(j, i);
    return s;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

inline double hermiticity_defect(const ComplexMatrix& m) {
    double d = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i; j < m.dim(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
        const double defect = hermiticity_defect(m_);
        if (defect > 1e-12 * (1.0 + m_.max_abs()))
            throw InvalidArgument("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    double trace() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

// ---------------------------------------------------------------------------
// Eigendecomposition

struct EigDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]

    CVector vector(std::size_t k) const { return eigenvectors.column(k); }
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Modified Gram-Schmidt on columns [begin, end) of v, in index order.
inline void orthonormalize_columns(ComplexMatrix& v, std::size_t begin, std::size_t end) {
    const std::size_t n = v.dim();
    for (std::size_t k = begin; k < end; ++k) {
        for (std::size_t j = begin; j < k; ++j) {
            cplx proj{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(v(i, j)) * v(i, k);
            for (std::size_t i = 0; i < n; ++i) v(i, k) -= proj * v(i, j);
        }
        double nk = 0.0;
        for (std::size_t i = 0; i < n; ++i) nk += std::norm(v(i, k));
        nk = std::sqrt(nk);
        for (std::size_t i = 0; i < n; ++i) v(i, k) /= nk;
    }
}

}  // namespace detail

/// Cyclic complex Jacobi. Each rotation first removes the phase of a[p,q]
/// and then applies the real symmetric Jacobi rotation, so the combined 2x2
/// unitary is U = diag(1, e^{-iφ})·R(θ). Converges when the off-diagonal
/// Frobenius norm drops below 1e-14·(1 + ‖H‖_F).
inline EigDecomposition hermitian_eig(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

    const double target = 1e-14 * (1.0 + a.frobenius_norm());
    for (int sweep = 0;; ++sweep) {
        if (detail::off_diagonal_norm(a) < target) break;
        if (sweep == kMaxJacobiSweeps)
            throw NumericalError("Jacobi eigensolver did not converge in " + std::to_string(kMaxJacobiSweeps) +
                                 " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const cplx phase_conj = std::conj(apq) / r;  // e^{-iφ}
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx upp = c, upq = s, uqp = -s * phase_conj, uqq = c * phase_conj;

                for (std::size_t k = 0; k < n; ++k) {  // A <- A U
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- U† A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {  // V <- V U
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * upp + vkq * uqp;
                    v(k, q) = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }

    // Degenerate clusters get re-orthonormalized in index order.
    const double cluster_tol = 1e-10 * (1.0 + h.matrix().max_abs());
    std::size_t begin = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k == n || out.eigenvalues[k] - out.eigenvalues[k - 1] > cluster_tol) {
            if (k - begin > 1) detail::orthonormalize_columns(out.eigenvectors, begin, k);
            begin = k;
        }
    }
    return out;
}

inline std::vector<double> eigenvalues(const HermitianMatrix& h) { return hermitian_eig(h).eigenvalues; }

inline double min_eigenvalue(const HermitianMatrix& h) { return hermitian_eig(h).eigenvalues.front(); }

// ---------------------------------------------------------------------------
// Partial transpose, kernel, rank

/// Transposes the indices of every party in `cut` by permuting composite
/// row/column multi-indices. Exact: applying it twice returns the input.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const PartyStructure& parts, const Bipartition& cut) {
    if (parts.total_dim() != m.dim())
        throw InvalidArgument("partial transpose: party dimensions do not match the matrix");
    if (cut.parties() != parts.parties()) throw InvalidArgument("partial transpose: cut does not match parties");

    std::vector<std::size_t> strides, dims;
    for (std::size_t k : cut.side_a()) {
        strides.push_back(parts.stride(k));
        dims.push_back(parts.local_dim(k));
    }
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t ti = i, tj = j;
            for (std::size_t s = 0; s < strides.size(); ++s) {
                const std::size_t di = (i / strides[s]) % dims[s];
                const std::size_t dj = (j / strides[s]) % dims[s];
                ti = ti - di * strides[s] + dj * strides[s];
                tj = tj - dj * strides[s] + di * strides[s];
            }
            out(ti, tj) = m(i, j);
        }
    }
    return out;
}

inline HermitianMatrix partial_transpose(const HermitianMatrix& h, const PartyStructure& parts,
                                         const Bipartition& cut) {
    return HermitianMatrix(partial_transpose(h.matrix(), parts, cut));
}

/// Eigenvectors whose eigenvalue satisfies |λ| < tol.
inline std::vector<CVector> kernel(const HermitianMatrix& h, double tol = kDefaultRankTol) {
    if (!(tol > 0.0)) throw InvalidArgument("kernel tolerance must be positive");
    const EigDecomposition eig = hermitian_eig(h);
    std::vector<CVector> out;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (std::abs(eig.eigenvalues[k]) < tol) out.push_back(eig.vector(k));
    return out;
}

inline std::size_t numerical_rank(const HermitianMatrix& h, double tol = kDefaultRankTol) {
    if (!(tol > 0.0)) throw InvalidArgument("rank tolerance must be positive");
    const std::vector<double> ev = eigenvalues(h);
    return static_cast<std::size_t>(
        std::count_if(ev.begin(), ev.end(), [tol](double x) { return std::abs(x) >= tol; }));
}

/// Modified Gram-Schmidt; vectors whose residual norm falls below `drop_tol`
/// are treated as dependent and skipped.
inline std::vector<CVector> orthonormalize(const std::vector<CVector>& vs, double drop_tol = 1e-10) {
    std::vector<CVector> out;
    for (const CVector& v : vs) {
        CVector w = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const CVector& u : out) {
                const cplx p = inner(u, w);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= p * u[i];
            }
        }
        const double n = norm(w);
        if (n < drop_tol) continue;
        for (cplx& x : w) x /= n;
        out.push_back(std::move(w));
    }
    return out;
}

/// Orthogonal projector onto span(vs).
inline ComplexMatrix span_projector(const std::vector<CVector>& vs, std::size_t dim) {
    ComplexMatrix p(dim);
    for (const CVector& u : orthonormalize(vs)) {
        if (u.size() != dim) throw InvalidArgument("span projector: vector dimension mismatch");
        p += projector(u);
    }
    return p;
}

/// ‖P₁ − P₂‖_max between the orthogonal projectors onto the two spans.
inline double subspace_distance(const std::vector<CVector>& s1, const std::vector<CVector>& s2) {
    std::size_t dim = 0;
    for (const auto* s : {&s1, &s2})
        for (const CVector& v : *s) {
            if (dim != 0 && v.size() != dim) throw InvalidArgument("subspace distance: dimension mismatch");
            dim = v.size();
        }
    if (dim == 0) return 0.0;
    return max_abs_diff(span_projector(s1, dim), span_projector(s2, dim));
}

}  // namespace upbkit
