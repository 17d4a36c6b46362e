#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "upbkit/linalg.hpp"
#include "upbkit/parties.hpp"
#include "upbkit/rng.hpp"

namespace upbkit {

inline constexpr double kPptTol = 1e-9;

// ---------------------------------------------------------------------------
// Product vectors

class ProductVector {
public:
    explicit ProductVector(std::vector<CVector> locals) : locals_(std::move(locals)) {
        if (locals_.empty()) throw InvalidArgument("product vector needs at least one party");
        for (const CVector& v : locals_) {
            if (v.empty()) throw InvalidArgument("local vector must be nonempty");
            if (std::abs(norm(v) - 1.0) > 1e-12) throw InvalidArgument("local vector is not normalized");
        }
    }

    /// Normalizes each local vector first.
    static ProductVector from_unnormalized(std::vector<CVector> locals) {
        for (CVector& v : locals) v = normalized(std::move(v));
        return ProductVector(std::move(locals));
    }

    std::size_t parties() const { return locals_.size(); }
    const CVector& local(std::size_t k) const { return locals_.at(k); }
    const std::vector<CVector>& locals() const { return locals_; }

    /// Conforms to `parts`?
    bool matches(const PartyStructure& parts) const {
        if (parts.parties() != locals_.size()) return false;
        for (std::size_t k = 0; k < locals_.size(); ++k)
            if (locals_[k].size() != parts.local_dim(k)) return false;
        return true;
    }

private:
    std::vector<CVector> locals_;
};

/// Full tensor-product vector.
inline CVector expand(const ProductVector& v) {
    CVector out = v.local(0);
    for (std::size_t k = 1; k < v.parties(); ++k) out = kron(out, v.local(k));
    return out;
}

inline ProductVector random_product_vector(Rng& rng, const PartyStructure& parts) {
    std::vector<CVector> locals;
    for (std::size_t d : parts.local_dims()) locals.push_back(random_unit_vector(rng, d));
    return ProductVector(std::move(locals));
}

// ---------------------------------------------------------------------------
// Density matrices

class DensityMatrix {
public:
    /// Validates unit trace (1e-12) and min eigenvalue >= -psd_tol.
    DensityMatrix(HermitianMatrix op, PartyStructure parts, double psd_tol = 1e-10)
        : op_(std::move(op)), parts_(std::move(parts)) {
        check_shape_and_trace();
        const double lo = min_eigenvalue(op_);
        if (lo < -psd_tol) throw NumericalError("density matrix has negative eigenvalue " + std::to_string(lo));
    }

    /// |v><v| for a unit vector v; positivity holds by construction.
    static DensityMatrix pure(std::span<const cplx> v, PartyStructure parts) {
        if (std::abs(norm(v) - 1.0) > 1e-12) throw InvalidArgument("pure state vector is not normalized");
        return DensityMatrix(HermitianMatrix(projector(v)), std::move(parts), Unchecked{});
    }

    static DensityMatrix maximally_mixed(PartyStructure parts) {
        const std::size_t d = parts.total_dim();
        ComplexMatrix m = ComplexMatrix::identity(d) * cplx(1.0 / static_cast<double>(d));
        return DensityMatrix(HermitianMatrix(std::move(m)), std::move(parts), Unchecked{});
    }

    const HermitianMatrix& op() const { return op_; }
    const ComplexMatrix& matrix() const { return op_.matrix(); }
    const PartyStructure& parts() const { return parts_; }
    std::size_t dim() const { return op_.dim(); }

private:
    struct Unchecked {};
    DensityMatrix(HermitianMatrix op, PartyStructure parts, Unchecked) : op_(std::move(op)), parts_(std::move(parts)) {
        check_shape_and_trace();
    }

    void check_shape_and_trace() const {
        if (parts_.total_dim() != op_.dim()) throw InvalidArgument("density matrix does not match party structure");
        if (std::abs(op_.matrix().trace() - cplx(1.0)) > 1e-12)
            throw InvalidArgument("density matrix trace is not 1");
    }

    HermitianMatrix op_;
    PartyStructure parts_;
};

/// Convex combination Σ w_k ρ_k (weights must sum to 1).
inline DensityMatrix mixture(const std::vector<DensityMatrix>& states, const std::vector<double>& weights) {
    if (states.empty() || states.size() != weights.size()) throw InvalidArgument("mixture: bad weights");
    ComplexMatrix sum(states.front().dim());
    double total = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (weights[k] < 0.0) throw InvalidArgument("mixture weights must be nonnegative");
        if (!(states[k].parts() == states.front().parts())) throw InvalidArgument("mixture: party mismatch");
        sum += states[k].matrix() * cplx(weights[k]);
        total += weights[k];
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
    return DensityMatrix(HermitianMatrix(std::move(sum)), states.front().parts());
}

/// Random state G·G†/tr(G·G†) with G a D×rank complex Ginibre matrix.
inline DensityMatrix random_density_matrix(Rng& rng, const PartyStructure& parts, std::size_t rank) {
    const std::size_t d = parts.total_dim();
    if (rank == 0 || rank > d) throw InvalidArgument("random state rank must be in [1, D]");
    ComplexMatrix m(d);
    for (std::size_t r = 0; r < rank; ++r) {
        CVector g(d);
        for (cplx& x : g) x = rng.complex_normal();
        m += projector(g);
    }
    m *= cplx(1.0 / m.trace().real());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) m(j, i) = std::conj(m(i, j));
    return DensityMatrix(HermitianMatrix(std::move(m)), parts);
}

// ---------------------------------------------------------------------------
// Separable projector basis over qubits

enum class ProjectorLabel { Zero = 0, One = 1, Phi1 = 2, Phi2 = 3 };

inline constexpr std::array<ProjectorLabel, 4> kProjectorLabels = {ProjectorLabel::Zero, ProjectorLabel::One,
                                                                   ProjectorLabel::Phi1, ProjectorLabel::Phi2};

inline std::string_view label_symbol(ProjectorLabel l) {
    switch (l) {
        case ProjectorLabel::Zero: return "0";
        case ProjectorLabel::One: return "1";
        case ProjectorLabel::Phi1: return "phi1";
        case ProjectorLabel::Phi2: return "phi2";
    }
    return "?";
}

inline ProjectorLabel parse_label(std::string_view s) {
    if (s == "0") return ProjectorLabel::Zero;
    if (s == "1") return ProjectorLabel::One;
    if (s == "phi1") return ProjectorLabel::Phi1;
    if (s == "phi2") return ProjectorLabel::Phi2;
    throw InvalidArgument("unknown projector label '" + std::string(s) + "'");
}

/// |0>, |1>, (|0>+|1>)/√2, (|0>+i|1>)/√2
inline CVector local_vector(ProjectorLabel l) {
    const double r = 1.0 / std::numbers::sqrt2;
    switch (l) {
        case ProjectorLabel::Zero: return {1.0, 0.0};
        case ProjectorLabel::One: return {0.0, 1.0};
        case ProjectorLabel::Phi1: return {r, r};
        case ProjectorLabel::Phi2: return {r, cplx(0.0, r)};
    }
    throw InvalidArgument("unknown projector label");
}

inline CVector local_vector(std::string_view symbol) { return local_vector(parse_label(symbol)); }

/// μ = (j_1 … j_n). Ordered lexicographically with 0 < 1 < phi1 < phi2.
class ProjectorBasisIndex {
public:
    explicit ProjectorBasisIndex(std::vector<ProjectorLabel> labels) : labels_(std::move(labels)) {
        if (labels_.empty()) throw InvalidArgument("projector index needs at least one label");
    }

    /// Comma-separated symbols, e.g. "0,phi1,1".
    static ProjectorBasisIndex parse(std::string_view text) {
        std::vector<ProjectorLabel> labels;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t comma = text.find(',', start);
            const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
            labels.push_back(parse_label(text.substr(start, end - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return ProjectorBasisIndex(std::move(labels));
    }

    /// The index at lexicographic position `k` among the 4^n indices.
    static ProjectorBasisIndex from_ordinal(std::size_t n, std::size_t k) {
        std::vector<ProjectorLabel> labels(n);
        for (std::size_t q = n; q-- > 0;) {
            labels[q] = kProjectorLabels[k % 4];
            k /= 4;
        }
        return ProjectorBasisIndex(std::move(labels));
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<ProjectorLabel>& labels() const { return labels_; }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (i) s += ",";
            s += label_symbol(labels_[i]);
        }
        return s;
    }

    ProductVector product_vector() const {
        std::vector<CVector> locals;
        for (ProjectorLabel l : labels_) locals.push_back(local_vector(l));
        return ProductVector(std::move(locals));
    }

    auto operator<=>(const ProjectorBasisIndex&) const = default;

private:
    std::vector<ProjectorLabel> labels_;
};

inline constexpr std::size_t kMaxProjectorBasisQubits = 6;

/// E(μ) = |j_1 … j_n><j_1 … j_n| on n qubits.
inline DensityMatrix projector_E(const ProjectorBasisIndex& mu, const PartyStructure& parts) {
    if (!parts.all_qubits()) throw InvalidArgument("projector basis is defined for qubit parties only");
    if (parts.parties() != mu.size()) throw InvalidArgument("projector index length does not match party count");
    return DensityMatrix::pure(expand(mu.product_vector()), parts);
}

inline DensityMatrix projector_E(const ProjectorBasisIndex& mu) {
    return projector_E(mu, PartyStructure::qubits(mu.size()));
}

/// All 4^n projectors E(μ) in lexicographic label order.
inline std::vector<DensityMatrix> projector_basis(std::size_t n) {
    if (n < 1 || n > kMaxProjectorBasisQubits)
        throw InvalidArgument("projector basis size guard: n must be in [1, " +
                              std::to_string(kMaxProjectorBasisQubits) + "]");
    const PartyStructure parts = PartyStructure::qubits(n);
    const std::size_t count = std::size_t{1} << (2 * n);
    std::vector<DensityMatrix> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(projector_E(ProjectorBasisIndex::from_ordinal(n, k), parts));
    return out;
}

/// G[μ,ν] = tr(E(μ)E(ν)) as a (real symmetric) Hermitian matrix.
inline HermitianMatrix gram_matrix(const std::vector<DensityMatrix>& basis) {
    ComplexMatrix g(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const double v = trace_of_product(basis[i].matrix(), basis[j].matrix()).real();
            g(i, j) = v;
            g(j, i) = v;
        }
    return HermitianMatrix(std::move(g));
}

// ---------------------------------------------------------------------------
// PPT tests

inline double min_pt_eigenvalue(const DensityMatrix& rho, const Bipartition& cut) {
    return min_eigenvalue(partial_transpose(rho.op(), rho.parts(), cut));
}

struct PptEntry {
    Bipartition cut;
    bool ppt;
    double min_eigenvalue;
};

struct PptReport {
    std::vector<PptEntry> entries;

    bool all_ppt() const {
        return std::all_of(entries.begin(), entries.end(), [](const PptEntry& e) { return e.ppt; });
    }
    bool none_ppt() const {
        return std::none_of(entries.begin(), entries.end(), [](const PptEntry& e) { return e.ppt; });
    }
    std::size_t ppt_count() const {
        return static_cast<std::size_t>(
            std::count_if(entries.begin(), entries.end(), [](const PptEntry& e) { return e.ppt; }));
    }
    double min_eigenvalue() const {
        double m = std::numeric_limits<double>::infinity();
        for (const PptEntry& e : entries) m = std::min(m, e.min_eigenvalue);
        return m;
    }
};

/// PPT verdict for every canonical cut (one representative per complement pair).
inline PptReport is_ppt_all_cuts(const DensityMatrix& rho, double ppt_tol = kPptTol) {
    PptReport report;
    for (const Bipartition& cut : canonical_cuts(rho.parts())) {
        const double lo = min_pt_eigenvalue(rho, cut);
        report.entries.push_back({cut, lo >= -ppt_tol, lo});
    }
    return report;
}

}  // namespace upbkit
