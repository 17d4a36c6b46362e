#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "upbkit/errors.hpp"

namespace upbkit {

/// Local dimensions of a multipartite system. Party 0 is the most significant
/// digit of the composite index, matching kron(A0, kron(A1, ...)).
class PartyStructure {
public:
    PartyStructure(std::initializer_list<std::size_t> dims) : PartyStructure(std::vector<std::size_t>(dims)) {}

    explicit PartyStructure(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw InvalidArgument("party structure needs at least one party");
        total_ = 1;
        for (std::size_t d : dims_) {
            if (d == 0) throw InvalidArgument("local dimension must be positive");
            total_ *= d;
        }
        if (total_ < 2) throw InvalidArgument("total dimension must be at least 2");
    }

    static PartyStructure qubits(std::size_t n) { return PartyStructure(std::vector<std::size_t>(n, 2)); }

    std::size_t parties() const { return dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t local_dim(std::size_t k) const { return dims_.at(k); }
    const std::vector<std::size_t>& local_dims() const { return dims_; }

    bool all_qubits() const {
        return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 2; });
    }

    // Stride of party k in the composite index.
    std::size_t stride(std::size_t k) const {
        std::size_t s = 1;
        for (std::size_t j = k + 1; j < dims_.size(); ++j) s *= dims_[j];
        return s;
    }

    bool operator==(const PartyStructure& other) const { return dims_ == other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

/// A cut of the parties into side A (stored) and its complement.
class Bipartition {
public:
    Bipartition(const PartyStructure& parts, std::vector<std::size_t> side_a) : side_a_(std::move(side_a)) {
        std::sort(side_a_.begin(), side_a_.end());
        side_a_.erase(std::unique(side_a_.begin(), side_a_.end()), side_a_.end());
        if (side_a_.empty()) throw InvalidArgument("bipartition side must be nonempty");
        if (side_a_.back() >= parts.parties()) throw InvalidArgument("bipartition references a missing party");
        if (side_a_.size() == parts.parties()) throw InvalidArgument("bipartition side must be a proper subset");
        n_ = parts.parties();
    }

    const std::vector<std::size_t>& side_a() const { return side_a_; }
    std::size_t parties() const { return n_; }

    bool contains(std::size_t k) const { return std::binary_search(side_a_.begin(), side_a_.end(), k); }

    Bipartition complement(const PartyStructure& parts) const {
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < n_; ++k)
            if (!contains(k)) rest.push_back(k);
        return Bipartition(parts, std::move(rest));
    }

    std::string label() const {
        std::string s = "{";
        for (std::size_t i = 0; i < side_a_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(side_a_[i]);
        }
        return s + "}";
    }

    bool operator==(const Bipartition& other) const { return side_a_ == other.side_a_ && n_ == other.n_; }

private:
    std::vector<std::size_t> side_a_;
    std::size_t n_ = 0;
};

/// Canonical cuts up to complement symmetry: every proper subset containing
/// party 0, in increasing bitmask order. Three parties give {0}, {0,1}, {0,2}.
inline std::vector<Bipartition> canonical_cuts(const PartyStructure& parts) {
    const std::size_t n = parts.parties();
    if (n < 2) throw InvalidArgument("a bipartition needs at least two parties");
    if (n > 20) throw InvalidArgument("too many parties to enumerate cuts");
    std::vector<Bipartition> cuts;
    const std::size_t full = (std::size_t{1} << n) - 1;
    for (std::size_t mask = 1; mask < full; mask += 2) {
        std::vector<std::size_t> side;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::size_t{1} << k)) side.push_back(k);
        cuts.emplace_back(parts, std::move(side));
    }
    return cuts;
}

}  // namespace upbkit
