#pragma once

#include "bundleflow/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace bundleflow {

/// Topological type (r, d) of a bundle. Rank is always >= 1.
struct RankDegree {
    long long rank = 1;
    long long degree = 0;

    RankDegree() = default;
    RankDegree(long long r, long long d) : rank(r), degree(d) {
        if (r < 1)
            throw std::invalid_argument("RankDegree: rank must be >= 1");
    }

    friend bool operator==(const RankDegree&, const RankDegree&) = default;
};

/// mu = d / r, in lowest terms.
inline Rational slope(const RankDegree& rd) {
    return make_rational(rd.degree, rd.rank);
}

/// (r, d) of the dual bundle: deg(E*) = -deg(E).
inline RankDegree dual_rd(const RankDegree& rd) {
    return {rd.rank, -rd.degree};
}

/// (r, d) of a tensor product: deg(E1 (x) E2) = d1 r2 + r1 d2, so slopes add.
inline RankDegree tensor_rd(const RankDegree& a, const RankDegree& b) {
    return {a.rank * b.rank, a.degree * b.rank + a.rank * b.degree};
}

/// (r, d) of Hom(E1, E2) = E1* (x) E2; slope(Hom) = mu(E2) - mu(E1).
inline RankDegree hom_rd(const RankDegree& a, const RankDegree& b) {
    return tensor_rd(dual_rd(a), b);
}

/// A declared-stable summand. The label stands for an isomorphism class:
/// two atoms are the same summand iff both label and (r, d) agree.
struct StableAtom {
    RankDegree rd;
    std::string label;

    StableAtom() = default;
    StableAtom(RankDegree rd_, std::string label_) : rd(rd_), label(std::move(label_)) {}
    StableAtom(long long r, long long d, std::string label_)
        : rd(r, d), label(std::move(label_)) {}

    Rational slope() const { return bundleflow::slope(rd); }

    friend bool operator==(const StableAtom&, const StableAtom&) = default;
};

// Canonical atom order: by label first (Jordan-Hoelder steps are taken in
// label order), then by (rank, degree).
inline bool atom_less(const StableAtom& a, const StableAtom& b) {
    return std::tie(a.label, a.rd.rank, a.rd.degree) <
           std::tie(b.label, b.rd.rank, b.rd.degree);
}

/// A poly-stable/graded bundle: a non-empty multiset of stable atoms, stored
/// sorted so that multiset equality is plain vector equality.
class BundleSum {
public:
    explicit BundleSum(std::vector<StableAtom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty())
            throw std::invalid_argument("BundleSum: atom multiset must be non-empty");
        std::sort(atoms_.begin(), atoms_.end(), atom_less);
    }

    BundleSum(std::initializer_list<StableAtom> atoms)
        : BundleSum(std::vector<StableAtom>(atoms)) {}

    const std::vector<StableAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    long long rank() const {
        long long r = 0;
        for (const auto& a : atoms_) r += a.rd.rank;
        return r;
    }

    long long degree() const {
        long long d = 0;
        for (const auto& a : atoms_) d += a.rd.degree;
        return d;
    }

    RankDegree rd() const { return {rank(), degree()}; }

    /// True when this is a sub-multiset of `other`.
    bool sub_multiset_of(const BundleSum& other) const {
        return std::includes(other.atoms_.begin(), other.atoms_.end(),
                             atoms_.begin(), atoms_.end(), atom_less);
    }

    /// Complementary multiset (the quotient in the split model). Throws if
    /// `sub` is not contained in this sum or exhausts it.
    BundleSum minus(const BundleSum& sub) const {
        std::vector<StableAtom> rest;
        auto it = sub.atoms_.begin();
        for (const auto& a : atoms_) {
            if (it != sub.atoms_.end() && *it == a)
                ++it;
            else
                rest.push_back(a);
        }
        if (it != sub.atoms_.end())
            throw std::invalid_argument("BundleSum::minus: not a sub-multiset");
        return BundleSum(std::move(rest));
    }

    /// Tensor by a line bundle of degree m: every atom (r, d) -> (r, d + m r).
    BundleSum twist(long long m) const {
        std::vector<StableAtom> out = atoms_;
        for (auto& a : out) a.rd.degree += m * a.rd.rank;
        return BundleSum(std::move(out));
    }

    friend bool operator==(const BundleSum&, const BundleSum&) = default;

private:
    std::vector<StableAtom> atoms_;
};

inline Rational slope(const BundleSum& b) {
    return make_rational(b.degree(), b.rank());
}

inline Rational slope(const StableAtom& a) { return a.slope(); }

/// Semi-stability in the atom model: every atom slope equals the total slope
/// (equivalently, no sub-sum of summands destabilizes).
inline bool is_semistable(const BundleSum& b) {
    const Rational mu = slope(b);
    for (const auto& a : b.atoms())
        if (a.slope() != mu) return false;
    return true;
}

/// Stable bundles are indecomposable: exactly one atom.
inline bool is_stable(const BundleSum& b) {
    return b.size() == 1;
}

/// dim of the moduli variety of semi-stable bundles: r^2 (g - 1) + 1.
/// The theorem requires genus g >= 2.
inline long long moduli_dimension(long long r, long long g) {
    if (r < 1)
        throw std::invalid_argument("moduli_dimension: rank must be >= 1");
    if (g < 2)
        throw std::invalid_argument("moduli_dimension: genus must be >= 2");
    return r * r * (g - 1) + 1;
}

} // namespace bundleflow
