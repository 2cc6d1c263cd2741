#pragma once

#include "bundleflow/bundle.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bundleflow {

/// An increasing chain E_1 c ... c E_l = total of sub-sums. The struct itself
/// does not enforce nesting; validate_filtration reports malformed chains.
struct Filtration {
    std::vector<BundleSum> steps;
    BundleSum total;

    std::size_t length() const { return steps.size(); }

    /// (rank, degree) of the i-th quotient E_i / E_{i-1}, with E_0 = 0.
    RankDegree quotient_rd(std::size_t i) const {
        long long r = steps[i].rank(), d = steps[i].degree();
        if (i > 0) {
            r -= steps[i - 1].rank();
            d -= steps[i - 1].degree();
        }
        return {r, d};
    }

    /// The i-th quotient as a multiset (complement in the split model).
    BundleSum quotient(std::size_t i) const {
        if (i == 0) return steps[0];
        return steps[i].minus(steps[i - 1]);
    }
};

/// The slope vector (mu_1 ... repeated r_1 times, ...), weakly decreasing,
/// of length rank(total).
struct HNType {
    std::vector<Rational> mu_vec;

    friend bool operator==(const HNType&, const HNType&) = default;
};

/// Lattice polygon from (0,0) to (r, d) whose segment slopes are the HN
/// quotient slopes; convex since those decrease strictly.
struct ShatzPolygon {
    std::vector<std::pair<long long, long long>> vertices;

    friend bool operator==(const ShatzPolygon&, const ShatzPolygon&) = default;
};

/// Largest slope of a sub-sum; in the atom model this is the maximal atom
/// slope (a mixed sub-sum containing any lower-slope atom has strictly
/// smaller slope). The exhaustive-search oracle in the tests enforces this.
inline Rational mu_max(const BundleSum& b) {
    Rational best = b.atoms().front().slope();
    for (const auto& a : b.atoms()) {
        Rational mu = a.slope();
        if (mu > best) best = mu;
    }
    return best;
}

/// The destabilising bundle: all atoms of maximal slope, the unique
/// maximal-rank sub-sum among maximal-slope sub-sums. A semi-stable bundle
/// is its own destabilising bundle.
inline BundleSum destabilizer(const BundleSum& b) {
    const Rational mu = mu_max(b);
    std::vector<StableAtom> top;
    for (const auto& a : b.atoms())
        if (a.slope() == mu) top.push_back(a);
    return BundleSum(std::move(top));
}

/// The Harder-Narasimhan filtration: cumulative unions of the slope groups
/// in strictly decreasing slope order. Deterministic, and invariant under
/// permutation of the input atom list (atoms are stored canonically sorted).
inline Filtration hn_filtration(const BundleSum& b) {
    std::map<Rational, std::vector<StableAtom>, std::greater<Rational>> groups;
    for (const auto& a : b.atoms())
        groups[a.slope()].push_back(a);

    Filtration f{{}, b};
    std::vector<StableAtom> cumulative;
    for (auto& [mu, atoms] : groups) {
        cumulative.insert(cumulative.end(), atoms.begin(), atoms.end());
        f.steps.emplace_back(cumulative);
    }
    return f;
}

inline HNType hn_type(const BundleSum& b) {
    Filtration f = hn_filtration(b);
    HNType t;
    for (std::size_t i = 0; i < f.length(); ++i) {
        RankDegree q = f.quotient_rd(i);
        Rational mu = slope(q);
        for (long long k = 0; k < q.rank; ++k) t.mu_vec.push_back(mu);
    }
    return t;
}

inline ShatzPolygon shatz_polygon(const BundleSum& b) {
    Filtration f = hn_filtration(b);
    ShatzPolygon p;
    p.vertices.emplace_back(0, 0);
    long long r = 0, d = 0;
    for (std::size_t i = 0; i < f.length(); ++i) {
        RankDegree q = f.quotient_rd(i);
        r += q.rank;
        d += q.degree;
        p.vertices.emplace_back(r, d);
    }
    return p;
}

/// A Jordan-Hoelder filtration of a semi-stable bundle: one atom per step,
/// added in canonical (label-sorted) order, so every quotient is a single
/// stable atom of slope mu(b). Rejects non-semi-stable input.
inline Filtration jh_filtration(const BundleSum& b) {
    if (!is_semistable(b))
        throw std::invalid_argument("jh_filtration: bundle is not semi-stable");
    Filtration f{{}, b};
    std::vector<StableAtom> cumulative;
    for (const auto& a : b.atoms()) {
        cumulative.push_back(a);
        f.steps.emplace_back(cumulative);
    }
    return f;
}

/// Multiset of JH quotients. Independent of the filtration order; in the
/// atom model it equals the bundle itself.
inline BundleSum graded(const BundleSum& b) {
    Filtration f = jh_filtration(b);
    std::vector<StableAtom> quots;
    for (std::size_t i = 0; i < f.length(); ++i) {
        BundleSum q = f.quotient(i);
        quots.insert(quots.end(), q.atoms().begin(), q.atoms().end());
    }
    return BundleSum(std::move(quots));
}

/// S-equivalence: equality of graded objects. Both inputs must be
/// semi-stable. Implies equal (rank, degree).
inline bool s_equivalent(const BundleSum& b1, const BundleSum& b2) {
    if (!is_semistable(b1) || !is_semistable(b2))
        throw std::invalid_argument("s_equivalent: inputs must be semi-stable");
    return graded(b1) == graded(b2);
}

/// Sufficient condition for Hom(src, dst) = 0: src semi-stable with
/// mu(src) > mu_max(dst).
inline bool hom_must_vanish(const BundleSum& src, const BundleSum& dst) {
    return is_semistable(src) && slope(src) > mu_max(dst);
}

enum class FiltrationKind { HN, JH };

struct ValidationResult {
    bool ok = true;
    std::string diagnostic;
};

/// Checks a chain against the HN conditions (semi-stable quotients, strictly
/// decreasing quotient slopes) or the JH conditions (single stable-atom
/// quotients of slope equal to mu(total)). Malformed chains (non-nested or
/// not ending at the total) are reported distinctly from condition failures;
/// on failure the first violated clause is named.
inline ValidationResult validate_filtration(const Filtration& f, FiltrationKind kind) {
    if (f.steps.empty())
        return {false, "malformed chain: no steps"};
    for (std::size_t i = 1; i < f.steps.size(); ++i) {
        if (!f.steps[i - 1].sub_multiset_of(f.steps[i]))
            return {false, "malformed chain: steps not nested"};
        if (f.steps[i - 1] == f.steps[i])
            return {false, "malformed chain: inclusion not strict"};
    }
    if (f.steps.back() != f.total)
        return {false, "malformed chain: last step differs from total"};

    if (kind == FiltrationKind::HN) {
        for (std::size_t i = 0; i < f.length(); ++i)
            if (!is_semistable(f.quotient(i)))
                return {false, "quotient not semi-stable"};
        for (std::size_t i = 1; i < f.length(); ++i)
            if (!(slope(f.quotient(i - 1)) > slope(f.quotient(i))))
                return {false, "slopes not decreasing"};
    } else {
        const Rational mu = slope(f.total);
        for (std::size_t i = 0; i < f.length(); ++i) {
            BundleSum q = f.quotient(i);
            if (!is_stable(q))
                return {false, "quotient not a single stable atom"};
            if (slope(q) != mu)
                return {false, "quotient slope != total slope"};
        }
    }
    return {};
}

} // namespace bundleflow
