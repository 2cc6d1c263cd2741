#include <catch2/catch_amalgamated.hpp>

#include "bundleflow/bundle.hpp"
#include "oracles.hpp"

#include <numeric>

using namespace bundleflow;

namespace {
StableAtom line(long long d, std::string label = "O") { return {1, d, std::move(label)}; }
}

TEST_CASE("rational normalization and order") {
    Rational q = make_rational(6, 4);
    CHECK(rational_num(q) == 3);
    CHECK(rational_den(q) == 2);
    CHECK(make_rational(-6, 4) == make_rational(-3, 2));
    CHECK(make_rational(2, -4) == make_rational(-1, 2));
    CHECK(rational_den(make_rational(2, -4)) == 2);
    CHECK(make_rational(1, 3) < make_rational(1, 2));
    CHECK(make_rational(-5, 2) < make_rational(-2, 1));
    CHECK(to_string(make_rational(3, 2)) == "3/2");
    CHECK(to_string(make_rational(4, 2)) == "2");
}

TEST_CASE("slope of atoms and sums") {
    CHECK(slope(StableAtom(2, 3, "E")) == make_rational(3, 2));
    CHECK(slope(StableAtom(1, 0, "O")) == Rational(0));
    BundleSum b{line(2), line(-1)};
    CHECK(slope(b) == make_rational(1, 2));
    CHECK(b.rank() == 2);
    CHECK(b.degree() == 1);
}

TEST_CASE("type invariants are enforced") {
    CHECK_THROWS_AS(RankDegree(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(RankDegree(-2, 0), std::invalid_argument);
    CHECK_THROWS_AS(BundleSum(std::vector<StableAtom>{}), std::invalid_argument);
}

TEST_CASE("dual rank-degree") {
    CHECK(dual_rd({2, 3}) == RankDegree(2, -3));
    CHECK(dual_rd({1, 0}) == RankDegree(1, 0));
    CHECK(dual_rd({5, -4}) == RankDegree(5, 4));
}

TEST_CASE("tensor rank-degree") {
    CHECK(tensor_rd({2, 1}, {3, 2}) == RankDegree(6, 7));
    CHECK(tensor_rd({7, -3}, {1, 0}) == RankDegree(7, -3));
    CHECK(tensor_rd({1, 1}, {1, -1}) == RankDegree(1, 0));
}

TEST_CASE("hom rank-degree") {
    CHECK(hom_rd({2, 1}, {3, 2}) == RankDegree(6, 1));
    CHECK(hom_rd({3, 2}, {3, 2}) == RankDegree(9, 0));
    CHECK(hom_rd({1, 2}, {1, 5}) == RankDegree(1, 3));
}

TEST_CASE("slope identities for dual, tensor, hom") {
    for (long long ra = 1; ra <= 4; ++ra)
        for (long long da = -3; da <= 3; ++da)
            for (long long rb = 1; rb <= 4; ++rb)
                for (long long db = -3; db <= 3; ++db) {
                    RankDegree a{ra, da}, b{rb, db};
                    CHECK(slope(tensor_rd(a, b)) == slope(a) + slope(b));
                    CHECK(slope(dual_rd(a)) == -slope(a));
                    CHECK(slope(hom_rd(a, b)) == slope(b) - slope(a));
                }
}

// For an extension 0 -> E' -> E -> E'' -> 0 the three comparisons
// mu' vs mu, mu' vs mu'', mu vs mu'' always agree in sign.
TEST_CASE("extension slope trichotomy, exhaustive") {
    auto sign_of = [](const Rational& x, const Rational& y) {
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    };
    for (long long r1 = 1; r1 <= 5; ++r1)
        for (long long d1 = -10; d1 <= 10; ++d1)
            for (long long r2 = 1; r2 <= 5; ++r2)
                for (long long d2 = -10; d2 <= 10; ++d2) {
                    Rational sub = make_rational(d1, r1);
                    Rational total = make_rational(d1 + d2, r1 + r2);
                    Rational quot = make_rational(d2, r2);
                    int s1 = sign_of(sub, total);
                    int s2 = sign_of(sub, quot);
                    int s3 = sign_of(total, quot);
                    REQUIRE(s1 == s2);
                    REQUIRE(s2 == s3);
                }
}

TEST_CASE("semi-stability in the atom model") {
    CHECK(is_semistable(BundleSum{{1, 1, "a"}, {1, 1, "b"}}));
    CHECK(is_semistable(BundleSum{{StableAtom(2, 1, "E")}}));

    // {O(2), O(0)}: the sub-sum {O(2)} has slope 2 > mu = 1. The exhaustive
    // oracle finds the destabilizing sub-sum.
    BundleSum b{line(2), line(0)};
    CHECK(oracles::oracle_mu_max(b) == Rational(2));
    CHECK(oracles::oracle_mu_max(b) > slope(b));
    CHECK_FALSE(is_semistable(b));

    // agreement with the oracle on random bundles
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 500; ++i) {
        BundleSum r = oracles::random_bundle(rng);
        bool oracle_ss = !(oracles::oracle_mu_max(r) > slope(r));
        CHECK(is_semistable(r) == oracle_ss);
    }
}

TEST_CASE("stability in the atom model") {
    CHECK(is_stable(BundleSum{{StableAtom(2, 1, "E")}}));
    CHECK_FALSE(is_stable(BundleSum{{1, 1, "a"}, {1, 1, "b"}})); // direct sums are not stable
    CHECK_FALSE(is_stable(BundleSum{line(2), line(0)}));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        BundleSum r = oracles::random_bundle(rng);
        if (is_stable(r)) CHECK(is_semistable(r));
    }
}

// No multiset of >= 2 equal-slope atoms can sum to coprime (r, d):
// semi-stable with coprime type implies stable.
TEST_CASE("coprime semi-stable implies stable, exhaustive") {
    std::uint64_t checked = 0;
    oracles::for_each_multiset(4, 3, 4, [&](const std::vector<StableAtom>& atoms) {
        BundleSum b(atoms);
        if (!is_semistable(b)) return;
        long long g = std::gcd(b.rank(), std::abs(b.degree()));
        if (g == 1) {
            ++checked;
            REQUIRE(is_stable(b));
        }
    });
    CHECK(checked > 0);
}

TEST_CASE("moduli dimension") {
    CHECK(moduli_dimension(2, 2) == 5);
    CHECK(moduli_dimension(1, 3) == 3);
    CHECK(moduli_dimension(3, 2) == 10);
    CHECK_THROWS_AS(moduli_dimension(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(moduli_dimension(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(moduli_dimension(0, 3), std::invalid_argument);
}

TEST_CASE("bundle sum multiset semantics") {
    BundleSum b1{{1, 1, "b"}, {2, 3, "a"}};
    BundleSum b2{{2, 3, "a"}, {1, 1, "b"}};
    CHECK(b1 == b2);

    BundleSum sub{{StableAtom(2, 3, "a")}};
    CHECK(sub.sub_multiset_of(b1));
    CHECK(b1.minus(sub) == BundleSum{{1, 1, "b"}});
    CHECK_THROWS_AS(sub.minus(b1), std::invalid_argument);

    CHECK(b1.twist(2) == BundleSum({{1, 3, "b"}, {2, 7, "a"}}));
    CHECK(slope(b1.twist(5)) == slope(b1) + 5);
}
