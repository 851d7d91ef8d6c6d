#include <catch2/catch_amalgamated.hpp>

#include "hybridwc/model.hpp"
#include "hybridwc/state.hpp"

using namespace hybridwc;

namespace {

RatFunc rf(const ModelParams& p, long n, long d = 1) { return RatFunc(p.arity(), BigRational(n, d)); }
MPoly a(const ModelParams& p, long j) { return MPoly::var(p.arity(), static_cast<int>(j)); }
MPoly zv(const ModelParams& p) { return MPoly::var(p.arity(), 0); }

}  // namespace

TEST_CASE("epsilon stability ranges") {
    CHECK(Epsilon::zero_plus().unstable(1000));
    CHECK(Epsilon::infinity().unstable(0));
    CHECK_FALSE(Epsilon::infinity().unstable(1));
    Epsilon half = Epsilon::parse("1/2");
    CHECK(half.unstable(2));
    CHECK_FALSE(half.unstable(3));
    Epsilon one = Epsilon::parse("1");
    CHECK(one.unstable(1));
    CHECK_FALSE(one.unstable(2));
    CHECK_THROWS_AS(Epsilon::rational(BigRational(0)), InvalidDegree);
}

TEST_CASE("model validation") {
    ModelParams bad{{1, 1, 3}, 4, 1, Epsilon::zero_plus(), 5};
    CHECK_THROWS_AS(bad.validate(), InvalidDegree);
    CHECK_NOTHROW(quintic_model().validate());
    CHECK_NOTHROW(c1122d4_model().validate());
}

TEST_CASE("broad_set") {
    ModelParams p = c1122d4_model();
    auto F = broad_set(p.mult(2), p);  // m = 1/2
    CHECK(F == std::vector<long>{3, 4});

    ModelParams q = quintic_model();
    CHECK(broad_set(q.mult(1), q).empty());
    CHECK(broad_set(q.mult(0), q) == std::vector<long>{1, 2, 3, 4, 5});

    CHECK(ct_dim(q.mult(0), q) == -5);
    CHECK(ct_dim(q.mult(1), q) == 0);
    ModelParams cc = cc33_model();
    CHECK(ct_dim(cc.mult(1), cc) == 1);
}

TEST_CASE("non-equivariant pairing") {
    ModelParams q = quintic_model();
    CHECK(pair_noneq(q.mult(1), 0, q.mult(4), 0, q) == BigRational(1, 5));

    ModelParams cc = cc33_model();
    CHECK(pair_noneq(cc.mult(1), 0, cc.mult(2), 1, cc) == BigRational(1, 3));
    CHECK(pair_noneq(cc.mult(1), 0, cc.mult(2), 0, cc) == BigRational(0));
    CHECK(pair_noneq(cc.mult(1), 0, cc.mult(1), 1, cc) == BigRational(0));
    CHECK_THROWS_AS(pair_noneq(cc.mult(0), 0, cc.mult(0), 0, cc), OutsideCompactType);
}

TEST_CASE("pair_noneq nondegenerate on compact type for small models") {
    // every compact-type basis class pairs non-trivially with its partner
    for (const ModelParams& p :
         {quintic_model(), cc33_model(), c2222_model(), c1122d4_model()}) {
        for (long s = 0; s < p.d(); ++s) {
            Multiplicity m = p.mult(s);
            long L = ct_dim(m, p);
            for (long l = 0; l <= L; ++l) {
                Multiplicity mn = m.negated(p.d());
                long lp = p.N() - 1 - static_cast<long>(broad_set(m, p).size()) - l;
                REQUIRE(lp >= 0);
                REQUIRE(lp <= ct_dim(mn, p));
                CHECK(pair_noneq(m, l, mn, lp, p) != BigRational(0));
            }
        }
    }
}

TEST_CASE("pair_noneq Gram matrix invertible across d <= 8, M <= 8") {
    // The Gram matrix in the (sector, power) basis pairs (m, l) only with
    // (-m, ctdim - l), so invertibility is exactly: every class has a
    // nonzero partner entry, and that partner lies in the compact type.
    for (long d = 1; d <= 8; ++d) {
        std::vector<std::vector<long>> weight_sets;
        weight_sets.push_back(std::vector<long>(6, 1));
        std::vector<long> divisors;
        for (long w = 1; w <= d; ++w)
            if (d % w == 0) divisors.push_back(w);
        std::vector<long> mixed;
        for (size_t i = 0; mixed.size() < 8 && i < 8; ++i)
            mixed.push_back(divisors[i % divisors.size()]);
        weight_sets.push_back(mixed);
        for (long N = 1; N <= 3; ++N) {
            for (const auto& ws : weight_sets) {
                ModelParams p{ws, d, N, Epsilon::zero_plus(), 4};
                p.validate();
                for (long s = 0; s < d; ++s) {
                    Multiplicity m = p.mult(s);
                    for (long l = 0; l <= ct_dim(m, p); ++l) {
                        Multiplicity mn = m.negated(d);
                        long lp = ct_dim(m, p) - l;
                        REQUIRE(lp <= ct_dim(mn, p));
                        CHECK(pair_noneq(m, l, mn, lp, p) != BigRational(0));
                        // off-partner entries vanish, so the matrix is a
                        // scaled permutation
                        if (lp + 1 <= ct_dim(mn, p))
                            CHECK(pair_noneq(m, l, mn, lp + 1, p) == BigRational(0));
                    }
                }
            }
        }
    }
}

TEST_CASE("equivariant pairing") {
    ModelParams cc = cc33_model();
    RatFunc e1 = pair_eq(1, cc.mult(1), 1, cc.mult(2), cc);
    RatFunc expect = rf(cc, 1) / (rf(cc, 3) * RatFunc(a(cc, 1) - a(cc, 2)));
    CHECK(e1 == expect);

    ModelParams q = quintic_model();
    CHECK(pair_eq(1, q.mult(1), 1, q.mult(4), q) == rf(q, 1, 5));

    // off-diagonal vanishing
    CHECK(pair_eq(1, cc.mult(1), 2, cc.mult(2), cc).is_zero());
    // sector mismatch
    CHECK(pair_eq(1, cc.mult(1), 1, cc.mult(1), cc).is_zero());

    // eta is nonzero for every (j, m) on the sample models
    for (const ModelParams& p : {quintic_model(), cc33_model(), c2222_model(), c1122d4_model()})
        for (long j = 1; j <= p.N(); ++j)
            for (long s = 0; s < p.d(); ++s)
                CHECK_FALSE(eta_pairing(j, p.mult(s), p).is_zero());
}

TEST_CASE("equivariant pairing interpolates the non-equivariant one") {
    // Sum_j P(a_j) Q(a_j) eta^j_(m), taken to the a -> 0 limit, recovers the
    // sector-basis pairing; in particular the diagonal-in-j convention is the
    // one consistent with fixed-point interpolation.
    ModelParams cc = cc33_model();
    Multiplicity m = cc.mult(1), mn = cc.mult(2);
    for (long l1 = 0; l1 <= 1; ++l1) {
        for (long l2 = 0; l2 <= 1; ++l2) {
            RatFunc sum = RatFunc::zero(cc.arity());
            for (long j = 1; j <= cc.N(); ++j) {
                RatFunc pj = RatFunc(a(cc, j)).pow(l1) * RatFunc(a(cc, j)).pow(l2);
                sum += pj * eta_pairing(j, m, cc);
            }
            RatFunc expect(cc.arity(), pair_noneq(m, l1, mn, l2, cc));
            CHECK(detail::ray_limit(sum, cc) == expect);
        }
    }
}

TEST_CASE("iota_star") {
    ModelParams q = quintic_model();
    StateClass x(q);
    x.add(q.mult(1), 0, rf(q, 1));
    StateClass y = iota_star(x);
    CHECK(y.coeff(q.mult(1), 0) == rf(q, 1, 5));

    ModelParams cc = cc33_model();
    EqStateClass e(cc);
    e.add(1, cc.mult(0), rf(cc, 1));
    EqStateClass w = iota_star(e);
    RatFunc expect = RatFunc(a(cc, 1).pow(6)) * rf(cc, 1, 2187);
    CHECK(w.coeff(1, cc.mult(0)) == expect);

    StateClass zero(q);
    CHECK(iota_star(zero).is_zero());

    // injective on the compact-type classes of the sample models
    for (const ModelParams& p : {quintic_model(), cc33_model(), c2222_model(), c1122d4_model()}) {
        for (long s = 0; s < p.d(); ++s) {
            Multiplicity m = p.mult(s);
            for (long l = 0; l <= ct_dim(m, p); ++l) {
                StateClass basis(p);
                basis.add(m, l, rf(p, 1));
                CHECK_FALSE(iota_star(basis).is_zero());
            }
        }
    }
}

TEST_CASE("noneq_limit basics") {
    ModelParams cc = cc33_model();
    Multiplicity m = cc.mult(1);

    // constant interpolant: f_j = 1 -> H^0
    EqStateClass c1(cc);
    c1.add(1, m, rf(cc, 1));
    c1.add(2, m, rf(cc, 1));
    StateClass l1 = noneq_limit(c1, cc);
    CHECK(l1.coeff(m, 0) == rf(cc, 1));
    CHECK(l1.coeff(m, 1).is_zero());

    // f_j = a_j -> H
    EqStateClass ch(cc);
    ch.add(1, m, RatFunc(a(cc, 1)));
    ch.add(2, m, RatFunc(a(cc, 2)));
    StateClass lh = noneq_limit(ch, cc);
    CHECK(lh.coeff(m, 0).is_zero());
    CHECK(lh.coeff(m, 1) == rf(cc, 1));

    // f_j = 1/a_j has no limit
    EqStateClass bad(cc);
    bad.add(1, m, rf(cc, 1) / RatFunc(a(cc, 1)));
    bad.add(2, m, rf(cc, 1) / RatFunc(a(cc, 2)));
    CHECK_THROWS_AS(noneq_limit(bad, cc), NoNonequivariantLimit);
}

TEST_CASE("noneq_limit round-trips polynomial lifts") {
    for (const ModelParams& p : {cc33_model(), c2222_model(), c1122d4_model()}) {
        for (long s = 0; s < p.d(); ++s) {
            Multiplicity m = p.mult(s);
            for (long l = 0; l <= ct_dim(m, p); ++l) {
                StateClass basis(p);
                basis.add(m, l, rf(p, 1));
                StateClass back = noneq_limit(equivariant_lift(basis), p);
                CHECK(back == basis);
            }
        }
    }
}

TEST_CASE("noneq_limit of the quintic beta=5 vertex coefficient") {
    ModelParams q = quintic_model();
    // z * (-(z+a1)/5)^5 / (120 z^5)
    RatFunc v = RatFunc(zv(q)) * (RatFunc(-(zv(q) + a(q, 1))) * rf(q, 1, 5)).pow(5) /
                (rf(q, 120) * RatFunc(zv(q)).pow(5));
    EqStateClass e(q);
    e.add(1, q.mult(1), v);
    StateClass lim = noneq_limit(e, q);
    RatFunc expect = RatFunc(zv(q)) * rf(q, -1, 375000);
    CHECK(lim.coeff(q.mult(1), 0) == expect);
}
