#include <catch2/catch_amalgamated.hpp>

#include "hybridwc/jfun.hpp"
#include "hybridwc/model.hpp"
#include "hybridwc/qseries.hpp"
#include "hybridwc/state.hpp"

using namespace hybridwc;

namespace {

RatFunc rf(const ModelParams& p, long n, long d = 1) { return RatFunc(p.arity(), BigRational(n, d)); }
MPoly a(const ModelParams& p, long j) { return MPoly::var(p.arity(), static_cast<int>(j)); }
MPoly zv(const ModelParams& p) { return MPoly::var(p.arity(), 0); }
RatFunc zr(const ModelParams& p) { return RatFunc(zv(p)); }

}  // namespace

TEST_CASE("b_progression endpoints") {
    // strictly inside (0, 2/3) with fractional part 2/3: empty
    CHECK(b_progression(BigRational(2, 3), BigRational(0), BigRational(2, 3), true, true).empty());
    // fractional part 1/5 in (0, 6/5): just 1/5
    auto v = b_progression(BigRational(6, 5), BigRational(0), BigRational(6, 5), true, true);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == BigRational(1, 5));
    // integers in (0, beta]: 1..beta
    auto w = b_progression(BigRational(0), BigRational(0), BigRational(3), true, false);
    CHECK(w == std::vector<BigRational>{BigRational(1), BigRational(2), BigRational(3)});
    // non-strict lower endpoint picks up b = 0
    auto u = b_progression(BigRational(1), BigRational(0), BigRational(1), false, true);
    REQUIRE(u.size() == 1);
    CHECK(u[0] == BigRational(0));
}

TEST_CASE("unstable_coeff_noneq examples") {
    ModelParams q = quintic_model();
    StateClass j0 = unstable_coeff_noneq(0, q);
    CHECK(j0.coeff(q.mult(1), 0) == zr(q));
    CHECK(j0.entries().size() == 1);

    ModelParams cc = cc33_model();
    StateClass j1 = unstable_coeff_noneq(1, cc);
    CHECK(j1.coeff(cc.mult(2), 0) == rf(cc, 1) / zr(cc));
    CHECK(j1.coeff(cc.mult(2), 1) == rf(cc, -2) / (zr(cc) * zr(cc)));
    CHECK(j1.entries().size() == 2);

    StateClass j5 = unstable_coeff_noneq(5, q);
    CHECK(j5.coeff(q.mult(1), 0) == zr(q) * rf(q, -1, 375000));
    CHECK(j5.entries().size() == 1);

    // broad-sector coefficients truncate away entirely on the quintic
    CHECK(unstable_coeff_noneq(4, q).is_zero());
}

TEST_CASE("unstable_coeff_eq examples") {
    ModelParams q = quintic_model();
    CHECK(unstable_eq_value(0, 1, q) == zr(q));

    RatFunc v5 = unstable_eq_value(5, 1, q);
    RatFunc expect5 = zr(q) * (RatFunc(-(zv(q) + a(q, 1))) * rf(q, 1, 5)).pow(5) /
                      (rf(q, 120) * zr(q).pow(5));
    CHECK(v5 == expect5);

    ModelParams cc = cc33_model();
    RatFunc v1 = unstable_eq_value(1, 1, cc);
    CHECK(v1 == rf(cc, 1) / RatFunc(zv(cc) + a(cc, 1) - a(cc, 2)));

    EqStateClass e1 = unstable_coeff_eq(1, 1, cc);
    CHECK(e1.coeff(1, cc.mult(2)) == v1);
    CHECK(e1.entries().size() == 1);
}

TEST_CASE("sector selection rule") {
    for (const ModelParams& p : {quintic_model(), cc33_model(), c1122d4_model()}) {
        for (long beta = 0; beta <= 6; ++beta) {
            StateClass c = unstable_coeff_noneq(beta, p);
            for (const auto& [k, v] : c.entries())
                CHECK(k.first == p.j_sector(beta).numerator());
        }
    }
}

TEST_CASE("homogeneity of unstable coefficients") {
    // with deg z = deg H = 1, every surviving term of the q^beta coefficient
    // has total degree 1 + #numerator-factors - N*beta
    for (const ModelParams& p : {quintic_model(), cc33_model(), c2222_model(), c1122d4_model()}) {
        for (long beta = 0; beta <= 6; ++beta) {
            long expect = 1 + unstable_numerator_count(beta, p) - p.N() * beta;
            StateClass c = unstable_coeff_noneq(beta, p);
            for (const auto& [k, v] : c.entries()) {
                for (const auto& [zk, coeff] : v.z_laurent_map()) {
                    CHECK(k.second + zk == expect);
                    // the z-Laurent coefficients are pure rationals
                    CHECK_FALSE(coeff.depends_on_z());
                    auto [n, d] = coeff.canonical_pair();
                    CHECK(n.is_constant());
                    CHECK(d.is_constant());
                }
            }
        }
    }
}

TEST_CASE("j_plus") {
    // epsilon = infinity: the series is z*1 for every model
    for (ModelParams p : {quintic_model(), cc33_model(), c2222_model(), c1122d4_model()}) {
        p.epsilon = Epsilon::infinity();
        QSeries<StateClass> jp = j_plus(p, 6);
        REQUIRE(jp.has(0));
        CHECK(jp.get(0)->coeff(p.j_sector(0), 0) == zr(p));
        CHECK(jp.coeffs().size() == 1);
    }

    // quintic, 0+: scan up to q^5
    ModelParams q = quintic_model();
    QSeries<StateClass> jp = j_plus(q, 5);
    CHECK(jp.get(0)->coeff(q.mult(1), 0) == zr(q));
    REQUIRE(jp.has(1));
    CHECK(jp.get(1)->coeff(q.mult(2), 0) == rf(q, 1));
    CHECK_FALSE(jp.has(2));  // only z^{-1} terms at beta = 2
    CHECK_FALSE(jp.has(3));
    CHECK_FALSE(jp.has(4));  // broad sector, truncated away
    REQUIRE(jp.has(5));
    CHECK(jp.get(5)->coeff(q.mult(1), 0) == zr(q) * rf(q, -1, 375000));

    // (3,3): the q^1 coefficient has only negative z-powers
    ModelParams cc = cc33_model();
    QSeries<StateClass> jcc = j_plus(cc, 1);
    CHECK_FALSE(jcc.has(1));
}

TEST_CASE("mirror map coefficients") {
    ModelParams q = quintic_model();
    CHECK(mu_coeff(0, q).is_zero());
    CHECK(mu_coeff(5, q).coeff(q.mult(1), 0) == zr(q) * rf(q, -1, 375000));

    ModelParams fin = cc33_model();
    fin.epsilon = Epsilon::rational(BigRational(1, 2));
    CHECK(mu_coeff(3, fin).is_zero());
    CHECK(mu_coeff(7, fin).is_zero());

    // vertex version
    CHECK(nu_coeff(0, 1, q).is_zero());
    ModelParams cc = cc33_model();
    EqStateClass nu1 = nu_coeff(1, 1, cc);
    // 1/(z + a1 - a2) is already regular at z = 0
    CHECK(nu1.coeff(1, cc.mult(2)) == rf(cc, 1) / RatFunc(zv(cc) + a(cc, 1) - a(cc, 2)));
}

TEST_CASE("iota_J unstable coefficients") {
    ModelParams q = quintic_model();
    StateClass i0 = iota_j_unstable_coeff(0, q);
    CHECK(i0.coeff(q.mult(1), 0) == zr(q) * rf(q, -1, 5));

    StateClass i5 = iota_j_unstable_coeff(5, q);
    CHECK(i5.coeff(q.mult(1), 0) == zr(q) * rf(q, 1, 1875000));
}

TEST_CASE("iota_J equals iota_star of the J coefficient with z negated") {
    for (const ModelParams& p : {quintic_model(), cc33_model(), c1122d4_model()}) {
        QSeries<StateClass> series = iota_j_unstable_series(p, 10);
        for (long beta = 0; beta <= 10; ++beta) {
            StateClass lhs = iota_j_unstable_coeff(beta, p);
            StateClass rhs = iota_star(unstable_coeff_noneq(beta, p)).negate_z();
            CHECK(lhs == rhs);
            const StateClass* from_series = series.get(beta);
            if (from_series) CHECK(*from_series == lhs);
            else CHECK(lhs.is_zero());
        }
    }
}

TEST_CASE("equivariant restriction of iota_J matches the direct product") {
    // f_{j,m} summand: iota factor times the vertex J value with z negated,
    // divided by the tangent Euler factor
    for (const ModelParams& p : {cc33_model(), c1122d4_model()}) {
        for (long beta = 0; beta <= 5; ++beta) {
            Multiplicity m = p.j_sector(beta);
            for (long j = 1; j <= p.N(); ++j) {
                RatFunc direct = iota_unstable_value(beta, j, m, p);
                RatFunc tangent = RatFunc::one(p.arity());
                for (long k = 1; k <= p.N(); ++k)
                    if (k != j)
                        tangent *= RatFunc(a(p, j) - a(p, k));
                RatFunc bridged = iota_factor_eq(j, m, p) *
                                  unstable_eq_value(beta, j, p).negate_z() / tangent;
                CHECK(direct == bridged);
            }
        }
    }
}

TEST_CASE("noneq limit of the equivariant coefficients recovers the J coefficients") {
    for (const ModelParams& p : {quintic_model(), cc33_model(), c1122d4_model()}) {
        for (long beta = 0; beta <= 6; ++beta) {
            EqStateClass eq(p);
            for (long j = 1; j <= p.N(); ++j) eq += unstable_coeff_eq(beta, j, p);
            CHECK(noneq_limit(eq, p) == unstable_coeff_noneq(beta, p));
        }
    }
}

TEST_CASE("qseries truncation rules") {
    ModelParams q = quintic_model();
    QSeries<RatFunc> f(2), g(2);
    f.set(0, rf(q, 1));
    f.set(1, rf(q, 1));
    g.set(0, rf(q, 1));
    g.set(1, rf(q, -1));
    QSeries<RatFunc> prod = qseries_mul(f, g);  // (1+q)(1-q) mod q^3
    CHECK(prod.truncation() == 2);
    CHECK(*prod.get(0) == rf(q, 1));
    CHECK_FALSE(prod.has(1));
    CHECK(*prod.get(2) == rf(q, -1));

    QSeries<RatFunc> unit(1);
    unit.set(0, rf(q, 1));
    QSeries<RatFunc> h(5);
    h.set(0, rf(q, 1));
    h.set(1, rf(q, 1));
    QSeries<RatFunc> hu = qseries_mul(h, unit);
    CHECK(hu.truncation() == 1);
    CHECK(hu.has(1));

    QSeries<RatFunc> qq(0);
    QSeries<RatFunc> q1(5);
    q1.set(1, rf(q, 1));
    CHECK(qseries_mul(q1, q1).truncation() == 5);
    QSeries<RatFunc> qtrunc(1);
    qtrunc.set(1, rf(q, 1));
    CHECK(qseries_mul(qtrunc, qtrunc).is_zero());  // q*q drops past the cutoff
}
