#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hybridwc/mpoly.hpp"
#include "hybridwc/ratfunc.hpp"

using namespace hybridwc;

namespace {

constexpr int AR = 3;  // z, a1, a2

MPoly Z() { return MPoly::var(AR, 0); }
MPoly A(int j) { return MPoly::var(AR, j); }
MPoly C(long n, long d = 1) { return MPoly::constant(AR, BigRational(n, d)); }

MPoly random_poly(std::mt19937& rng, int max_terms, int max_deg) {
    std::uniform_int_distribution<int> nt(0, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<long> coef(-6, 6);
    MPoly p(AR);
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        ExpVec ev{deg(rng), deg(rng), deg(rng)};
        p += MPoly::monomial(AR, ev, BigRational(coef(rng)));
    }
    return p;
}

RatFunc random_ratfunc(std::mt19937& rng) {
    MPoly n = random_poly(rng, 3, 2);
    MPoly d = random_poly(rng, 2, 1);
    if (d.is_zero()) d = MPoly::one(AR);
    return RatFunc::frac(n, d);
}

}  // namespace

TEST_CASE("BigRational basics") {
    BigRational a(6, 4);
    CHECK(a.num() == 3);
    CHECK(a.den() == 2);
    CHECK(BigRational(0, 5).str() == "0");
    CHECK(BigRational(-2, 4).str() == "-1/2");
    CHECK_THROWS_AS(BigRational(1, 0), DivisionByZero);
    CHECK(BigRational(7, 3).floor() == 2);
    CHECK(BigRational(-7, 3).floor() == -3);
    CHECK(BigRational(-7, 3).frac() == BigRational(2, 3));
    CHECK(BigRational(2, 3).pow(-2) == BigRational(9, 4));
}

TEST_CASE("MPoly arithmetic and ordering") {
    MPoly p = Z() * Z() - A(1) * A(1);         // z^2 - a1^2
    MPoly q = Z() - A(1);
    CHECK((p + (-p)).is_zero());
    CHECK(p * q == q * p);
    auto quot = MPoly::divide_exact(p, q);
    REQUIRE(quot.has_value());
    CHECK(*quot == Z() + A(1));
    CHECK_FALSE(MPoly::divide_exact(p, Z() - A(2)).has_value());
    CHECK(p.str() == "z^2 - a1^2");
    CHECK((C(2) * Z() + C(2)).content() == BigRational(2));
}

TEST_CASE("MPoly gcd") {
    MPoly p = Z() * Z() - A(1) * A(1);
    MPoly q = Z() - A(1);
    CHECK(MPoly::gcd(p, q) == q);
    MPoly h = Z() + C(2) * A(2);
    MPoly f = p * h, g = q * h * C(3);
    MPoly gg = MPoly::gcd(f, g);
    CHECK(MPoly::divides(q * h, gg));
    CHECK(MPoly::divides(gg, q * h));
    CHECK(MPoly::gcd(MPoly::zero(AR), q) == q);
    CHECK(MPoly::gcd(C(4), C(6)).is_one());
}

TEST_CASE("MPoly gcd with planted common factors") {
    std::mt19937 rng(6174);
    for (int i = 0; i < 50; ++i) {
        MPoly h = random_poly(rng, 3, 2);
        if (h.is_zero() || h.is_constant()) h = Z() * A(1) + A(2) + C(1);
        MPoly f = random_poly(rng, 3, 2), g = random_poly(rng, 3, 2);
        if (f.is_zero()) f = Z() + C(1);
        if (g.is_zero()) g = A(1) + C(2);
        MPoly gg = MPoly::gcd(f * h, g * h);
        CHECK(MPoly::divides(h, gg));
        // and the result divides both inputs
        CHECK(MPoly::divides(gg, f * h));
        CHECK(MPoly::divides(gg, g * h));
    }
}

TEST_CASE("normalize canonical forms") {
    // (z^2 - a1^2)/(z - a1) -> (z + a1)/1
    RatFunc r = normalize(Z() * Z() - A(1) * A(1), Z() - A(1));
    auto [n, d] = r.canonical_pair();
    CHECK(n == Z() + A(1));
    CHECK(d.is_one());

    // 0/(z + a1) -> 0/1
    RatFunc r0 = normalize(MPoly::zero(AR), Z() + A(1));
    CHECK(r0.is_zero());
    CHECK(r0.canonical_string() == "(0)/(1)");

    // (2z + 2)/4 -> (z + 1)/2
    RatFunc r2 = normalize(C(2) * Z() + C(2), C(4));
    auto [n2, d2] = r2.canonical_pair();
    CHECK(n2 == Z() + C(1));
    CHECK(d2 == C(2));

    CHECK_THROWS_AS(normalize(Z(), MPoly::zero(AR)), DivisionByZero);
}

TEST_CASE("normalize is idempotent on random inputs") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 200; ++i) {
        MPoly n = random_poly(rng, 4, 3);
        MPoly d = random_poly(rng, 3, 2);
        if (d.is_zero()) d = Z() + C(1);
        RatFunc r1 = normalize(n, d);
        auto [n1, d1] = r1.canonical_pair();
        RatFunc r2 = normalize(n1, d1);
        auto [n2, d2] = r2.canonical_pair();
        CHECK(n1 == n2);
        CHECK(d1 == d2);
    }
}

TEST_CASE("ring axioms on random rational functions") {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        RatFunc f = random_ratfunc(rng), g = random_ratfunc(rng), h = random_ratfunc(rng);
        CHECK((f + g) + h == f + (g + h));
        CHECK((f * g) * h == f * (g * h));
        CHECK(f * (g + h) == f * g + f * h);
        CHECK(f + g == g + f);
        CHECK(f * g == g * f);
    }
}

TEST_CASE("residue_z on simple and higher-order poles") {
    // residue of 1/(z - a1) at a1 -> 1
    RatFunc f = RatFunc::frac(MPoly::one(AR), Z() - A(1));
    CHECK(f.residue_z(A(1)) == RatFunc::one(AR));

    // residue of z/((z - a1)(z - a2)) at a1 -> a1/(a1 - a2)
    RatFunc g = RatFunc::frac(Z(), (Z() - A(1)) * (Z() - A(2)));
    RatFunc expect = RatFunc::frac(A(1), A(1) - A(2));
    CHECK(g.residue_z(A(1)) == expect);

    // polynomials have no poles
    RatFunc h = RatFunc(Z() + A(1));
    CHECK(h.residue_z(A(2)).is_zero());

    // pole location containing z is rejected
    CHECK_THROWS_AS(f.residue_z(Z()), InvalidPole);

    // double pole: z/(z - a1)^2 has residue 1 at a1
    RatFunc k = RatFunc::frac(Z(), (Z() - A(1)) * (Z() - A(1)));
    CHECK(k.residue_z(A(1)) == RatFunc::one(AR));

    // triple pole: z^2/(z - a1)^3 has residue 1 at a1
    RatFunc t = RatFunc::frac(Z() * Z(), (Z() - A(1)).pow(3));
    CHECK(t.residue_z(A(1)) == RatFunc::one(AR));
}

TEST_CASE("laurent_z at zero and infinity") {
    RatFunc f = RatFunc::frac(MPoly::one(AR), Z() + A(1));
    auto at0 = f.laurent_z(RatFunc::Direction::AtZero, 0, 1);
    CHECK(at0[0] == RatFunc(AR, BigRational(1)) / RatFunc(A(1)));
    CHECK(at0[1] == -(RatFunc::one(AR) / RatFunc(A(1) * A(1))));

    auto atinf = f.laurent_z(RatFunc::Direction::AtInfinity, -2, -1);
    CHECK(atinf[-1] == RatFunc::one(AR));
    CHECK(atinf[-2] == -RatFunc(A(1)));

    // at infinity with a polynomial part: z^2/(z - a1) = z + a1 + a1^2/z + ...
    RatFunc h2 = RatFunc::frac(Z() * Z(), Z() - A(1));
    auto hinf = h2.laurent_z(RatFunc::Direction::AtInfinity, -1, 2);
    CHECK(hinf[2].is_zero());
    CHECK(hinf[1] == RatFunc::one(AR));
    CHECK(hinf[0] == RatFunc(A(1)));
    CHECK(hinf[-1] == RatFunc(A(1) * A(1)));

    // z^2/(z - a1) is regular at 0 and vanishes there
    RatFunc g = RatFunc::frac(Z() * Z(), Z() - A(1));
    auto g0 = g.laurent_z(RatFunc::Direction::AtZero, -1, 0);
    CHECK(g0[-1].is_zero());
    CHECK(g0[0].is_zero());
    CHECK(g.z_valuation() == 2);
}

TEST_CASE("residue agrees with shifted laurent coefficient") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> mult(1, 3);
    std::uniform_int_distribution<long> coef(-4, 4);
    for (int i = 0; i < 60; ++i) {
        // build f = num / ((z - a1)^m1 (z + a2)^m2) with random numerator
        MPoly num = random_poly(rng, 4, 3);
        if (num.is_zero()) num = Z() + C(1);
        int m1 = mult(rng), m2 = mult(rng);
        RatFunc f = RatFunc(num) / RatFunc((Z() - A(1)).pow(m1)) /
                    RatFunc((Z() + A(2)).pow(m2));
        RatFunc r = f.residue_z(A(1));
        // shift z -> z + a1 and read the -1 coefficient at zero
        RatFunc shifted = RatFunc(num.subst(0, Z() + A(1))) /
                          RatFunc(Z().pow(m1)) /
                          RatFunc((Z() + A(1) + A(2)).pow(m2));
        auto lc = shifted.laurent_z(RatFunc::Direction::AtZero, -1, -1);
        CHECK(r == lc[-1]);
    }
}

TEST_CASE("partial fractions completeness for simple poles") {
    // f with simple poles c1..cr and deg num < deg den splits into residues
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> coef(-5, 5);
    for (int i = 0; i < 40; ++i) {
        MPoly c1 = A(1), c2 = A(2) * C(2), c3 = A(1) + A(2) + C(1);
        MPoly den = (Z() - c1) * (Z() - c2) * (Z() - c3);
        MPoly num = C(coef(rng)) * Z() * Z() + C(coef(rng)) * Z() + C(coef(rng));
        RatFunc f = RatFunc::frac(num, den);
        RatFunc sum = RatFunc::zero(AR);
        for (const MPoly& c : {c1, c2, c3})
            sum += f.residue_z(c) * RatFunc::frac(MPoly::one(AR), Z() - c);
        CHECK(f == sum);
    }
}

TEST_CASE("eval and z-substitution") {
    RatFunc f = RatFunc::frac(Z() + A(1), Z() - A(2));
    RatFunc at = f.eval_z(A(1));
    CHECK(at == RatFunc::frac(A(1) + A(1), A(1) - A(2)));
    CHECK_THROWS_AS(f.eval_z(A(2)), DivisionByZero);

    RatFunc g = f.negate_z();
    CHECK(g == RatFunc::frac(-Z() + A(1), -Z() - A(2)));
}

TEST_CASE("principal and non-negative parts at zero") {
    // f = 1/z^2 + 3/z + (z + a1)/(z + a2)
    RatFunc f = RatFunc::frac(MPoly::one(AR), Z() * Z()) +
                RatFunc(AR, BigRational(3)) / RatFunc(Z()) +
                RatFunc::frac(Z() + A(1), Z() + A(2));
    RatFunc pp = f.principal_part_at_zero();
    RatFunc reg = f.nonnegative_part_at_zero();
    CHECK(pp + reg == f);
    CHECK(reg == RatFunc::frac(Z() + A(1), Z() + A(2)));
    auto lm = pp.laurent_z(RatFunc::Direction::AtZero, -2, -1);
    CHECK(lm[-2] == RatFunc::one(AR));
    CHECK(lm[-1] == RatFunc(AR, BigRational(3)));
}
