#pragma once

#include <vector>

#include "hybridwc/model.hpp"
#include "hybridwc/qseries.hpp"
#include "hybridwc/ratfunc.hpp"
#include "hybridwc/state.hpp"

namespace hybridwc {

// Arithmetic progression { b : <b> = <anchor>, lo (<|<=) b (<|<=) hi }.
// The strict/non-strict choices at the two endpoints follow each product
// formula exactly; they are not interchangeable.
inline std::vector<BigRational> b_progression(const BigRational& anchor, const BigRational& lo,
                                              const BigRational& hi, bool strict_lo,
                                              bool strict_hi) {
    std::vector<BigRational> out;
    BigRational frac = anchor.frac();
    // smallest b = frac + k >= lo (or > lo)
    BigRational diff = lo - frac;
    BigRational b = frac + BigRational(diff.floor());
    while (b < lo || (strict_lo && b == lo)) b += BigRational(1);
    while (b < hi || (!strict_hi && b == hi)) {
        out.push_back(b);
        b += BigRational(1);
    }
    return out;
}

namespace detail {

// Truncated polynomial in the nilpotent hyperplane class: c[l] is the
// coefficient of H^l, truncated beyond the given length.
struct HJet {
    int arity;
    std::vector<RatFunc> c;

    HJet(int ar, long len) : arity(ar), c(static_cast<size_t>(len), RatFunc::zero(ar)) {}

    static HJet unit(int ar, long len, const RatFunc& value) {
        HJet j(ar, len);
        if (len > 0) j.c[0] = value;
        return j;
    }
    // u*z + w*H + v
    static HJet linear(int ar, long len, const RatFunc& z_part, const BigRational& h_coeff) {
        HJet j(ar, len);
        if (len > 0) j.c[0] = z_part;
        if (len > 1) j.c[1] = RatFunc(ar, h_coeff);
        return j;
    }

    HJet mul(const HJet& o) const {
        HJet r(arity, static_cast<long>(c.size()));
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            for (size_t k = 0; i + k < c.size(); ++k) {
                if (o.c[k].is_zero()) continue;
                r.c[i + k] += c[i] * o.c[k];
            }
        }
        return r;
    }

    HJet inverse() const {
        if (c.empty() || c[0].is_zero())
            throw DivisionByZero("HJet: inverse needs invertible constant term");
        HJet r(arity, static_cast<long>(c.size()));
        RatFunc inv0 = c[0].inverse();
        r.c[0] = inv0;
        for (size_t k = 1; k < c.size(); ++k) {
            RatFunc s = RatFunc::zero(arity);
            for (size_t i = 1; i <= k; ++i)
                if (!c[i].is_zero()) s += c[i] * r.c[k - i];
            r.c[k] = -(inv0 * s);
        }
        return r;
    }
};

inline MPoly a_var(const ModelParams& p, long j) {
    return MPoly::var(p.arity(), static_cast<int>(j));
}
inline MPoly z_var(const ModelParams& p) { return MPoly::var(p.arity(), 0); }

}  // namespace detail

// Number of numerator factors of the q^beta coefficient (used by the
// homogeneity audit: the coefficient is homogeneous of degree
// 1 + #numerator - N*beta once z, H and every a_j count with degree 1).
inline long unstable_numerator_count(long beta, const ModelParams& p) {
    long count = 0;
    for (long i = 0; i < p.M(); ++i) {
        BigRational B(p.weights[i] * (beta + 1), p.d());
        count += static_cast<long>(b_progression(B, BigRational(0), B, true, true).size());
    }
    return count;
}

// q^beta coefficient of the small J-function (the closed unstable form):
// z * prod_i prod_b (-b z - (w_i/d) H) / prod_{b=1..beta} (b z + H)^N in the
// sector <(beta+1)/d>, with the denominator expanded in the nilpotent H and
// the result truncated to the compact-type window.
inline StateClass unstable_coeff_noneq(long beta, const ModelParams& p) {
    Multiplicity m = p.j_sector(beta);
    StateClass out(p);
    long L = ct_dim(m, p);
    if (L < 0) return out;
    int ar = p.arity();
    detail::HJet jet = detail::HJet::unit(ar, L + 1, RatFunc(detail::z_var(p)));
    for (long i = 0; i < p.M(); ++i) {
        BigRational B(p.weights[i] * (beta + 1), p.d());
        for (const BigRational& b : b_progression(B, BigRational(0), B, true, true)) {
            RatFunc zp = RatFunc(detail::z_var(p)) * (-b);
            jet = jet.mul(detail::HJet::linear(ar, L + 1, zp, BigRational(-p.weights[i], p.d())));
        }
    }
    for (long b = 1; b <= beta; ++b) {
        detail::HJet den = detail::HJet::linear(
            ar, L + 1, RatFunc(detail::z_var(p)) * BigRational(b), BigRational(1));
        detail::HJet inv = den.inverse();
        for (long rep = 0; rep < p.N(); ++rep) jet = jet.mul(inv);
    }
    for (long l = 0; l <= L; ++l) out.add(m, l, jet.c[static_cast<size_t>(l)]);
    return out;
}

// Scalar coefficient of 1^j_(<(beta+1)/d>) in the vertex J-function:
// z * prod_i prod_b (-b z - w_i a_j / d) / prod_{j'} prod'_b (b z + a_j - a_j').
inline RatFunc unstable_eq_value(long beta, long j, const ModelParams& p) {
    RatFunc r(detail::z_var(p));
    for (long i = 0; i < p.M(); ++i) {
        BigRational B(p.weights[i] * (beta + 1), p.d());
        for (const BigRational& b : b_progression(B, BigRational(0), B, true, true)) {
            MPoly f = detail::z_var(p) * (-b) - detail::a_var(p, j) * BigRational(p.weights[i], p.d());
            r *= RatFunc(f);
        }
    }
    for (long jp = 1; jp <= p.N(); ++jp) {
        for (long b = 1; b <= beta; ++b) {
            MPoly f = detail::z_var(p) * BigRational(b);
            if (jp != j) f += detail::a_var(p, j) - detail::a_var(p, jp);
            if (f.is_zero()) continue;  // primed product: drop vanishing factors
            r /= RatFunc(f);
        }
    }
    return r;
}

inline EqStateClass unstable_coeff_eq(long beta, long j, const ModelParams& p) {
    EqStateClass out(p);
    out.add(j, p.j_sector(beta), unstable_eq_value(beta, j, p));
    return out;
}

// q^beta coefficient of the first (unstable) sum of iota_* J(q, -z):
// -(z/d) prod_i prod_{0<=b<B_i} (b z - (w_i/d) H) / prod_b (-b z + H)^N.
// The b = 0 numerator factors are exactly the iota_* Euler factors.
inline StateClass iota_j_unstable_coeff(long beta, const ModelParams& p) {
    Multiplicity m = p.j_sector(beta);
    StateClass out(p);
    long L = ct_dim(m, p);
    if (L < 0) return out;
    int ar = p.arity();
    detail::HJet jet = detail::HJet::unit(
        ar, L + 1, RatFunc(detail::z_var(p)) * BigRational(-1, p.d()));
    for (long i = 0; i < p.M(); ++i) {
        BigRational B(p.weights[i] * (beta + 1), p.d());
        for (const BigRational& b : b_progression(B, BigRational(0), B, false, true)) {
            RatFunc zp = RatFunc(detail::z_var(p)) * b;
            jet = jet.mul(detail::HJet::linear(ar, L + 1, zp, BigRational(-p.weights[i], p.d())));
        }
    }
    for (long b = 1; b <= beta; ++b) {
        detail::HJet den = detail::HJet::linear(
            ar, L + 1, RatFunc(detail::z_var(p)) * BigRational(-b), BigRational(1));
        detail::HJet inv = den.inverse();
        for (long rep = 0; rep < p.N(); ++rep) jet = jet.mul(inv);
    }
    for (long l = 0; l <= L; ++l) out.add(m, l, jet.c[static_cast<size_t>(l)]);
    return out;
}

// q^beta summand of the restriction f_{j,m} of iota_* J^eps(q,-z) to the
// coefficient of prod_{k!=j}(a_j - a_k) 1^j_(m); zero unless the sector of
// beta is m.  This is the series whose residues drive the cone recursion.
inline RatFunc iota_unstable_value(long beta, long j, const Multiplicity& m,
                                   const ModelParams& p) {
    if (p.j_sector(beta) != m) return RatFunc::zero(p.arity());
    RatFunc r = RatFunc(detail::z_var(p)) * BigRational(-1, p.d());
    for (long i = 0; i < p.M(); ++i) {
        BigRational B(p.weights[i] * (beta + 1), p.d());
        for (const BigRational& b : b_progression(B, BigRational(0), B, false, true)) {
            MPoly f = detail::z_var(p) * b - detail::a_var(p, j) * BigRational(p.weights[i], p.d());
            r *= RatFunc(f);
        }
    }
    for (long k = 1; k <= p.N(); ++k) {
        for (long b = 0; b <= beta; ++b) {
            MPoly f = -(detail::z_var(p) * BigRational(b));
            if (k != j) f += detail::a_var(p, j) - detail::a_var(p, k);
            if (f.is_zero()) continue;  // primed product
            r /= RatFunc(f);
        }
    }
    return r;
}

// [J^eps]_+ up to q^D: non-negative z-part of the unstable coefficients.
inline QSeries<StateClass> j_plus(const ModelParams& p, long D) {
    QSeries<StateClass> out(D);
    for (long beta = 0; beta <= D; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        out.set(beta, unstable_coeff_noneq(beta, p).nonnegative_z_part());
    }
    return out;
}

// Mirror-map coefficient mu^eps_beta: q^beta coefficient of [J]_+ - z*1.
inline StateClass mu_coeff(long beta, const ModelParams& p) {
    if (beta == 0 || !p.epsilon.unstable(beta)) return StateClass(p);
    return unstable_coeff_noneq(beta, p).nonnegative_z_part();
}

// Vertex mirror-map coefficient nu^{eps,j}_beta: q^beta coefficient of
// [J^{eps,j}]_+ - 1^j z, where [.]_+ keeps the regular-at-zero part of the
// Laurent expansion in z.
inline EqStateClass nu_coeff(long beta, long j, const ModelParams& p) {
    EqStateClass out(p);
    if (beta == 0 || !p.epsilon.unstable(beta)) return out;
    RatFunc v = unstable_eq_value(beta, j, p).nonnegative_part_at_zero();
    out.add(j, p.j_sector(beta), v);
    return out;
}

// The unstable part of iota_* J as a q-series of classes.
inline QSeries<StateClass> iota_j_unstable_series(const ModelParams& p, long D) {
    QSeries<StateClass> out(D);
    for (long beta = 0; beta <= D; ++beta) {
        if (!p.epsilon.unstable(beta)) continue;
        out.set(beta, iota_j_unstable_coeff(beta, p));
    }
    return out;
}

}  // namespace hybridwc
