#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridwc/errors.hpp"
#include "hybridwc/mpoly.hpp"
#include "hybridwc/rational.hpp"

namespace hybridwc {

// Rational function in z and a_1..a_N, kept in multiplicatively factored form
//
//     scal * prod_t p_t ^ e_t      (e_t in Z \ {0}),
//
// where each p_t is a primitive integer polynomial with positive lead term.
// Products built from the contribution formulas stay factored, so residues at
// z = (a_j - a_j')/b are cheap evaluations.  Expansion and gcd reduction
// happen only on demand (equality tests expand the non-common part; the
// canonical string expands everything).
class RatFunc {
public:
    explicit RatFunc(int arity = 1) : arity_(arity), scal_(0) {}

    RatFunc(int arity, const BigRational& c) : arity_(arity), scal_(c) {}

    explicit RatFunc(const MPoly& p) : arity_(p.arity()), scal_(0) {
        if (p.is_zero()) return;
        scal_ = p.content();
        MPoly prim = p.primitive_part();
        if (!prim.is_one()) factors_[prim] = 1;
    }

    static RatFunc zero(int arity) { return RatFunc(arity); }
    static RatFunc one(int arity) { return RatFunc(arity, BigRational(1)); }
    static RatFunc var_z(int arity) { return RatFunc(MPoly::var(arity, 0)); }

    // num/den without full canonicalization (light factor-wise cancellation)
    static RatFunc frac(const MPoly& num, const MPoly& den) {
        if (den.is_zero()) throw DivisionByZero("RatFunc: zero denominator");
        RatFunc r(num);
        RatFunc d(den);
        return r / d;
    }

    int arity() const { return arity_; }
    bool is_zero() const { return scal_.is_zero(); }
    const BigRational& scalar() const { return scal_; }
    const std::map<MPoly, long>& factor_map() const { return factors_; }

    bool depends_on_z() const {
        for (const auto& [p, e] : factors_)
            if (p.depends_on(0)) return true;
        return false;
    }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        a.check_arity(b);
        if (a.is_zero() || b.is_zero()) return zero(a.arity_);
        RatFunc r(a.arity_, a.scal_ * b.scal_);
        r.factors_ = a.factors_;
        for (const auto& [p, e] : b.factors_) r.bump(p, e);
        return r;
    }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    RatFunc& operator*=(const BigRational& c) {
        if (c.is_zero()) return *this = zero(arity_);
        scal_ *= c;
        return *this;
    }
    friend RatFunc operator*(RatFunc a, const BigRational& c) { return a *= c; }
    friend RatFunc operator*(const BigRational& c, RatFunc a) { return a *= c; }

    RatFunc inverse() const {
        if (is_zero()) throw DivisionByZero("RatFunc: inverse of zero");
        RatFunc r(arity_, scal_.inverse());
        for (const auto& [p, e] : factors_) r.factors_[p] = -e;
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.scal_ = -r.scal_;
        return r;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        a.check_arity(b);
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // split off the common factor part C; the residuals have non-negative
        // exponents and expand to polynomials
        RatFunc common(a.arity_, BigRational(1));
        std::map<MPoly, long> ra = a.factors_, rb = b.factors_;
        for (const auto& [p, ea] : a.factors_) {
            auto it = b.factors_.find(p);
            long eb = it == b.factors_.end() ? 0 : it->second;
            long m = std::min(ea, eb);
            if (m != 0) common.factors_[p] = m;
        }
        for (const auto& [p, eb] : b.factors_) {
            if (a.factors_.count(p)) continue;
            long m = std::min(eb, 0L);
            if (m != 0) common.factors_[p] = m;
        }
        for (const auto& [p, m] : common.factors_) {
            if ((ra[p] -= m) == 0) ra.erase(p);
            if ((rb[p] -= m) == 0) rb.erase(p);
        }
        MPoly s = expand_product(a.arity_, a.scal_, ra) + expand_product(a.arity_, b.scal_, rb);
        if (s.is_zero()) return zero(a.arity_);
        // cancel den factors of the common part that divide the new numerator
        BigRational cont = s.content();
        MPoly prim = s.primitive_part();
        for (auto& [p, e] : common.factors_) {
            while (e < 0) {
                auto q = MPoly::divide_exact(prim, p);
                if (!q) break;
                prim = *q;
                ++e;
            }
        }
        RatFunc r(a.arity_, cont * common.scal_);
        for (const auto& [p, e] : common.factors_)
            if (e != 0) r.factors_[p] = e;
        if (!prim.is_one()) r.bump(prim, 1);
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }

    RatFunc pow(long e) const {
        if (e == 0) return one(arity_);
        if (is_zero()) {
            if (e < 0) throw DivisionByZero("RatFunc: 0^negative");
            return *this;
        }
        RatFunc r(arity_, scal_.pow(e));
        for (const auto& [p, f] : factors_) r.factors_[p] = f * e;
        return r;
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).is_zero(); }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    // Fully reduced pair (num, den): integer coefficients, gcd(num, den) = 1,
    // coprime contents, positive den lead.  This is the canonical form.
    std::pair<MPoly, MPoly> canonical_pair() const {
        if (is_zero()) return {MPoly::zero(arity_), MPoly::one(arity_)};
        MPoly num = MPoly::one(arity_), den = MPoly::one(arity_);
        for (const auto& [p, e] : factors_) {
            if (e > 0) num *= p.pow(static_cast<int>(e));
            else den *= p.pow(static_cast<int>(-e));
        }
        MPoly g = MPoly::gcd(num, den);
        if (!g.is_one()) {
            num = MPoly::div_exact(num, g);
            den = MPoly::div_exact(den, g);
        }
        BigRational ratio = scal_ * num.content() / den.content();
        num = num.primitive_part();
        den = den.primitive_part();
        num *= BigRational(ratio.num());
        den *= BigRational(ratio.den());
        return {num, den};
    }

    std::string canonical_string(const std::vector<std::string>& names = {}) const {
        auto [num, den] = canonical_pair();
        return "(" + num.str(names) + ")/(" + den.str(names) + ")";
    }

    // Substitute z -> value (a polynomial in the a-variables only).
    RatFunc eval_z(const MPoly& value) const {
        if (value.depends_on(0)) throw InvalidPole("eval_z: value contains z");
        RatFunc r(arity_, scal_);
        if (is_zero()) return r;
        for (const auto& [p, e] : factors_) {
            MPoly q = p.depends_on(0) ? p.subst(0, value) : p;
            if (q.is_zero()) {
                if (e < 0) throw DivisionByZero("eval_z: evaluation at a pole");
                return zero(arity_);
            }
            r.scal_ *= q.content().pow(e);
            MPoly prim = q.primitive_part();
            if (!prim.is_one()) r.bump(prim, e);
        }
        return r;
    }

    // Substitute z -> -z.
    RatFunc negate_z() const {
        RatFunc r(arity_, scal_);
        if (is_zero()) return r;
        MPoly mz = -MPoly::var(arity_, 0);
        for (const auto& [p, e] : factors_) {
            MPoly q = p.depends_on(0) ? p.subst(0, mz) : p;
            r.scal_ *= q.content().pow(e);
            MPoly prim = q.primitive_part();
            if (!prim.is_one()) r.bump(prim, e);
        }
        return r;
    }

    RatFunc permute_vars(const std::vector<int>& perm) const {
        RatFunc r(arity_, scal_);
        if (is_zero()) return r;
        for (const auto& [p, e] : factors_) {
            MPoly q = p.permute_vars(perm);
            r.scal_ *= q.content().pow(e);
            MPoly prim = q.primitive_part();
            if (!prim.is_one()) r.bump(prim, e);
        }
        return r;
    }

    // z-adic valuation: order of vanishing at z = 0 (negative for a pole).
    long z_valuation() const {
        if (is_zero()) throw InternalInvariantViolation("z_valuation of zero");
        long v = 0;
        for (const auto& [p, e] : factors_) v += e * p.valuation_in(0);
        return v;
    }

    // Upper z-degree (as a rational function: deg num - deg den).
    long z_degree() const {
        if (is_zero()) throw InternalInvariantViolation("z_degree of zero");
        long d = 0;
        for (const auto& [p, e] : factors_) d += e * p.degree_in(0);
        return d;
    }

    enum class Direction { AtZero, AtInfinity };

    // Exact Laurent coefficients of z^k for k in [k_min, k_max].
    std::map<long, RatFunc> laurent_z(Direction dir, long k_min, long k_max) const {
        std::map<long, RatFunc> out;
        for (long k = k_min; k <= k_max; ++k) out.emplace(k, zero(arity_));
        if (is_zero() || k_min > k_max) return out;
        if (dir == Direction::AtZero) {
            long K = z_valuation();
            long order = k_max - K;
            if (order < 0) return out;
            auto series = factor_series_at_zero(order);
            for (long k = std::max(k_min, K); k <= k_max; ++k)
                out[k] = series[static_cast<size_t>(k - K)];
        } else {
            long D = z_degree();
            long order = D - k_min;
            if (order < 0) return out;
            auto series = factor_series_at_infinity(order);
            for (long k = k_min; k <= std::min(k_max, D); ++k)
                out[k] = series[static_cast<size_t>(D - k)];
        }
        return out;
    }

    // Residue at z = c (c free of z): the (z - c)^{-1} Laurent coefficient.
    // Returns exact zero when f is regular at c.
    RatFunc residue_z(const MPoly& c) const {
        if (c.depends_on(0)) throw InvalidPole("residue_z: pole location contains z");
        if (is_zero()) return zero(arity_);
        MPoly zplusc = MPoly::var(arity_, 0) + c;
        // shift each factor to put the pole at z = 0
        std::vector<std::pair<MPoly, long>> shifted;
        long K = 0;
        for (const auto& [p, e] : factors_) {
            MPoly q = p.depends_on(0) ? p.subst(0, zplusc) : p;
            long v = q.valuation_in(0);
            K += e * v;
            shifted.emplace_back(std::move(q), e);
        }
        if (K >= 0) return zero(arity_);
        long order = -1 - K;
        auto series = product_series(shifted, order, /*at_zero=*/true);
        return series[static_cast<size_t>(order)] * scal_;
    }

    // Sum of the z^{<0} Laurent terms at z = 0 (a rational function again).
    RatFunc principal_part_at_zero() const {
        if (is_zero()) return *this;
        long K = z_valuation();
        if (K >= 0) return zero(arity_);
        auto coeffs = laurent_z(Direction::AtZero, K, -1);
        RatFunc out = zero(arity_);
        for (const auto& [k, c] : coeffs) {
            RatFunc zk(arity_, BigRational(1));
            zk.factors_[MPoly::var(arity_, 0)] = k;
            out += c * zk;
        }
        return out;
    }

    // f minus its principal part: the regular-at-zero piece whose power
    // series is the non-negative half of the Laurent expansion.
    RatFunc nonnegative_part_at_zero() const { return *this - principal_part_at_zero(); }

    // For Laurent polynomials in z (every z-dependent den factor is z itself):
    // the full map z-exponent -> z-free coefficient.
    std::map<long, RatFunc> z_laurent_map() const {
        std::map<long, RatFunc> out;
        if (is_zero()) return out;
        for (const auto& [p, e] : factors_)
            if (e < 0 && p.depends_on(0) && !is_z_monomial(p))
                throw InternalInvariantViolation("z_laurent_map: not a z-Laurent polynomial");
        long lo = z_valuation(), hi = z_degree();
        auto full = laurent_z(Direction::AtZero, lo, hi);
        for (auto& [k, c] : full)
            if (!c.is_zero()) out.emplace(k, std::move(c));
        return out;
    }

    // The polynomial content when the denominator is trivial.
    std::optional<MPoly> as_polynomial() const {
        auto [num, den] = canonical_pair();
        if (!den.is_constant()) return std::nullopt;
        MPoly r = num;
        r *= den.constant_value().inverse();
        return r;
    }

private:
    static bool is_z_monomial(const MPoly& p) {
        if (p.terms().size() != 1) return false;
        const auto& ev = p.terms().begin()->first;
        for (size_t i = 1; i < ev.size(); ++i)
            if (ev[i] != 0) return false;
        return true;
    }

    void check_arity(const RatFunc& o) const {
        if (arity_ != o.arity_)
            throw InternalInvariantViolation("RatFunc: arity mismatch");
    }

    void bump(const MPoly& p, long e) {
        auto [it, inserted] = factors_.try_emplace(p, e);
        if (!inserted) {
            it->second += e;
            if (it->second == 0) factors_.erase(it);
        }
    }

    static MPoly expand_product(int arity, const BigRational& scal,
                                const std::map<MPoly, long>& fs) {
        MPoly r = MPoly::constant(arity, scal);
        for (const auto& [p, e] : fs) {
            if (e < 0) throw InternalInvariantViolation("expand_product: negative exponent");
            r *= p.pow(static_cast<int>(e));
        }
        return r;
    }

    // Power series (in z) of prod shifted_p^e / z^{e*val}, coefficients are
    // z-free rational functions in the a-variables.
    std::vector<RatFunc> product_series(const std::vector<std::pair<MPoly, long>>& fs,
                                        long order, bool at_zero) const {
        std::vector<RatFunc> acc(static_cast<size_t>(order) + 1, zero(arity_));
        acc[0] = one(arity_);
        for (const auto& [q, e] : fs) {
            auto tail = tail_series(q, order, at_zero);
            auto base = (e > 0) ? tail : series_inverse(tail, order);
            long reps = e > 0 ? e : -e;
            for (long i = 0; i < reps; ++i) acc = series_mul(acc, base, order);
        }
        return acc;
    }

    std::vector<RatFunc> factor_series_at_zero(long order) const {
        std::vector<std::pair<MPoly, long>> fs(factors_.begin(), factors_.end());
        auto s = product_series(fs, order, true);
        for (auto& c : s) c *= scal_;
        return s;
    }

    std::vector<RatFunc> factor_series_at_infinity(long order) const {
        std::vector<std::pair<MPoly, long>> fs(factors_.begin(), factors_.end());
        auto s = product_series(fs, order, false);
        for (auto& c : s) c *= scal_;
        return s;
    }

    // Coefficients of q/z^{val(q)} (at zero) or of the reversed polynomial
    // (at infinity), as z-free rational functions, up to the given order.
    std::vector<RatFunc> tail_series(const MPoly& q, long order, bool at_zero) const {
        auto uni = q.univariate_in(0);
        std::vector<RatFunc> s(static_cast<size_t>(order) + 1, zero(arity_));
        if (at_zero) {
            int v = uni.begin()->first;
            for (const auto& [k, coeff] : uni)
                if (k - v <= order) s[static_cast<size_t>(k - v)] = RatFunc(coeff);
        } else {
            int d = uni.rbegin()->first;
            for (const auto& [k, coeff] : uni)
                if (d - k <= order) s[static_cast<size_t>(d - k)] = RatFunc(coeff);
        }
        return s;
    }

    std::vector<RatFunc> series_mul(const std::vector<RatFunc>& a,
                                    const std::vector<RatFunc>& b, long order) const {
        std::vector<RatFunc> r(static_cast<size_t>(order) + 1, zero(arity_));
        for (size_t i = 0; i <= static_cast<size_t>(order); ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; i + j <= static_cast<size_t>(order); ++j) {
                if (b[j].is_zero()) continue;
                r[i + j] += a[i] * b[j];
            }
        }
        return r;
    }

    std::vector<RatFunc> series_inverse(const std::vector<RatFunc>& a, long order) const {
        if (a[0].is_zero())
            throw InternalInvariantViolation("series_inverse: zero constant term");
        std::vector<RatFunc> r(static_cast<size_t>(order) + 1, zero(arity_));
        RatFunc inv0 = a[0].inverse();
        r[0] = inv0;
        for (size_t k = 1; k <= static_cast<size_t>(order); ++k) {
            RatFunc s = zero(arity_);
            for (size_t i = 1; i <= k; ++i)
                if (!a[i].is_zero()) s += a[i] * r[k - i];
            r[k] = -(inv0 * s);
        }
        return r;
    }

    int arity_;
    BigRational scal_;
    std::map<MPoly, long> factors_;
};

// The [OP] normalize entry point: canonical form of a raw num/den pair.
// Equality of rational functions is equality of canonical pairs.
inline RatFunc normalize(const MPoly& num, const MPoly& den) {
    RatFunc r = RatFunc::frac(num, den);
    auto [n, d] = r.canonical_pair();
    return RatFunc::frac(n, d);
}

}  // namespace hybridwc
