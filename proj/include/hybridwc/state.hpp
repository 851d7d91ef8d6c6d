#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hybridwc/errors.hpp"
#include "hybridwc/model.hpp"
#include "hybridwc/mpoly.hpp"
#include "hybridwc/ratfunc.hpp"

namespace hybridwc {

// F_m = { i : m * w_i is an integer }, 1-based indices.
inline std::vector<long> broad_set(const Multiplicity& m, const ModelParams& p) {
    std::vector<long> out;
    for (long i = 0; i < p.M(); ++i)
        if ((m.numerator() * p.weights[i]) % p.d() == 0) out.push_back(i + 1);
    return out;
}

// Top H-power surviving the compact-type truncation in sector m; negative
// when the sector carries no compact-type classes at all.
inline long ct_dim(const Multiplicity& m, const ModelParams& p) {
    return p.N() - 1 - static_cast<long>(broad_set(m, p).size());
}

// Element of the compact-type state space in the sector basis: finitely many
// (sector m, H-power l) entries with rational-function coefficients.
// Compact-type truncation happens at insertion: entries beyond ct_dim(m) are
// dropped, which is what makes every downstream quantity well defined.
class StateClass {
public:
    using Key = std::pair<long, long>;  // (sector numerator a, power l)

    explicit StateClass(const ModelParams& p) : p_(&p) {}

    const ModelParams& params() const { return *p_; }
    const std::map<Key, RatFunc>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    void add(const Multiplicity& m, long l, const RatFunc& coeff) {
        if (coeff.is_zero() || l < 0) return;
        if (l > ct_dim(m, *p_)) return;  // compact-type truncation
        Key k{m.numerator(), l};
        auto [it, inserted] = entries_.try_emplace(k, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    RatFunc coeff(const Multiplicity& m, long l) const {
        auto it = entries_.find({m.numerator(), l});
        return it == entries_.end() ? RatFunc::zero(p_->arity()) : it->second;
    }

    StateClass& operator+=(const StateClass& o) {
        for (const auto& [k, c] : o.entries_)
            add(Multiplicity::from_numerator(k.first, p_->d()), k.second, c);
        return *this;
    }
    friend StateClass operator+(StateClass a, const StateClass& b) { return a += b; }

    StateClass operator-() const {
        StateClass r(*p_);
        for (const auto& [k, c] : entries_) r.entries_[k] = -c;
        return r;
    }
    friend StateClass operator-(const StateClass& a, const StateClass& b) { return a + (-b); }

    StateClass scaled(const RatFunc& s) const {
        StateClass r(*p_);
        if (s.is_zero()) return r;
        for (const auto& [k, c] : entries_) {
            RatFunc v = c * s;
            if (!v.is_zero()) r.entries_[k] = v;
        }
        return r;
    }

    StateClass negate_z() const {
        StateClass r(*p_);
        for (const auto& [k, c] : entries_) r.entries_[k] = c.negate_z();
        return r;
    }

    // keep only entries whose coefficients' Laurent expansions have
    // non-negative z-powers (coefficients here are z-Laurent polynomials)
    StateClass nonnegative_z_part() const {
        StateClass r(*p_);
        for (const auto& [k, c] : entries_) {
            RatFunc kept = RatFunc::zero(p_->arity());
            for (const auto& [zk, coeff] : c.z_laurent_map()) {
                if (zk < 0) continue;
                kept += coeff * RatFunc(MPoly::var(p_->arity(), 0).pow(static_cast<int>(zk)));
            }
            if (!kept.is_zero()) r.entries_[k] = kept;
        }
        return r;
    }

    friend bool operator==(const StateClass& a, const StateClass& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const StateClass& a, const StateClass& b) { return !(a == b); }

private:
    const ModelParams* p_;
    std::map<Key, RatFunc> entries_;
};

// Element of the equivariant state space in the fixed-point basis: entries
// are coefficients of 1^j_(m), rational functions of z and the a-variables.
class EqStateClass {
public:
    using Key = std::pair<long, long>;  // (fixed point j, sector numerator a)

    explicit EqStateClass(const ModelParams& p) : p_(&p) {}

    const ModelParams& params() const { return *p_; }
    const std::map<Key, RatFunc>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    void add(long j, const Multiplicity& m, const RatFunc& coeff) {
        if (coeff.is_zero()) return;
        if (j < 1 || j > p_->N()) throw InternalInvariantViolation("fixed point out of range");
        Key k{j, m.numerator()};
        auto [it, inserted] = entries_.try_emplace(k, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    RatFunc coeff(long j, const Multiplicity& m) const {
        auto it = entries_.find({j, m.numerator()});
        return it == entries_.end() ? RatFunc::zero(p_->arity()) : it->second;
    }

    EqStateClass& operator+=(const EqStateClass& o) {
        for (const auto& [k, c] : o.entries_)
            add(k.first, Multiplicity::from_numerator(k.second, p_->d()), c);
        return *this;
    }
    friend EqStateClass operator+(EqStateClass a, const EqStateClass& b) { return a += b; }

    EqStateClass operator-() const {
        EqStateClass r(*p_);
        for (const auto& [k, c] : entries_) r.entries_[k] = -c;
        return r;
    }
    friend EqStateClass operator-(const EqStateClass& a, const EqStateClass& b) {
        return a + (-b);
    }

    EqStateClass scaled(const RatFunc& s) const {
        EqStateClass r(*p_);
        if (s.is_zero()) return r;
        for (const auto& [k, c] : entries_) {
            RatFunc v = c * s;
            if (!v.is_zero()) r.entries_[k] = v;
        }
        return r;
    }

    EqStateClass negate_z() const {
        EqStateClass r(*p_);
        for (const auto& [k, c] : entries_) r.entries_[k] = c.negate_z();
        return r;
    }

    friend bool operator==(const EqStateClass& a, const EqStateClass& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const EqStateClass& a, const EqStateClass& b) { return !(a == b); }

private:
    const ModelParams* p_;
    std::map<Key, RatFunc> entries_;
};

// (H^l1_(m1), H^l2_(m2)) = (1/d) prod_{i in F_m1} (-w_i/d) when the sectors
// are opposite and l1 + l2 fills the compact-type dimension; zero otherwise.
inline BigRational pair_noneq(const Multiplicity& m1, long l1, const Multiplicity& m2, long l2,
                              const ModelParams& p) {
    if (l1 < 0 || l1 > ct_dim(m1, p) || l2 < 0 || l2 > ct_dim(m2, p))
        throw OutsideCompactType("pair_noneq: class outside the compact-type state space");
    if ((m1.numerator() + m2.numerator()) % p.d() != 0) return BigRational(0);
    auto F = broad_set(m1, p);
    if (l1 + l2 != p.N() - 1 - static_cast<long>(F.size())) return BigRational(0);
    BigRational v(1, p.d());
    for (long i : F) v *= BigRational(-p.weights[i - 1], p.d());
    return v;
}

// eta^j_(m): the diagonal coefficient of the equivariant pairing in the
// fixed-point basis.
inline RatFunc eta_pairing(long j, const Multiplicity& m, const ModelParams& p) {
    int ar = p.arity();
    RatFunc num = RatFunc::one(ar);
    for (long i : broad_set(m, p))
        num *= RatFunc(MPoly::var(ar, static_cast<int>(j)) *
                       BigRational(-p.weights[i - 1], p.d()));
    RatFunc den = RatFunc(ar, BigRational(p.d()));
    for (long k = 1; k <= p.N(); ++k) {
        if (k == j) continue;
        den *= RatFunc(MPoly::var(ar, static_cast<int>(j)) - MPoly::var(ar, static_cast<int>(k)));
    }
    return num / den;
}

// (1^j1_(m1), 1^j2_(m2)): diagonal in j, nonzero only for opposite sectors.
inline RatFunc pair_eq(long j1, const Multiplicity& m1, long j2, const Multiplicity& m2,
                       const ModelParams& p) {
    if (j1 != j2 || (m1.numerator() + m2.numerator()) % p.d() != 0)
        return RatFunc::zero(p.arity());
    return eta_pairing(j1, m1, p);
}

// iota_* Euler factor in the non-equivariant theory: (1/d) prod (-w_i/d) H
// per broad index; powers rise by |F_m| (vanishing beyond the truncation).
inline StateClass iota_star(const StateClass& x) {
    const ModelParams& p = x.params();
    StateClass r(p);
    for (const auto& [k, c] : x.entries()) {
        Multiplicity m = Multiplicity::from_numerator(k.first, p.d());
        auto F = broad_set(m, p);
        BigRational s(1, p.d());
        for (long i : F) s *= BigRational(-p.weights[i - 1], p.d());
        long l = k.second + static_cast<long>(F.size());
        if (l <= p.N() - 1) r.add(m, l, c * s);
    }
    return r;
}

// iota_* at the fixed point P_j: multiply by (1/d) prod (-w_i a_j / d).
inline RatFunc iota_factor_eq(long j, const Multiplicity& m, const ModelParams& p) {
    int ar = p.arity();
    RatFunc s(ar, BigRational(1, p.d()));
    for (long i : broad_set(m, p))
        s *= RatFunc(MPoly::var(ar, static_cast<int>(j)) * BigRational(-p.weights[i - 1], p.d()));
    return s;
}

inline EqStateClass iota_star(const EqStateClass& x) {
    const ModelParams& p = x.params();
    EqStateClass r(p);
    for (const auto& [k, c] : x.entries()) {
        Multiplicity m = Multiplicity::from_numerator(k.second, p.d());
        r.add(k.first, m, c * iota_factor_eq(k.first, m, p));
    }
    return r;
}

namespace detail {

// t^0 term of a rational function along the ray a_j = c_j t, t -> 0.
// Computed factor by factor: each factor contributes its t-valuation and
// leading z-coefficient exactly.
inline RatFunc ray_limit(const RatFunc& f, const ModelParams& p) {
    int ar = p.arity();
    if (f.is_zero()) return RatFunc::zero(ar);
    std::vector<BigRational> ray;
    for (long j = 1; j <= p.N(); ++j) ray.emplace_back(j);
    long val = 0;
    RatFunc lead = RatFunc(ar, f.scalar());
    for (const auto& [q, e] : f.factor_map()) {
        MPoly sub = q.subst_a_ray(ray);  // arity 2: (z, t)
        if (sub.is_zero()) {
            if (e > 0) return RatFunc::zero(ar);
            throw NoNonequivariantLimit("ray substitution annihilates a denominator factor");
        }
        int v = sub.valuation_in(1);
        val += e * v;
        MPoly lead2 = sub.univariate_in(1).begin()->second;  // t-free, z only
        MPoly lifted(ar);
        for (const auto& [ev, c] : lead2.terms()) {
            ExpVec up(ar, 0);
            up[0] = ev[0];
            lifted += MPoly::monomial(ar, up, c);
        }
        lead *= RatFunc(lifted).pow(e);
    }
    if (val < 0)
        throw NoNonequivariantLimit("negative t-order survives the a -> 0 limit");
    if (val > 0) return RatFunc::zero(ar);
    return lead;
}

// H-power coefficients of prod_{k != j} (H - a_k) as polynomials in the a's.
inline std::vector<MPoly> lagrange_numerator(long j, const ModelParams& p) {
    int ar = p.arity();
    std::vector<MPoly> coeffs{MPoly::one(ar)};  // coeffs[l] = coefficient of H^l
    for (long k = 1; k <= p.N(); ++k) {
        if (k == j) continue;
        std::vector<MPoly> next(coeffs.size() + 1, MPoly::zero(ar));
        for (size_t l = 0; l < coeffs.size(); ++l) {
            next[l + 1] += coeffs[l];
            next[l] -= coeffs[l] * MPoly::var(ar, static_cast<int>(k));
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

}  // namespace detail

// The non-equivariant limit: per sector, Lagrange-interpolate the fixed-point
// values through the nodes H = a_j, then send a_j -> 0 along the fixed ray
// a_j = j*t and keep the t^0 term.  Throws NoNonequivariantLimit when a
// negative t-power survives.
inline StateClass noneq_limit(const EqStateClass& x, const ModelParams& p) {
    StateClass out(p);
    // group entries by sector
    std::map<long, std::vector<std::pair<long, RatFunc>>> by_sector;
    for (const auto& [k, c] : x.entries()) by_sector[k.second].emplace_back(k.first, c);
    for (const auto& [a, vals] : by_sector) {
        Multiplicity m = Multiplicity::from_numerator(a, p.d());
        // interpolant coefficients in H
        std::vector<RatFunc> P(static_cast<size_t>(p.N()), RatFunc::zero(p.arity()));
        for (const auto& [j, fj] : vals) {
            auto numer = detail::lagrange_numerator(j, p);
            RatFunc denom = RatFunc::one(p.arity());
            for (long k = 1; k <= p.N(); ++k) {
                if (k == j) continue;
                denom *= RatFunc(MPoly::var(p.arity(), static_cast<int>(j)) -
                                 MPoly::var(p.arity(), static_cast<int>(k)));
            }
            RatFunc scale = fj / denom;
            for (size_t l = 0; l < P.size(); ++l) {
                if (numer[l].is_zero()) continue;
                P[l] += RatFunc(numer[l]) * scale;
            }
        }
        for (size_t l = 0; l < P.size(); ++l) {
            if (P[l].is_zero()) continue;
            out.add(m, static_cast<long>(l), detail::ray_limit(P[l], p));
        }
    }
    return out;
}

// Equivariant lift of a sector-basis class: H^l restricts to a_j^l at P_j.
inline EqStateClass equivariant_lift(const StateClass& x) {
    const ModelParams& p = x.params();
    EqStateClass r(p);
    for (const auto& [k, c] : x.entries()) {
        Multiplicity m = Multiplicity::from_numerator(k.first, p.d());
        for (long j = 1; j <= p.N(); ++j) {
            RatFunc aj = RatFunc(MPoly::var(p.arity(), static_cast<int>(j)));
            r.add(j, m, c * aj.pow(k.second));
        }
    }
    return r;
}

}  // namespace hybridwc
