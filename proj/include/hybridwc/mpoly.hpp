#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridwc/errors.hpp"
#include "hybridwc/rational.hpp"

namespace hybridwc {

// Exponent vector of fixed arity.  By convention variable 0 is z and
// variables 1..N are a_1..a_N; other arities (e.g. (z,t)) reuse the type.
using ExpVec = std::vector<int>;

// Graded-lexicographic order with earlier variables dominating (z > a1 > ...).
struct GrlexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        long da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da < db;
        // lex: first differing variable, a "less" if its exponent is smaller
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

// Sparse multivariate polynomial over BigRational.  No zero coefficients are
// stored; the term map is ordered by GrlexLess so rbegin() is the lead term.
class MPoly {
public:
    using TermMap = std::map<ExpVec, BigRational, GrlexLess>;

    explicit MPoly(int arity = 1) : arity_(arity) {}

    static MPoly constant(int arity, const BigRational& c) {
        MPoly p(arity);
        if (!c.is_zero()) p.terms_[ExpVec(arity, 0)] = c;
        return p;
    }
    static MPoly zero(int arity) { return MPoly(arity); }
    static MPoly one(int arity) { return constant(arity, BigRational(1)); }
    static MPoly var(int arity, int v, int e = 1) {
        MPoly p(arity);
        ExpVec ev(arity, 0);
        ev[v] = e;
        p.terms_[ev] = BigRational(1);
        return p;
    }
    static MPoly monomial(int arity, const ExpVec& ev, const BigRational& c) {
        MPoly p(arity);
        if (!c.is_zero()) p.terms_[ev] = c;
        return p;
    }

    int arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        for (int e : terms_.begin()->first)
            if (e != 0) return false;
        return true;
    }
    bool is_one() const { return is_constant() && !is_zero() && terms_.begin()->second.is_one(); }

    BigRational constant_value() const {
        if (is_zero()) return BigRational(0);
        if (!is_constant()) throw InternalInvariantViolation("MPoly: not a constant");
        return terms_.begin()->second;
    }

    long total_degree() const {
        if (is_zero()) return -1;
        long d = 0;
        for (int e : terms_.rbegin()->first) d += e;
        return d;
    }
    int degree_in(int v) const {
        int d = -1;
        for (const auto& [ev, c] : terms_) d = std::max(d, ev[v]);
        return d;
    }
    bool depends_on(int v) const { return degree_in(v) > 0; }

    const std::pair<const ExpVec, BigRational>& lead() const {
        if (is_zero()) throw InternalInvariantViolation("MPoly: lead of zero");
        return *terms_.rbegin();
    }

    MPoly operator-() const {
        MPoly r(arity_);
        for (const auto& [ev, c] : terms_) r.terms_[ev] = -c;
        return r;
    }
    MPoly& operator+=(const MPoly& o) {
        check_arity(o);
        for (const auto& [ev, c] : o.terms_) add_term(ev, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        check_arity(o);
        for (const auto& [ev, c] : o.terms_) add_term(ev, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check_arity(b);
        MPoly r(a.arity_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec ev(a.arity_);
                for (int i = 0; i < a.arity_; ++i) ev[i] = ea[i] + eb[i];
                r.add_term(ev, ca * cb);
            }
        }
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly& operator*=(const BigRational& c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        for (auto& [ev, v] : terms_) v *= c;
        return *this;
    }
    friend MPoly operator*(MPoly a, const BigRational& c) { return a *= c; }
    friend MPoly operator*(const BigRational& c, MPoly a) { return a *= c; }

    MPoly pow(int e) const {
        if (e < 0) throw InternalInvariantViolation("MPoly: negative power");
        MPoly r = one(arity_), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b = (e >>= 1) ? b * b : b;
        }
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        if (a.arity_ != b.arity_ || a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        for (const auto& [ev, c] : b.terms_) {
            if (ia->first != ev || ia->second != c) return false;
            ++ia;
        }
        return true;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    // Deterministic total order on polynomials (for factor maps / sorting).
    friend bool operator<(const MPoly& a, const MPoly& b) {
        if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
        auto ia = a.terms_.rbegin(), ib = b.terms_.rbegin();
        GrlexLess lt;
        for (; ia != a.terms_.rend() && ib != b.terms_.rend(); ++ia, ++ib) {
            if (lt(ia->first, ib->first)) return true;
            if (lt(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.terms_.rend() && ib != b.terms_.rend();
    }

    // View as univariate in variable v: z-degree -> coefficient polynomial
    // (coefficient keeps full arity with exponent 0 in v).
    std::map<int, MPoly> univariate_in(int v) const {
        std::map<int, MPoly> out;
        for (const auto& [ev, c] : terms_) {
            ExpVec rest = ev;
            int k = rest[v];
            rest[v] = 0;
            auto it = out.find(k);
            if (it == out.end()) it = out.emplace(k, MPoly(arity_)).first;
            it->second.add_term(rest, c);
        }
        return out;
    }

    int valuation_in(int v) const {
        if (is_zero()) throw InternalInvariantViolation("MPoly: valuation of zero");
        int m = INT32_MAX;
        for (const auto& [ev, c] : terms_) m = std::min(m, ev[v]);
        return m;
    }

    // Substitute variable v by the polynomial value (same arity).
    MPoly subst(int v, const MPoly& value) const {
        auto uni = univariate_in(v);
        MPoly r(arity_);
        MPoly p = one(arity_);
        int prev = 0;
        for (const auto& [k, coeff] : uni) {
            for (; prev < k; ++prev) p *= value;
            r += coeff * p;
        }
        return r;
    }

    // Substitute a_j -> c_j * t: maps (z, a1..aN) arity N+1 into arity 2 (z, t).
    MPoly subst_a_ray(const std::vector<BigRational>& c) const {
        MPoly r(2);
        for (const auto& [ev, coeff] : terms_) {
            BigRational val = coeff;
            int tdeg = 0;
            for (size_t j = 1; j < ev.size(); ++j) {
                if (ev[j] != 0) {
                    val *= c[j - 1].pow(ev[j]);
                    tdeg += ev[j];
                }
            }
            if (!val.is_zero()) r.add_term(ExpVec{ev[0], tdeg}, val);
        }
        return r;
    }

    // Relabel variables: exponent of variable i moves to perm[i].
    MPoly permute_vars(const std::vector<int>& perm) const {
        MPoly r(arity_);
        for (const auto& [ev, c] : terms_) {
            ExpVec e2(arity_, 0);
            for (int i = 0; i < arity_; ++i) e2[perm[i]] += ev[i];
            r.add_term(e2, c);
        }
        return r;
    }

    MPoly derivative(int v) const {
        MPoly r(arity_);
        for (const auto& [ev, c] : terms_) {
            if (ev[v] == 0) continue;
            ExpVec e2 = ev;
            e2[v] -= 1;
            r.add_term(e2, c * BigRational(ev[v]));
        }
        return r;
    }

    // content * primitive_part() == *this; primitive part has coprime integer
    // coefficients and positive lead coefficient.  content(0) = 0.
    BigRational content() const {
        if (is_zero()) return BigRational(0);
        mpz_class g = 0, l = 1;
        for (const auto& [ev, c] : terms_) {
            g = gcd_z(g, c.num());
            l = lcm_z(l, c.den());
        }
        BigRational cont(mpq_class(g, l));
        if (lead().second.sgn() < 0) cont = -cont;
        return cont;
    }
    MPoly primitive_part() const {
        if (is_zero()) return *this;
        BigRational c = content().inverse();
        MPoly r = *this;
        r *= c;
        return r;
    }

    // Exact multivariate division; returns nullopt when b does not divide a.
    static std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b) {
        if (b.is_zero()) throw DivisionByZero("MPoly: division by zero polynomial");
        if (a.is_zero()) return MPoly::zero(a.arity_);
        a.check_arity(b);
        MPoly q(a.arity_), r = a;
        const auto& [eb, cb] = b.lead();
        while (!r.is_zero()) {
            const auto& [er, cr] = r.lead();
            ExpVec ev(a.arity_);
            for (int i = 0; i < a.arity_; ++i) {
                ev[i] = er[i] - eb[i];
                if (ev[i] < 0) return std::nullopt;
            }
            MPoly t = monomial(a.arity_, ev, cr / cb);
            q += t;
            r -= t * b;
        }
        return q;
    }

    static bool divides(const MPoly& b, const MPoly& a) {
        return divide_exact(a, b).has_value();
    }

    static MPoly div_exact(const MPoly& a, const MPoly& b) {
        auto q = divide_exact(a, b);
        if (!q) throw InternalInvariantViolation("div_exact: division is not exact");
        return *q;
    }

    // GCD over Q[x...], normalized integer-primitive with positive lead.
    static MPoly gcd(const MPoly& a, const MPoly& b) {
        if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
        if (b.is_zero()) return a.primitive_part();
        a.check_arity(b);
        MPoly pa = a.primitive_part(), pb = b.primitive_part();
        if (pa.is_constant() || pb.is_constant()) return one(a.arity_);
        if (certainly_coprime(pa, pb)) return one(a.arity_);
        int v = -1;
        for (int i = 0; i < a.arity_ && v < 0; ++i)
            if (pa.depends_on(i) || pb.depends_on(i)) v = i;
        if (!pa.depends_on(v)) return gcd(pa, content_in(pb, v));
        if (!pb.depends_on(v)) return gcd(pb, content_in(pa, v));

        MPoly ca = content_in(pa, v), cb = content_in(pb, v);
        MPoly c = gcd(ca, cb);
        MPoly P = div_exact(pa, ca), Q = div_exact(pb, cb);
        if (P.degree_in(v) < Q.degree_in(v)) std::swap(P, Q);
        // subresultant PRS: divides each pseudo-remainder by the predicted
        // factor, keeping coefficient growth polynomial
        MPoly g = one(a.arity_), h = one(a.arity_);
        while (true) {
            int delta = P.degree_in(v) - Q.degree_in(v);
            MPoly r = pseudo_rem(P, Q, v);
            if (r.is_zero()) break;
            MPoly lp = Q.univariate_in(v).rbegin()->second;
            MPoly divisor = g * h.pow(delta);
            P = Q;
            Q = div_exact(r, divisor);
            g = lp;
            // h = g^delta h^{1-delta}
            if (delta == 0) {
                // h unchanged
            } else if (delta == 1) {
                h = g;
            } else {
                h = div_exact(g.pow(delta), h.pow(delta - 1));
            }
            if (Q.degree_in(v) == 0) return c;  // coprime in v
        }
        MPoly out = c * div_exact(Q, content_in(Q, v));
        return out.primitive_part();
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [ev, c] = *it;
            BigRational ac = c.abs();
            if (first) {
                if (c.sgn() < 0) out += "-";
                first = false;
            } else {
                out += c.sgn() < 0 ? " - " : " + ";
            }
            bool has_vars = false;
            std::string mono;
            for (size_t i = 0; i < ev.size(); ++i) {
                if (ev[i] == 0) continue;
                if (has_vars) mono += "*";
                mono += var_name(names, static_cast<int>(i));
                if (ev[i] != 1) mono += "^" + std::to_string(ev[i]);
                has_vars = true;
            }
            if (!has_vars) {
                out += ac.str();
            } else {
                if (!ac.is_one()) out += ac.str() + "*";
                out += mono;
            }
        }
        return out;
    }

private:
    void check_arity(const MPoly& o) const {
        if (arity_ != o.arity_)
            throw InternalInvariantViolation("MPoly: arity mismatch");
    }
    void add_term(const ExpVec& ev, const BigRational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(ev, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    static std::string var_name(const std::vector<std::string>& names, int i) {
        if (i < static_cast<int>(names.size())) return names[i];
        if (i == 0) return "z";
        return "a" + std::to_string(i);
    }

    // Specialization bound: deg_v gcd(A,B) <= deg gcd(A|_r, B|_r) for any
    // evaluation r of the remaining variables, so a degree-0 specialized gcd
    // in every shared variable certifies coprimality up to content, and the
    // contents of primitive polynomials are trivial.
    static bool certainly_coprime(const MPoly& a, const MPoly& b) {
        for (int v = 0; v < a.arity_; ++v) {
            if (!a.depends_on(v) || !b.depends_on(v)) continue;
            bool certified = false;
            for (int attempt = 0; attempt < 4 && !certified; ++attempt) {
                auto ua = specialize_except(a, v, attempt);
                auto ub = specialize_except(b, v, attempt);
                if (ua.empty() || ub.empty()) continue;  // unlucky evaluation
                certified = univariate_gcd_degree(ua, ub) == 0;
            }
            if (!certified) return false;
        }
        // a common factor can only involve variables shared by both sides,
        // and every shared variable was certified degree-zero
        return true;
    }

    // substitute fixed small primes for every variable except v
    static std::map<int, BigRational> specialize_except(const MPoly& p, int v, int attempt) {
        static const long points[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                      37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
        std::map<int, BigRational> out;
        for (const auto& [ev, c] : p.terms_) {
            BigRational val = c;
            for (size_t i = 0; i < ev.size(); ++i) {
                if (static_cast<int>(i) == v || ev[i] == 0) continue;
                val *= BigRational(points[(i + 5 * static_cast<size_t>(attempt)) % 20])
                           .pow(ev[i]);
            }
            auto [it, inserted] = out.try_emplace(ev[static_cast<size_t>(v)], val);
            if (!inserted) {
                it->second += val;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    }

    static int univariate_gcd_degree(std::map<int, BigRational> a,
                                     std::map<int, BigRational> b) {
        while (!b.empty()) {
            // a mod b by repeated lead cancellation
            while (!a.empty() && a.rbegin()->first >= b.rbegin()->first) {
                int shift = a.rbegin()->first - b.rbegin()->first;
                BigRational f = a.rbegin()->second / b.rbegin()->second;
                for (const auto& [k, c] : b) {
                    auto [it, inserted] = a.try_emplace(k + shift, -(f * c));
                    if (!inserted) {
                        it->second -= f * c;
                        if (it->second.is_zero()) a.erase(it);
                    }
                }
            }
            std::swap(a, b);
        }
        return a.empty() ? -1 : a.rbegin()->first;
    }

    // gcd of the univariate-in-v coefficients
    static MPoly content_in(const MPoly& p, int v) {
        MPoly g = zero(p.arity_);
        for (const auto& [k, coeff] : p.univariate_in(v)) {
            g = gcd(g, coeff);
            if (g.is_one()) break;
        }
        return g;
    }

    // exact pseudo-remainder: lc(Q)^{deg P - deg Q + 1} P = q*Q + prem
    static MPoly pseudo_rem(MPoly P, const MPoly& Q, int v) {
        int dq = Q.degree_in(v);
        auto uq = Q.univariate_in(v);
        MPoly lq = uq.rbegin()->second;
        int delta = P.degree_in(v) - dq;
        int steps = 0;
        while (!P.is_zero() && P.degree_in(v) >= dq) {
            auto up = P.univariate_in(v);
            int dp = up.rbegin()->first;
            MPoly lp = up.rbegin()->second;
            MPoly shift = var(P.arity(), v, dp - dq);
            P = lq * P - lp * shift * Q;
            ++steps;
        }
        for (int i = steps; i < delta + 1; ++i) P = lq * P;
        return P;
    }

    int arity_;
    TermMap terms_;
};

}  // namespace hybridwc
