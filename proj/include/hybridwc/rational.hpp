#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hybridwc/errors.hpp"

namespace hybridwc {

// Arbitrary-precision rational, always canonical: gcd(|num|, den) = 1,
// den > 0, zero stored as 0/1.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}
    BigRational(long n, long d) {
        if (d == 0) throw DivisionByZero("BigRational: zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit BigRational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit BigRational(const mpz_class& n) : v_(n) {}

    static BigRational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("BigRational: cannot parse '" + s + "'");
        if (q.get_den() == 0) throw DivisionByZero("BigRational: zero denominator");
        q.canonicalize();
        return BigRational(q);
    }

    const mpz_class num() const { return v_.get_num(); }
    const mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sgn() const { return ::sgn(v_); }

    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) {
        if (o.is_zero()) throw DivisionByZero("BigRational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    BigRational inverse() const {
        if (is_zero()) throw DivisionByZero("BigRational: inverse of zero");
        return BigRational(mpq_class(1) / v_);
    }

    BigRational abs() const { return BigRational(mpq_class(::abs(v_))); }

    BigRational pow(long e) const {
        if (e == 0) return BigRational(1);
        if (is_zero()) {
            if (e < 0) throw DivisionByZero("BigRational: 0^negative");
            return BigRational(0);
        }
        mpz_class n, d;
        unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
        mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), ae);
        mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), ae);
        mpq_class r(n, d);
        if (e < 0) r = 1 / r;
        r.canonicalize();
        return BigRational(r);
    }

    // floor(num/den) as an integer rational
    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    // fractional part <x> = x - floor(x), in [0, 1)
    BigRational frac() const { return *this - BigRational(floor()); }

    std::string str() const { return v_.get_str(); }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline mpz_class gcd_z(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline mpz_class lcm_z(const mpz_class& a, const mpz_class& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

}  // namespace hybridwc
