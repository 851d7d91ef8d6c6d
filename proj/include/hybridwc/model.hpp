#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hybridwc/errors.hpp"
#include "hybridwc/rational.hpp"

namespace hybridwc {

// Stability parameter: the asymptotic chamber 0+, a positive rational, or
// the infinity chamber.  The only question ever asked of it is whether a
// degree beta is on the unstable side, i.e. beta <= 1/epsilon.
class Epsilon {
public:
    static Epsilon zero_plus() { return Epsilon(Kind::ZeroPlus, BigRational(0)); }
    static Epsilon infinity() { return Epsilon(Kind::Infinity, BigRational(0)); }
    static Epsilon rational(const BigRational& r) {
        if (r.sgn() <= 0) throw InvalidDegree("epsilon must be positive");
        return Epsilon(Kind::Rational, r);
    }

    static Epsilon parse(const std::string& s) {
        if (s == "0+") return zero_plus();
        if (s == "inf") return infinity();
        auto slash = s.find('/');
        if (slash == std::string::npos)
            return rational(BigRational::from_string(s));
        return rational(BigRational::from_string(s));
    }

    bool is_zero_plus() const { return kind_ == Kind::ZeroPlus; }
    bool is_infinity() const { return kind_ == Kind::Infinity; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    const BigRational& value() const { return value_; }

    // beta <= 1/epsilon, decided exactly
    bool unstable(long beta) const {
        switch (kind_) {
            case Kind::ZeroPlus: return true;
            case Kind::Infinity: return beta == 0;
            case Kind::Rational: return BigRational(beta) * value_ <= BigRational(1);
        }
        return false;
    }

    std::string str() const {
        if (kind_ == Kind::ZeroPlus) return "0+";
        if (kind_ == Kind::Infinity) return "inf";
        return value_.str();
    }

private:
    enum class Kind { ZeroPlus, Rational, Infinity };
    Epsilon(Kind k, const BigRational& v) : kind_(k), value_(v) {}
    Kind kind_;
    BigRational value_;
};

// Multiplicity m = a/d in {0, 1/d, ..., (d-1)/d}, stored as the numerator a.
class Multiplicity {
public:
    Multiplicity() : a_(0) {}
    static Multiplicity from_numerator(long a, long d) {
        Multiplicity m;
        m.a_ = ((a % d) + d) % d;
        return m;
    }
    long numerator() const { return a_; }
    BigRational value(long d) const { return BigRational(a_, d); }
    Multiplicity negated(long d) const { return from_numerator(-a_, d); }
    friend bool operator==(const Multiplicity& x, const Multiplicity& y) { return x.a_ == y.a_; }
    friend bool operator!=(const Multiplicity& x, const Multiplicity& y) { return x.a_ != y.a_; }
    friend bool operator<(const Multiplicity& x, const Multiplicity& y) { return x.a_ < y.a_; }

private:
    long a_;
};

struct ModelParams {
    std::vector<long> weights;  // w_1..w_M
    long degree = 1;            // d, with w_i | d for all i
    long num_polys = 1;         // N
    Epsilon epsilon = Epsilon::zero_plus();
    long max_q_degree = 10;     // D

    long M() const { return static_cast<long>(weights.size()); }
    long N() const { return num_polys; }
    long d() const { return degree; }
    int arity() const { return static_cast<int>(num_polys) + 1; }

    void validate() const {
        if (weights.empty()) throw InvalidDegree("model needs at least one weight");
        if (num_polys < 1) throw InvalidDegree("model needs at least one polynomial");
        if (degree < 1) throw InvalidDegree("degree must be positive");
        if (max_q_degree < 0) throw InvalidDegree("max_q_degree must be non-negative");
        for (long w : weights) {
            if (w < 1) throw InvalidDegree("weights must be positive");
            if (degree % w != 0)
                throw InvalidDegree("weight " + std::to_string(w) + " does not divide degree " +
                                    std::to_string(degree));
        }
    }

    Multiplicity mult(long a) const { return Multiplicity::from_numerator(a, degree); }

    // sector of the q^beta coefficient of the J-function: <(beta+1)/d>
    Multiplicity j_sector(long beta) const { return mult(beta + 1); }
};

// Sample models used throughout the test and acceptance suites.
inline ModelParams quintic_model(long D = 10) {
    return ModelParams{{1, 1, 1, 1, 1}, 5, 1, Epsilon::zero_plus(), D};
}
inline ModelParams cc33_model(long D = 10) {
    return ModelParams{{1, 1, 1, 1, 1, 1}, 3, 2, Epsilon::zero_plus(), D};
}
inline ModelParams c2222_model(long D = 8) {
    return ModelParams{{1, 1, 1, 1, 1, 1, 1, 1}, 2, 4, Epsilon::zero_plus(), D};
}
inline ModelParams c1122d4_model(long D = 8) {
    return ModelParams{{1, 1, 2, 2}, 4, 2, Epsilon::zero_plus(), D};
}

}  // namespace hybridwc
