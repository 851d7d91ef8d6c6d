#pragma once

#include <concepts>
#include <map>

#include "hybridwc/errors.hpp"

namespace hybridwc {

// Truncated power series in q with coefficients in T (rational functions or
// state-space classes).  Binary operations truncate to the smaller D, so
// precision loss is always explicit in the result's truncation order.
template <class T>
class QSeries {
public:
    explicit QSeries(long truncation) : trunc_(truncation) {
        if (truncation < 0) throw InvalidDegree("QSeries: negative truncation");
    }

    long truncation() const { return trunc_; }
    const std::map<long, T>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    void set(long beta, const T& value) {
        if (beta < 0) throw InvalidDegree("QSeries: negative exponent");
        if (beta > trunc_) return;
        if (value.is_zero()) coeffs_.erase(beta);
        else coeffs_.insert_or_assign(beta, value);
    }

    void add_to(long beta, const T& value) {
        if (beta < 0) throw InvalidDegree("QSeries: negative exponent");
        if (beta > trunc_ || value.is_zero()) return;
        auto it = coeffs_.find(beta);
        if (it == coeffs_.end()) {
            coeffs_.emplace(beta, value);
        } else {
            T s = it->second + value;
            if (s.is_zero()) coeffs_.erase(it);
            else it->second = s;
        }
    }

    bool has(long beta) const { return coeffs_.count(beta) != 0; }
    const T* get(long beta) const {
        auto it = coeffs_.find(beta);
        return it == coeffs_.end() ? nullptr : &it->second;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.trunc_, b.trunc_));
        for (const auto& [k, v] : a.coeffs_) r.add_to(k, v);
        for (const auto& [k, v] : b.coeffs_) r.add_to(k, v);
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.trunc_, b.trunc_));
        for (const auto& [k, v] : a.coeffs_) r.add_to(k, v);
        for (const auto& [k, v] : b.coeffs_) r.add_to(k, -v);
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return (a - b).is_zero();
    }

private:
    long trunc_;
    std::map<long, T> coeffs_;
};

// Cauchy product truncated at min(D_f, D_g).
template <class T>
    requires requires(const T& x, const T& y) { { x* y } -> std::convertible_to<T>; }
QSeries<T> qseries_mul(const QSeries<T>& f, const QSeries<T>& g) {
    QSeries<T> r(std::min(f.truncation(), g.truncation()));
    for (const auto& [i, a] : f.coeffs()) {
        for (const auto& [j, b] : g.coeffs()) {
            if (i + j > r.truncation()) continue;
            r.add_to(i + j, a * b);
        }
    }
    return r;
}

}  // namespace hybridwc
