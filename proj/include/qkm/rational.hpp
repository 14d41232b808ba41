#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qkm/errors.hpp"

namespace qkm {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const BigRat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const BigRat& r) { return boost::multiprecision::denominator(r); }

// cpp_rational's two-argument constructor rejects negative denominators.
inline BigRat make_rat(BigInt n, BigInt d) {
    if (d == 0) throw DivisionByZero("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return BigRat(n, d);
}

// Exact square root of a nonnegative rational, if it is a perfect square.
inline std::optional<BigRat> rat_sqrt(const BigRat& r) {
    if (r < 0) return std::nullopt;
    BigInt n = rat_num(r), d = rat_den(r);
    BigInt sn = boost::multiprecision::sqrt(n);
    BigInt sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return BigRat(sn, sd);
}

/// Gaussian rational re + i*im with i^2 = -1.  The coefficient ring for
/// everything in this library lives over this field (with q adjoined later).
class GaussRat {
public:
    GaussRat() = default;
    GaussRat(long v) : re_(v) {}        // NOLINT(google-explicit-constructor)
    GaussRat(int v) : re_(v) {}         // NOLINT(google-explicit-constructor)
    GaussRat(BigRat re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    GaussRat(BigRat re, BigRat im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussRat i() { return GaussRat(BigRat(0), BigRat(1)); }

    const BigRat& re() const { return re_; }
    const BigRat& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re_ - b.re_, a.im_ - b.im_);
    }
    GaussRat operator-() const { return GaussRat(-re_, -im_); }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    GaussRat conj() const { return GaussRat(re_, -im_); }
    BigRat norm() const { return re_ * re_ + im_ * im_; }

    GaussRat inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero Gaussian rational");
        BigRat n = norm();
        return GaussRat(re_ / n, -im_ / n);
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) { return a * b.inverse(); }

    GaussRat& operator+=(const GaussRat& b) { *this = *this + b; return *this; }
    GaussRat& operator-=(const GaussRat& b) { *this = *this - b; return *this; }
    GaussRat& operator*=(const GaussRat& b) { *this = *this * b; return *this; }
    GaussRat& operator/=(const GaussRat& b) { *this = *this / b; return *this; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
    friend bool operator<(const GaussRat& a, const GaussRat& b) {
        if (a.re_ != b.re_) return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    GaussRat pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        GaussRat r(1), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // Square root in Q(i), if one exists.  (x+iy)^2 = a+ib forces
    // x^2 = (a + sqrt(a^2+b^2))/2 and y = b/(2x).
    std::optional<GaussRat> sqrt() const {
        if (is_zero()) return GaussRat(0);
        if (im_ == 0) {
            if (auto s = rat_sqrt(re_)) return GaussRat(*s);
            if (auto s = rat_sqrt(-re_)) return GaussRat(BigRat(0), *s);
            return std::nullopt;
        }
        auto r = rat_sqrt(norm());
        if (!r) return std::nullopt;
        auto x2 = BigRat((re_ + *r) / 2);
        auto x = rat_sqrt(x2);
        if (!x || *x == 0) return std::nullopt;
        BigRat y = im_ / (2 * (*x));
        return GaussRat(*x, y);
    }

private:
    BigRat re_{0};
    BigRat im_{0};
};

} // namespace qkm
