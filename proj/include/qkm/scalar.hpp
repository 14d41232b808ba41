#pragma once

#include <optional>
#include <string>

#include "qkm/polynomial.hpp"
#include "qkm/rational.hpp"

namespace qkm {

using QPoly = Poly<GaussRat>;

inline std::optional<QPoly> poly_sqrt(const QPoly& p) {
    if (p.is_zero()) return QPoly();
    if (p.degree() % 2 != 0) return std::nullopt;
    int m = p.degree() / 2;
    auto lead = p.lc().sqrt();
    if (!lead) return std::nullopt;
    std::vector<GaussRat> r(m + 1, GaussRat(0));
    r[m] = *lead;
    GaussRat two_lead = GaussRat(2) * r[m];
    for (int k = m - 1; k >= 0; --k) {
        GaussRat acc = (k + m <= p.degree()) ? p[k + m] : GaussRat(0);
        for (int a = k + 1; a < m; ++a) {
            int b = k + m - a;
            if (b > k && b <= m) acc -= r[a] * r[b];
        }
        r[k] = acc / two_lead;
    }
    QPoly root{std::vector<GaussRat>(r)};
    if (root * root != p) return std::nullopt;
    return root;
}

/// Element of Q(i)(q): a reduced fraction of polynomials in q with monic
/// denominator.  Equality is representation equality.
class Scalar {
public:
    Scalar() : den_(QPoly::one()) {}
    Scalar(int v) : num_(GaussRat(v)), den_(QPoly::one()) {}        // NOLINT
    Scalar(long v) : num_(GaussRat(v)), den_(QPoly::one()) {}       // NOLINT
    Scalar(GaussRat v) : num_(std::move(v)), den_(QPoly::one()) {}  // NOLINT
    Scalar(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static Scalar q_power(long k) {
        if (k >= 0) return Scalar(QPoly::monomial(GaussRat(1), static_cast<int>(k)), QPoly::one());
        return Scalar(QPoly::one(), QPoly::monomial(GaussRat(1), static_cast<int>(-k)));
    }
    static Scalar q() { return q_power(1); }
    static Scalar i() { return Scalar(GaussRat::i()); }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ + b.num_);
        if (a.den_ == b.den_) return Scalar(a.num_ + b.num_, a.den_);
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ - b.num_);
        if (a.den_ == b.den_) return Scalar(a.num_ - b.num_, a.den_);
        return Scalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    Scalar operator-() const {
        Scalar r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ * b.num_);
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw DivisionByZero("scalar division by zero");
        return Scalar(a.num_ * b.den_, a.den_ * b.num_);
    }
    Scalar& operator+=(const Scalar& b) { *this = *this + b; return *this; }
    Scalar& operator-=(const Scalar& b) { *this = *this - b; return *this; }
    Scalar& operator*=(const Scalar& b) { *this = *this * b; return *this; }
    Scalar& operator/=(const Scalar& b) { *this = *this / b; return *this; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero scalar");
        return Scalar(den_, num_);
    }
    Scalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar r(1), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    /// Value at q = 1; defined exactly on the local ring K[q]_(q-1).
    GaussRat eval_at_one() const {
        GaussRat d = den_.eval(GaussRat(1));
        if (d.is_zero()) throw PoleAtOne("denominator vanishes at q = 1");
        return num_.eval(GaussRat(1)) / d;
    }
    bool has_pole_at_one() const { return den_.eval(GaussRat(1)).is_zero(); }

    std::optional<Scalar> sqrt() const {
        auto n = poly_sqrt(num_);
        if (!n) return std::nullopt;
        auto d = poly_sqrt(den_);
        if (!d) return std::nullopt;
        return Scalar(*n, *d);
    }

private:
    static Scalar raw(QPoly num) {
        Scalar r;
        r.num_ = std::move(num);
        return r;
    }

    static int valuation(const QPoly& p) {
        int v = 0;
        while (v <= p.degree() && p[v].is_zero()) ++v;
        return v;
    }
    static QPoly shift_down(const QPoly& p, int v) {
        if (v == 0) return p;
        std::vector<GaussRat> c(p.coeffs().begin() + v, p.coeffs().end());
        return QPoly(std::move(c));
    }
    static bool is_monomial(const QPoly& p) {
        return !p.is_zero() && valuation(p) == p.degree();
    }

    void reduce() {
        if (den_.is_zero()) throw DivisionByZero("zero denominator");
        if (num_.is_zero()) {
            den_ = QPoly::one();
            return;
        }
        if (den_.is_one()) return;
        // common q-power first; it covers the ubiquitous Laurent case
        int v = std::min(valuation(num_), valuation(den_));
        if (v > 0) {
            num_ = shift_down(num_, v);
            den_ = shift_down(den_, v);
        }
        if (den_.is_one()) return;
        if (is_monomial(den_)) {
            GaussRat lc = den_.lc();
            if (!lc.is_one()) {
                GaussRat inv = lc.inverse();
                num_ = num_.scaled(inv);
                den_ = den_.scaled(inv);
            }
            return;
        }
        QPoly g = QPoly::gcd(num_, den_);
        if (!g.is_one()) {
            QPoly q, r;
            QPoly::divmod(num_, g, q, r);
            num_ = q;
            QPoly::divmod(den_, g, q, r);
            den_ = q;
        }
        GaussRat lc = den_.lc();
        if (!lc.is_one()) {
            GaussRat inv = lc.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    QPoly num_;
    QPoly den_;
};

/// Symmetric q-integer [n] at base q^d.
inline Scalar q_int(long n, long d = 1) {
    Scalar r(0);
    for (long t = 0; t < n; ++t) r += Scalar::q_power(d * (n - 1 - 2 * t));
    return r;
}

inline Scalar q_factorial(long n, long d = 1) {
    Scalar r(1);
    for (long t = 2; t <= n; ++t) r *= q_int(t, d);
    return r;
}

/// Balanced q-binomial [n choose k] at base q^d; zero outside 0 <= k <= n.
inline Scalar q_binomial(long n, long k, long d = 1) {
    if (n < 0) throw InvalidArgument("q_binomial requires n >= 0");
    if (k < 0 || k > n) return Scalar(0);
    return q_factorial(n, d) / (q_factorial(k, d) * q_factorial(n - k, d));
}

} // namespace qkm
