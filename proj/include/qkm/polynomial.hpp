#pragma once

#include <vector>

#include "qkm/errors.hpp"

namespace qkm {

/// Dense univariate polynomial over a field C.  Coefficient c[k] multiplies
/// the k-th power; no trailing zeros are stored, the zero polynomial is {}.
template <class C>
class Poly {
public:
    Poly() = default;
    explicit Poly(C c0) {
        if (!c0.is_zero()) c_.push_back(std::move(c0));
    }
    explicit Poly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(C coeff, int deg) {
        Poly p;
        if (coeff.is_zero()) return p;
        p.c_.assign(deg + 1, C(0));
        p.c_[deg] = std::move(coeff);
        return p;
    }
    static Poly one() { return Poly(C(1)); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const std::vector<C>& coeffs() const { return c_; }
    const C& operator[](int k) const { return c_[k]; }
    const C& lc() const { return c_.back(); }

    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<C> r(std::max(a.c_.size(), b.c_.size()), C(0));
        for (size_t k = 0; k < a.c_.size(); ++k) r[k] = a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<C> r(std::max(a.c_.size(), b.c_.size()), C(0));
        for (size_t k = 0; k < a.c_.size(); ++k) r[k] = a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
        return Poly(std::move(r));
    }
    Poly operator-() const {
        std::vector<C> r = c_;
        for (auto& x : r) x = -x;
        Poly p;
        p.c_ = std::move(r);
        return p;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<C> r(a.c_.size() + b.c_.size() - 1, C(0));
        for (size_t k = 0; k < a.c_.size(); ++k) {
            if (a.c_[k].is_zero()) continue;
            for (size_t l = 0; l < b.c_.size(); ++l) r[k + l] += a.c_[k] * b.c_[l];
        }
        return Poly(std::move(r));
    }
    Poly scaled(const C& s) const {
        if (s.is_zero()) return Poly();
        std::vector<C> r = c_;
        for (auto& x : r) x *= s;
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    C eval(const C& x) const {
        C r(0);
        for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
        return r;
    }

    /// Quotient and remainder by a nonzero divisor.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
        q = Poly();
        r = a;
        C inv_lc = C(1) / b.lc();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int shift = r.degree() - b.degree();
            C f = r.lc() * inv_lc;
            q = q + monomial(f, shift);
            r = r - b * monomial(f, shift);
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        if (a.is_zero()) return a;
        return a.scaled(C(1) / a.lc());
    }

    Poly pow(long e) const {
        Poly r = one(), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<C> c_;
};

} // namespace qkm
