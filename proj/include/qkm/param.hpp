#pragma once

#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "qkm/scalar.hpp"

namespace qkm {

// Interned parameter symbols (c0, s1, ...), process-wide.
class ParamTable {
public:
    static int id(const std::string& name) {
        auto& t = instance();
        std::lock_guard<std::mutex> lock(t.mu_);
        auto it = t.ids_.find(name);
        if (it != t.ids_.end()) return it->second;
        int nid = static_cast<int>(t.names_.size());
        t.names_.push_back(name);
        t.ids_.emplace(name, nid);
        return nid;
    }
    static std::string name(int id) {
        auto& t = instance();
        std::lock_guard<std::mutex> lock(t.mu_);
        return t.names_.at(static_cast<size_t>(id));
    }

private:
    static ParamTable& instance() {
        static ParamTable t;
        return t;
    }
    std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
};

/// Monomial in parameter symbols: sorted (id, exponent>0) pairs.
using ParamMono = std::vector<std::pair<int, int>>;

/// Polynomial in formal parameters with Scalar coefficients.  This is the
/// coefficient ring of the normal-form engine: it lets relations be checked
/// with symbolic c_i, s_i without a multivariate gcd.  Division is only
/// defined by parameter-free values and by single monomials.
class PScalar {
public:
    PScalar() = default;
    PScalar(Scalar s) {  // NOLINT(google-explicit-constructor)
        if (!s.is_zero()) t_.emplace(ParamMono{}, std::move(s));
    }
    PScalar(int v) : PScalar(Scalar(v)) {}  // NOLINT(google-explicit-constructor)

    static PScalar param(const std::string& name) {
        PScalar p;
        p.t_.emplace(ParamMono{{ParamTable::id(name), 1}}, Scalar(1));
        return p;
    }

    bool is_zero() const { return t_.empty(); }
    bool is_param_free() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty());
    }
    bool is_one() const { return is_param_free() && !t_.empty() && t_.begin()->second.is_one(); }

    /// The parameter-free value; throws if symbols are present.
    Scalar to_scalar() const {
        if (t_.empty()) return Scalar(0);
        if (!is_param_free()) throw UnsupportedCase("value depends on formal parameters");
        return t_.begin()->second;
    }

    const std::map<ParamMono, Scalar>& terms() const { return t_; }

    friend PScalar operator+(const PScalar& a, const PScalar& b) {
        PScalar r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, c);
        return r;
    }
    friend PScalar operator-(const PScalar& a, const PScalar& b) {
        PScalar r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, -c);
        return r;
    }
    PScalar operator-() const {
        PScalar r;
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    friend PScalar operator*(const PScalar& a, const PScalar& b) {
        PScalar r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    friend PScalar operator/(const PScalar& a, const PScalar& b) {
        if (b.is_zero()) throw DivisionByZero("parameter scalar division by zero");
        if (b.t_.size() != 1)
            throw UnsupportedCase("division only by parameter monomials is supported");
        const auto& [mb, cb] = *b.t_.begin();
        PScalar r;
        for (const auto& [ma, ca] : a.t_) {
            auto m = mono_div(ma, mb);
            if (!m) throw UnsupportedCase("parameter monomial does not divide term");
            r.t_.emplace(*m, ca / cb);
        }
        return r;
    }
    PScalar& operator+=(const PScalar& b) { *this = *this + b; return *this; }
    PScalar& operator-=(const PScalar& b) { *this = *this - b; return *this; }
    PScalar& operator*=(const PScalar& b) { *this = *this * b; return *this; }
    PScalar& operator/=(const PScalar& b) { *this = *this / b; return *this; }

    friend bool operator==(const PScalar& a, const PScalar& b) { return a.t_ == b.t_; }
    friend bool operator!=(const PScalar& a, const PScalar& b) { return !(a == b); }
    friend bool operator<(const PScalar& a, const PScalar& b) {
        // an arbitrary but deterministic order, used only for canonical output
        auto ia = a.t_.begin(), ib = b.t_.begin();
        for (; ia != a.t_.end() && ib != b.t_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return scalar_less(ia->second, ib->second);
        }
        return ia == a.t_.end() && ib != b.t_.end();
    }

    PScalar pow(long e) const {
        if (e < 0) {
            if (is_param_free()) return PScalar(to_scalar().pow(e));
            if (t_.size() == 1) {
                PScalar r;
                ParamMono m = t_.begin()->first;
                for (auto& [id, ex] : m) ex = static_cast<int>(ex * e);
                r.t_.emplace(normalize(m), t_.begin()->second.pow(e));
                return r;
            }
            throw UnsupportedCase("negative power of a parameter sum");
        }
        PScalar r(1), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            if (e >>= 1) b = b * b;
        }
        return r;
    }

    /// Substitute concrete values for all parameters.
    Scalar eval(const std::map<int, Scalar>& values) const {
        Scalar r(0);
        for (const auto& [m, c] : t_) {
            Scalar v = c;
            for (const auto& [id, ex] : m) {
                auto it = values.find(id);
                if (it == values.end())
                    throw InvalidArgument("no value for parameter " + ParamTable::name(id));
                v *= it->second.pow(ex);
            }
            r += v;
        }
        return r;
    }

private:
    static bool scalar_less(const Scalar& a, const Scalar& b) {
        auto poly_less = [](const QPoly& x, const QPoly& y) {
            if (x.degree() != y.degree()) return x.degree() < y.degree();
            for (int k = x.degree(); k >= 0; --k)
                if (x[k] != y[k]) return x[k] < y[k];
            return false;
        };
        if (a.num() != b.num()) return poly_less(a.num(), b.num());
        return poly_less(a.den(), b.den());
    }
    static ParamMono normalize(ParamMono m) {
        ParamMono r;
        for (auto& [id, ex] : m)
            if (ex != 0) r.emplace_back(id, ex);
        return r;
    }
    static ParamMono mono_mul(const ParamMono& a, const ParamMono& b) {
        ParamMono r;
        size_t ia = 0, ib = 0;
        while (ia < a.size() || ib < b.size()) {
            if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) r.push_back(a[ia++]);
            else if (ia == a.size() || b[ib].first < a[ia].first) r.push_back(b[ib++]);
            else {
                int e = a[ia].second + b[ib].second;
                if (e != 0) r.emplace_back(a[ia].first, e);
                ++ia, ++ib;
            }
        }
        return r;
    }
    static std::optional<ParamMono> mono_div(const ParamMono& a, const ParamMono& b) {
        ParamMono r;
        size_t ia = 0;
        for (const auto& [id, ex] : b) {
            while (ia < a.size() && a[ia].first < id) r.push_back(a[ia++]);
            if (ia == a.size() || a[ia].first != id || a[ia].second < ex) return std::nullopt;
            if (a[ia].second > ex) r.emplace_back(id, a[ia].second - ex);
            ++ia;
        }
        while (ia < a.size()) r.push_back(a[ia++]);
        return r;
    }
    void add_term(const ParamMono& m, const Scalar& c) {
        auto it = t_.find(m);
        if (it == t_.end()) {
            if (!c.is_zero()) t_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }

    std::map<ParamMono, Scalar> t_;
};

} // namespace qkm
