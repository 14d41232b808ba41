#pragma once

#include <cctype>
#include <string>

#include "qkm/param.hpp"

namespace qkm {

// ---------------------------------------------------------------------------
// Canonical printing.  The output re-parses to the same canonical value
// (round-trip tested), using only the grammar: ints, q, i, + - * / ^, parens,
// and parameter identifiers.
// ---------------------------------------------------------------------------

inline std::string rat_str(const BigRat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

inline bool gauss_is_neg(const GaussRat& c) {
    if (c.re() != 0) return c.re() < 0;
    return c.im() < 0;
}

// c must be nonzero; result binds at least as tightly as '*'.
inline std::string gauss_str(const GaussRat& c) {
    if (c.im() == 0) return rat_str(c.re());
    if (c.re() == 0) {
        if (c.im() == 1) return "i";
        if (c.im() == -1) return "-i";
        return rat_str(c.im()) + "*i";
    }
    std::string s = "(" + rat_str(c.re());
    GaussRat im_part(BigRat(0), c.im());
    if (c.im() < 0)
        s += " - " + (c.im() == -1 ? std::string("i") : rat_str(-c.im()) + "*i");
    else
        s += " + " + (c.im() == 1 ? std::string("i") : rat_str(c.im()) + "*i");
    return s + ")";
}

inline std::string qpow_str(int k) {
    if (k == 1) return "q";
    return "q^" + std::to_string(k);
}

// term magnitude for coefficient c (with gauss_is_neg(c) == false) times q^k
inline std::string poly_term_str(const GaussRat& c, int k) {
    if (k == 0) return gauss_str(c);
    if (c.is_one()) return qpow_str(k);
    return gauss_str(c) + "*" + qpow_str(k);
}

inline std::string poly_str(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const GaussRat& c = p[k];
        if (c.is_zero()) continue;
        bool neg = gauss_is_neg(c);
        std::string mag = poly_term_str(neg ? -c : c, k);
        if (first) {
            s = neg ? "-" + mag : mag;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + mag;
        }
    }
    return s;
}

inline size_t poly_term_count(const QPoly& p) {
    size_t n = 0;
    for (const auto& c : p.coeffs())
        if (!c.is_zero()) ++n;
    return n;
}

inline std::string scalar_str(const Scalar& s) {
    if (s.is_zero()) return "0";
    std::string num = poly_str(s.num());
    if (s.den().is_one()) return num;
    if (poly_term_count(s.num()) > 1) num = "(" + num + ")";
    std::string den = poly_str(s.den());
    bool den_atomic = poly_term_count(s.den()) == 1 && s.den().lc().is_one();
    if (!den_atomic) den = "(" + den + ")";
    return num + "/" + den;
}

inline std::string param_mono_str(const ParamMono& m) {
    std::string s;
    for (size_t k = 0; k < m.size(); ++k) {
        if (k) s += "*";
        s += ParamTable::name(m[k].first);
        if (m[k].second != 1) s += "^" + std::to_string(m[k].second);
    }
    return s;
}

inline std::string pscalar_str(const PScalar& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool neg = false;
        Scalar mag = c;
        // fold the sign of the leading numerator coefficient into the join
        if (!c.num().is_zero() && gauss_is_neg(c.num().lc())) {
            neg = true;
            mag = -c;
        }
        std::string body;
        if (m.empty()) {
            body = scalar_str(mag);
        } else if (mag.is_one()) {
            body = param_mono_str(m);
        } else {
            std::string cs = scalar_str(mag);
            if (poly_term_count(mag.num()) > 1) cs = "(" + cs + ")";
            body = cs + "*" + param_mono_str(m);
        }
        if (first) {
            s = neg ? "-" + body : body;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + body;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

class ExprParser {
public:
    ExprParser(std::string src, bool allow_params)
        : src_(std::move(src)), allow_params_(allow_params) {}

    PScalar parse() {
        PScalar v = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing input");
        return v;
    }

private:
    void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in '" + src_ + "'");
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    PScalar expr() {
        bool neg = false;
        skip_ws();
        while (eat('-')) neg = !neg;
        PScalar v = term();
        if (neg) v = -v;
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    PScalar term() {
        PScalar v = factor();
        for (;;) {
            if (eat('*')) v *= factor();
            else if (eat('/')) v /= factor();
            else return v;
        }
    }
    PScalar factor() {
        skip_ws();
        if (eat('-')) return -factor();
        PScalar v = atom();
        if (eat('^')) v = v.pow(exponent());
        return v;
    }
    long exponent() {
        skip_ws();
        bool neg = eat('-');
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected integer exponent");
        long e = integer();
        return neg ? -e : e;
    }
    long integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return std::stol(src_.substr(start, pos_ - start));
    }
    PScalar atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            PScalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return PScalar(Scalar(integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            if (name == "q") return PScalar(Scalar::q());
            if (name == "i") return PScalar(Scalar::i());
            if (!allow_params_) fail("unknown symbol '" + name + "'");
            return PScalar::param(name);
        }
        fail("unexpected character");
        return PScalar();  // unreachable
    }

    std::string src_;
    size_t pos_ = 0;
    bool allow_params_;
};

inline Scalar parse_scalar(const std::string& src) {
    return ExprParser(src, false).parse().to_scalar();
}
inline PScalar parse_pscalar(const std::string& src) {
    return ExprParser(src, true).parse();
}

} // namespace qkm
