#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qkm/expr.hpp"
#include "qkm/linalg.hpp"
#include "qkm/weyl.hpp"

namespace qkm {

/// Engine coefficients: polynomials in formal parameters over Q(i)(q).
using Coef = PScalar;

/// One generator symbol of U_q(g'): E_i, F_i, or K_beta.
struct GenSymbol {
    enum class Kind { E, F, K } kind;
    int index = -1;       // for E/F
    RootVector kvec;      // for K

    static GenSymbol E(int i) { return {Kind::E, i, {}}; }
    static GenSymbol F(int i) { return {Kind::F, i, {}}; }
    static GenSymbol K(RootVector b) { return {Kind::K, -1, std::move(b)}; }
};

/// Monomial in the triangular basis: E-word, K-exponent vector, F-word.
/// Words are canonical representatives of their weight components.
struct NormalMonomial {
    std::vector<int> e;
    RootVector k;
    std::vector<int> f;

    friend bool operator<(const NormalMonomial& a, const NormalMonomial& b) {
        if (a.e.size() != b.e.size()) return a.e.size() < b.e.size();
        if (a.e != b.e) return a.e < b.e;
        if (a.f.size() != b.f.size()) return a.f.size() < b.f.size();
        if (a.f != b.f) return a.f < b.f;
        return a.k < b.k;
    }
    friend bool operator==(const NormalMonomial& a, const NormalMonomial& b) {
        return a.e == b.e && a.k == b.k && a.f == b.f;
    }
};

struct AlgebraElement {
    std::map<NormalMonomial, Coef> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const NormalMonomial& m, const Coef& c) {
        if (c.is_zero()) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
    AlgebraElement& operator+=(const AlgebraElement& o) {
        for (const auto& [m, c] : o.terms) add(m, c);
        return *this;
    }
    AlgebraElement& operator-=(const AlgebraElement& o) {
        for (const auto& [m, c] : o.terms) add(m, -c);
        return *this;
    }
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    AlgebraElement scaled(const Coef& s) const {
        AlgebraElement r;
        if (s.is_zero()) return r;
        for (const auto& [m, c] : terms) r.add(m, c * s);
        return r;
    }
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.terms == b.terms;
    }
};

struct TensorElement {
    std::map<std::pair<NormalMonomial, NormalMonomial>, Coef> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const NormalMonomial& x, const NormalMonomial& y, const Coef& c) {
        if (c.is_zero()) return;
        auto key = std::make_pair(x, y);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
    TensorElement& operator+=(const TensorElement& o) {
        for (const auto& [m, c] : o.terms) add(m.first, m.second, c);
        return *this;
    }
    TensorElement& operator-=(const TensorElement& o) {
        for (const auto& [m, c] : o.terms) add(m.first, m.second, -c);
        return *this;
    }
    friend bool operator==(const TensorElement& a, const TensorElement& b) {
        return a.terms == b.terms;
    }
};

/// Per-weight rewrite data.  `basis` holds the canonical (pivot-free) words;
/// `pivot_expansion` expands the finitely many pivot candidates over the
/// basis; `memo` caches the expansion of arbitrary words on demand.
struct WeightEntry {
    using Combo = std::vector<std::pair<std::vector<int>, Scalar>>;
    std::vector<std::vector<int>> basis;
    std::map<std::vector<int>, Combo> pivot_expansion;
    std::map<std::vector<int>, Combo> memo;
};

/// The normal-form engine for U_q(g').  Holds the Cartan datum, the height
/// cap and the shared weight-basis cache.  Cache fills are serialized by a
/// mutex; results are deterministic, so duplicated fills are benign.
class Algebra {
public:
    explicit Algebra(CartanDatum datum, int height_cap = 20)
        : d_(std::move(datum)), cap_(height_cap) {}

    const CartanDatum& datum() const { return d_; }
    int height_cap() const { return cap_; }
    int n() const { return d_.n(); }

    Scalar q_i(int i) const { return Scalar::q_power(d_.eps[static_cast<size_t>(i)]); }
    long long eps(int i) const { return d_.eps[static_cast<size_t>(i)]; }

    // ---- element construction -------------------------------------------

    AlgebraElement zero() const { return {}; }
    AlgebraElement one() const {
        AlgebraElement r;
        r.add(NormalMonomial{{}, RootVector(static_cast<size_t>(n()), 0), {}}, Coef(1));
        return r;
    }
    AlgebraElement E(int i) const {
        AlgebraElement r;
        r.add(NormalMonomial{{i}, RootVector(static_cast<size_t>(n()), 0), {}}, Coef(1));
        return r;
    }
    AlgebraElement F(int i) const {
        AlgebraElement r;
        r.add(NormalMonomial{{}, RootVector(static_cast<size_t>(n()), 0), {i}}, Coef(1));
        return r;
    }
    AlgebraElement K(const RootVector& b) const {
        AlgebraElement r;
        r.add(NormalMonomial{{}, b, {}}, Coef(1));
        return r;
    }
    AlgebraElement Ki(int i, long long e = 1) const {
        return K(rv_unit(static_cast<size_t>(n()), static_cast<size_t>(i), e));
    }
    AlgebraElement gen(const GenSymbol& g) const {
        switch (g.kind) {
            case GenSymbol::Kind::E: return E(g.index);
            case GenSymbol::Kind::F: return F(g.index);
            default: return K(g.kvec);
        }
    }

    /// Normal form of a formal product of generator symbols.
    AlgebraElement evaluate(const std::vector<GenSymbol>& word) const {
        AlgebraElement r = one();
        for (const auto& g : word) r = mul(r, gen(g));
        return r;
    }

    // ---- multiplication ---------------------------------------------------

    AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const {
        AlgebraElement out;
        for (const auto& [mb, cb] : b.terms) {
            AlgebraElement cur = a;
            for (int l : mb.e) cur = mul_gen_E(cur, l);
            if (!rv_is_zero(mb.k)) cur = mul_gen_K(cur, mb.k);
            for (int l : mb.f) cur = mul_gen_F(cur, l);
            out += cur.scaled(cb);
        }
        return out;
    }
    AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b,
                       const AlgebraElement& c) const {
        return mul(mul(a, b), c);
    }

    AlgebraElement pow(const AlgebraElement& a, long e) const {
        AlgebraElement r = one();
        for (long t = 0; t < e; ++t) r = mul(r, a);
        return r;
    }

    /// Commutator ab - ba.
    AlgebraElement comm(const AlgebraElement& a, const AlgebraElement& b) const {
        return mul(a, b) - mul(b, a);
    }

    // ---- weight data -------------------------------------------------------

    RootVector word_weight(const std::vector<int>& w) const {
        RootVector r(static_cast<size_t>(n()), 0);
        for (int l : w) ++r[static_cast<size_t>(l)];
        return r;
    }
    /// Adjoint weight of a monomial: wt(e-word) - wt(f-word).
    RootVector weight(const NormalMonomial& m) const {
        return rv_sub(word_weight(m.e), word_weight(m.f));
    }
    bool is_weight_homogeneous(const AlgebraElement& a, RootVector* out = nullptr) const {
        bool first = true;
        RootVector w;
        for (const auto& [m, c] : a.terms) {
            RootVector mw = weight(m);
            if (first) {
                w = mw;
                first = false;
            } else if (mw != w) {
                return false;
            }
        }
        if (out && !first) *out = w;
        if (out && first) *out = RootVector(static_cast<size_t>(n()), 0);
        return true;
    }

    /// Canonical word basis of the +/- part at weight mu (the sign only
    /// labels intent: the rewrite data of both signs coincide).
    const std::vector<std::vector<int>>& weight_basis(const RootVector& mu) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return entry(mu).basis;
    }
    size_t weight_dim(const RootVector& mu) const { return weight_basis(mu).size(); }

    // ---- Hopf structure ----------------------------------------------------

    TensorElement coproduct(const AlgebraElement& a) const {
        TensorElement out;
        for (const auto& [m, c] : a.terms) {
            TensorElement cur = tensor_one();
            for (int l : m.e) cur = tensor_mul(cur, coproduct_E(l));
            if (!rv_is_zero(m.k)) cur = tensor_mul(cur, coproduct_K(m.k));
            for (int l : m.f) cur = tensor_mul(cur, coproduct_F(l));
            for (const auto& [mm, cc] : cur.terms) out.add(mm.first, mm.second, cc * c);
        }
        return out;
    }

    Coef counit(const AlgebraElement& a) const {
        Coef r(0);
        for (const auto& [m, c] : a.terms)
            if (m.e.empty() && m.f.empty()) r += c;
        return r;
    }

    AlgebraElement from_mono(const NormalMonomial& m, Coef c = Coef(1)) const {
        AlgebraElement r;
        r.add(m, std::move(c));
        return r;
    }

    /// Componentwise product of tensors: (x (x) y)(u (x) v) = xu (x) yv.
    TensorElement tensor_mul(const TensorElement& a, const TensorElement& b) const {
        TensorElement out;
        for (const auto& [ma, ca] : a.terms) {
            for (const auto& [mb, cb] : b.terms) {
                AlgebraElement l = mul(from_mono(ma.first), from_mono(mb.first));
                AlgebraElement r = mul(from_mono(ma.second), from_mono(mb.second));
                Coef f = ca * cb;
                for (const auto& [ml, cl] : l.terms)
                    for (const auto& [mr, cr] : r.terms) out.add(ml, mr, f * cl * cr);
            }
        }
        return out;
    }

    AlgebraElement antipode(const AlgebraElement& a) const {
        AlgebraElement out;
        for (const auto& [m, c] : a.terms) {
            AlgebraElement cur = one();
            // antihomomorphism: apply to the reversed generator sequence
            for (size_t t = m.f.size(); t-- > 0;) {
                int x = m.f[t];
                // S(F_x) = -F_x K_x
                cur = mul_gen_F(cur, x);
                cur = mul_gen_K(cur, rv_unit(static_cast<size_t>(n()), static_cast<size_t>(x)));
                cur = cur.scaled(Coef(-1));
            }
            if (!rv_is_zero(m.k)) cur = mul_gen_K(cur, rv_neg(m.k));
            for (size_t t = m.e.size(); t-- > 0;) {
                int x = m.e[t];
                // S(E_x) = -K_x^{-1} E_x
                cur = mul_gen_K(cur, rv_unit(static_cast<size_t>(n()), static_cast<size_t>(x), -1));
                cur = mul_gen_E(cur, x);
                cur = cur.scaled(Coef(-1));
            }
            out += cur.scaled(c);
        }
        return out;
    }

    /// ad(x)(u) = x_(1) u S(x_(2)).
    AlgebraElement adjoint(const AlgebraElement& x, const AlgebraElement& u) const {
        TensorElement dx = coproduct(x);
        AlgebraElement out;
        for (const auto& [mm, c] : dx.terms) {
            AlgebraElement x1;
            x1.add(mm.first, Coef(1));
            AlgebraElement x2;
            x2.add(mm.second, Coef(1));
            out += mul(mul(x1, u), antipode(x2)).scaled(c);
        }
        return out;
    }

    // ---- projections -------------------------------------------------------

    /// Projection onto U^+ K_lambda S(U^-): keeps monomials with
    /// kvec - wt(fword) = lambda.
    AlgebraElement project_P(const RootVector& lambda, const AlgebraElement& a) const {
        AlgebraElement r;
        for (const auto& [m, c] : a.terms)
            if (rv_sub(m.k, word_weight(m.f)) == lambda) r.add(m, c);
        return r;
    }

    /// Projection onto U^+_alpha U^0 U^-_{-beta}.
    AlgebraElement project_pi(const RootVector& alpha, const RootVector& beta,
                              const AlgebraElement& a) const {
        AlgebraElement r;
        for (const auto& [m, c] : a.terms)
            if (word_weight(m.e) == alpha && word_weight(m.f) == beta) r.add(m, c);
        return r;
    }

    /// Weight-space component for the adjoint grading.
    AlgebraElement weight_component(const RootVector& beta, const AlgebraElement& a) const {
        AlgebraElement r;
        for (const auto& [m, c] : a.terms)
            if (weight(m) == beta) r.add(m, c);
        return r;
    }

    // ---- parsing / printing ------------------------------------------------

    AlgebraElement parse(const std::string& src) const;
    std::string str(const AlgebraElement& a) const;
    std::string str(const NormalMonomial& m) const;

private:
    friend class ElementParser;

    Scalar qpow(long long e) const { return Scalar::q_power(e); }

    TensorElement tensor_one() const {
        TensorElement t;
        NormalMonomial id{{}, RootVector(static_cast<size_t>(n()), 0), {}};
        t.add(id, id, Coef(1));
        return t;
    }
    // small tensors for the generator coproducts: list of (left, right, coef)
    struct TinyTensor {
        std::vector<std::pair<std::pair<NormalMonomial, NormalMonomial>, Coef>> parts;
    };
    TinyTensor coproduct_E(int i) const {
        RootVector z(static_cast<size_t>(n()), 0);
        TinyTensor t;
        t.parts.push_back({{NormalMonomial{{i}, z, {}}, NormalMonomial{{}, z, {}}}, Coef(1)});
        t.parts.push_back({{NormalMonomial{{}, rv_unit(static_cast<size_t>(n()), static_cast<size_t>(i)), {}},
                            NormalMonomial{{i}, z, {}}},
                           Coef(1)});
        return t;
    }
    TinyTensor coproduct_F(int i) const {
        RootVector z(static_cast<size_t>(n()), 0);
        TinyTensor t;
        t.parts.push_back({{NormalMonomial{{}, z, {i}},
                            NormalMonomial{{}, rv_unit(static_cast<size_t>(n()), static_cast<size_t>(i), -1), {}}},
                           Coef(1)});
        t.parts.push_back({{NormalMonomial{{}, z, {}}, NormalMonomial{{}, z, {i}}}, Coef(1)});
        return t;
    }
    TinyTensor coproduct_K(const RootVector& b) const {
        TinyTensor t;
        t.parts.push_back({{NormalMonomial{{}, b, {}}, NormalMonomial{{}, b, {}}}, Coef(1)});
        return t;
    }
    TensorElement tensor_mul(const TensorElement& a, const TinyTensor& b) const {
        TensorElement out;
        for (const auto& [mm, c] : a.terms) {
            AlgebraElement left;
            left.add(mm.first, Coef(1));
            AlgebraElement right;
            right.add(mm.second, Coef(1));
            for (const auto& [pq, pc] : b.parts) {
                AlgebraElement bl;
                bl.add(pq.first, Coef(1));
                AlgebraElement br;
                br.add(pq.second, Coef(1));
                AlgebraElement l = mul(left, bl);
                AlgebraElement r = mul(right, br);
                Coef f = c * pc;
                for (const auto& [ml, cl] : l.terms)
                    for (const auto& [mr, cr] : r.terms) out.add(ml, mr, f * cl * cr);
            }
        }
        return out;
    }

    // right multiplication by a single F_i: append and rewrite the f-word
    AlgebraElement mul_gen_F(const AlgebraElement& a, int i) const {
        AlgebraElement out;
        for (const auto& [m, c] : a.terms) {
            std::vector<int> w = m.f;
            w.push_back(i);
            for (const auto& [cw, cc] : rewrite_word(w))
                out.add(NormalMonomial{m.e, m.k, cw}, c * Coef(cc));
        }
        return out;
    }

    // right multiplication by K_beta: F_w K_b = q^{(b, wt w)} K_b F_w
    AlgebraElement mul_gen_K(const AlgebraElement& a, const RootVector& b) const {
        AlgebraElement out;
        for (const auto& [m, c] : a.terms) {
            Scalar f = qpow(d_.bilinear(b, word_weight(m.f)));
            out.add(NormalMonomial{m.e, rv_add(m.k, b), m.f}, c * Coef(f));
        }
        return out;
    }

    // right multiplication by E_i: push E through the f-word
    AlgebraElement mul_gen_E(const AlgebraElement& a, int i) const {
        AlgebraElement out;
        for (const auto& [m, c] : a.terms) {
            // F_{m.f} E_i = sum coeff E_u K_g F_v  (u empty or {i})
            for (const auto& t : cross_FE(m.f, i)) {
                Scalar f = t.coeff * qpow(d_.bilinear(m.k, word_weight(t.u)));
                std::vector<int> ew = m.e;
                ew.insert(ew.end(), t.u.begin(), t.u.end());
                RootVector kk = rv_add(m.k, t.g);
                for (const auto& [cwE, ccE] : rewrite_word(ew))
                    for (const auto& [cwF, ccF] : rewrite_word(t.v))
                        out.add(NormalMonomial{cwE, kk, cwF}, c * Coef(f * ccE * ccF));
            }
        }
        return out;
    }

    struct CrossTerm {
        Scalar coeff;
        std::vector<int> u;  // e-part, empty or {i}
        RootVector g;        // K shift
        std::vector<int> v;  // f-part (free word)
    };
    std::vector<CrossTerm> cross_FE(const std::vector<int>& fw, int i) const {
        RootVector z(static_cast<size_t>(n()), 0);
        if (fw.empty()) return {CrossTerm{Scalar(1), {i}, z, {}}};
        std::vector<int> head(fw.begin(), fw.end() - 1);
        int x = fw.back();
        std::vector<CrossTerm> out;
        for (auto t : cross_FE(head, i)) {
            t.v.push_back(x);
            out.push_back(std::move(t));
        }
        if (x == i) {
            Scalar denom = q_i(i) - q_i(i).inverse();
            RootVector ax = rv_unit(static_cast<size_t>(n()), static_cast<size_t>(x));
            long long pair = d_.bilinear(ax, word_weight(head));
            // - (F_head K_x - F_head K_x^{-1}) / (q_i - q_i^{-1})
            out.push_back(CrossTerm{-(qpow(pair) / denom), {}, ax, head});
            out.push_back(CrossTerm{qpow(-pair) / denom, {}, rv_neg(ax), head});
        }
        return out;
    }

    // ---- weight cache ------------------------------------------------------
    //
    // The Serre-ideal component at weight mu decomposes as
    //   I_mu = sum_l E_l I_{mu - alpha_l}  +  span{ F_ij(E_i,E_j) w2 }.
    // Words with distinct first letters span disjoint blocks, so the lower
    // tables already quotient out the first summand: every word reduces to
    // the candidate set { l . b : b canonical at mu - alpha_l }, and only
    // the position-zero Serre rows need Gaussian elimination.

    WeightEntry& entry(const RootVector& mu) const {
        if (rv_height(mu) > cap_)
            throw HeightCapExceeded("weight height " + std::to_string(rv_height(mu)) +
                                    " exceeds cap " + std::to_string(cap_));
        auto it = cache_.find(mu);
        if (it != cache_.end()) return it->second;
        WeightEntry e = build_entry(mu);
        return cache_.emplace(mu, std::move(e)).first->second;
    }

    WeightEntry::Combo rewrite_word_locked(const std::vector<int>& w) const {
        if (w.size() <= 1) return {{w, Scalar(1)}};
        WeightEntry& e = entry(word_weight(w));
        auto it = e.memo.find(w);
        if (it != e.memo.end()) return it->second;
        // expand over candidates through the tail, then substitute pivots
        std::map<std::vector<int>, Scalar> acc;
        std::vector<int> tail(w.begin() + 1, w.end());
        int l = w.front();
        for (const auto& [b, c] : rewrite_word_locked(tail)) {
            std::vector<int> cand;
            cand.reserve(w.size());
            cand.push_back(l);
            cand.insert(cand.end(), b.begin(), b.end());
            auto pit = e.pivot_expansion.find(cand);
            if (pit == e.pivot_expansion.end()) {
                acc[cand] += c;  // candidate is canonical
            } else {
                for (const auto& [bw, bc] : pit->second) acc[bw] += c * bc;
            }
        }
        WeightEntry::Combo combo;
        for (auto& [bw, bc] : acc)
            if (!bc.is_zero()) combo.emplace_back(bw, bc);
        e.memo.emplace(w, combo);
        return combo;
    }

    std::vector<std::pair<std::vector<int>, Scalar>> rewrite_word(const std::vector<int>& w) const {
        if (w.size() <= 1) return {{w, Scalar(1)}};
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return rewrite_word_locked(w);
    }

    static void enumerate_words(RootVector& mu, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
        bool done = true;
        for (size_t i = 0; i < mu.size(); ++i) {
            if (mu[i] > 0) {
                done = false;
                --mu[i];
                cur.push_back(static_cast<int>(i));
                enumerate_words(mu, cur, out);
                cur.pop_back();
                ++mu[i];
            }
        }
        if (done) out.push_back(cur);
    }

    WeightEntry build_entry(const RootVector& mu) const {
        WeightEntry e;
        if (rv_height(mu) <= 1) {
            RootVector m = mu;
            std::vector<int> cur;
            enumerate_words(m, cur, e.basis);
            return e;
        }
        int nn = n();
        // candidate words: first letter + canonical tail
        std::vector<std::vector<int>> cands;
        for (int l = 0; l < nn; ++l) {
            if (mu[static_cast<size_t>(l)] == 0) continue;
            RootVector rest = mu;
            --rest[static_cast<size_t>(l)];
            for (const auto& b : entry(rest).basis) {
                std::vector<int> cand;
                cand.reserve(b.size() + 1);
                cand.push_back(l);
                cand.insert(cand.end(), b.begin(), b.end());
                cands.push_back(std::move(cand));
            }
        }
        std::sort(cands.begin(), cands.end());
        std::map<std::vector<int>, size_t> cidx;
        for (size_t k = 0; k < cands.size(); ++k) cidx[cands[k]] = k;

        auto express = [&](const std::vector<int>& w, std::vector<Scalar>& row, const Scalar& f) {
            // w = l . tail with ht(tail) = ht - 1: expand tail over its basis
            std::vector<int> tail(w.begin() + 1, w.end());
            for (const auto& [b, c] : rewrite_word_locked(tail)) {
                std::vector<int> cand;
                cand.reserve(w.size());
                cand.push_back(w.front());
                cand.insert(cand.end(), b.begin(), b.end());
                row[cidx.at(cand)] += f * c;
            }
        };

        // position-zero Serre rows; modulo the lower-weight ideal it is
        // enough to tensor against canonical right factors
        Mat<Scalar> rows;
        for (int i = 0; i < nn; ++i) {
            for (int j = 0; j < nn; ++j) {
                if (i == j) continue;
                long long aij = d_.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
                RootVector lam(static_cast<size_t>(nn), 0);
                lam[static_cast<size_t>(i)] = 1 - aij;
                lam[static_cast<size_t>(j)] += 1;
                RootVector rest = rv_sub(mu, lam);
                if (!rv_in_Qplus(rest)) continue;
                std::vector<std::vector<int>> w2s = entry(rest).basis;
                for (const auto& w2 : w2s) {
                    std::vector<Scalar> row(cands.size(), Scalar(0));
                    for (long long t = 0; t <= 1 - aij; ++t) {
                        Scalar coef = q_binomial(1 - aij, t, eps(i));
                        if (t % 2 != 0) coef = -coef;
                        std::vector<int> word;
                        for (long long r = 0; r < 1 - aij - t; ++r) word.push_back(i);
                        word.push_back(j);
                        for (long long r = 0; r < t; ++r) word.push_back(i);
                        word.insert(word.end(), w2.begin(), w2.end());
                        express(word, row, coef);
                    }
                    rows.push_back(std::move(row));
                }
            }
        }

        if (rows.empty()) {
            e.basis = std::move(cands);
            return e;
        }
        auto pivots = rref(rows);
        std::vector<bool> is_pivot(cands.size(), false);
        for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
        for (size_t k = 0; k < cands.size(); ++k)
            if (!is_pivot[k]) e.basis.push_back(cands[k]);
        for (size_t r = 0; r < pivots.size(); ++r) {
            size_t pc = static_cast<size_t>(pivots[r]);
            WeightEntry::Combo combo;
            for (size_t c = 0; c < cands.size(); ++c) {
                if (c == pc || rows[r][c].is_zero()) continue;
                combo.emplace_back(cands[c], -rows[r][c]);
            }
            e.pivot_expansion[cands[pc]] = std::move(combo);
        }
        return e;
    }

    CartanDatum d_;
    int cap_;
    mutable std::recursive_mutex mu_;
    mutable std::map<RootVector, WeightEntry> cache_;
};

// ---------------------------------------------------------------------------
// Element grammar: sums of products of scalar factors and generator tokens
// E<label>, F<label>, K[n,...]; '^' powers allowed on every factor.
// ---------------------------------------------------------------------------

class ElementParser {
public:
    ElementParser(const Algebra& alg, std::string src)
        : alg_(alg), src_(std::move(src)) {}

    AlgebraElement parse() {
        AlgebraElement v = expr();
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

    AlgebraElement expr() {
        bool neg = false;
        while (eat('-')) neg = !neg;
        AlgebraElement v = term();
        if (neg) v = v.scaled(Coef(-1));
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    AlgebraElement term() {
        AlgebraElement v = factor();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                v = alg_.mul(v, factor());
            } else if (c == '/') {
                ++pos_;
                AlgebraElement rhs = factor();
                // division only by a central scalar
                if (rhs.terms.size() != 1) fail("division by a non-scalar element");
                const auto& [m, cc] = *rhs.terms.begin();
                if (!m.e.empty() || !m.f.empty() || !rv_is_zero(m.k))
                    fail("division by a non-scalar element");
                v = v.scaled(Coef(1) / cc);
            } else if (c == '(' || c == 'E' || c == 'F' || c == 'K' || c == 'q' || c == 'i' ||
                       std::isdigit(static_cast<unsigned char>(c)) ||
                       std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                v = alg_.mul(v, factor());  // juxtaposition
            } else {
                return v;
            }
        }
    }
    AlgebraElement factor() {
        skip_ws();
        if (eat('-')) return factor().scaled(Coef(-1));
        AlgebraElement v = atom();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            long e = std::stol(src_.substr(start, pos_ - start));
            if (neg) {
                // negative powers only for K monomials and scalars
                if (v.terms.size() == 1) {
                    const auto& [m, cc] = *v.terms.begin();
                    if (m.e.empty() && m.f.empty()) {
                        AlgebraElement r = alg_.K(rv_neg(m.k)).scaled(Coef(1) / cc);
                        v = r;
                        return e == 1 ? v : alg_.pow(v, e);
                    }
                }
                fail("negative power of a non-invertible element");
            }
            v = alg_.pow(v, e);
        }
        return v;
    }
    AlgebraElement atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            AlgebraElement v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (c == 'E' || c == 'F') {
            size_t save = pos_;
            ++pos_;
            std::string label = read_label();
            if (!label.empty()) {
                int idx = label_index(label);
                if (idx < 0) fail("unknown node label '" + label + "'");
                return c == 'E' ? alg_.E(idx) : alg_.F(idx);
            }
            pos_ = save;  // a bare E or F is an ordinary identifier
        }
        if (c == 'K' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '[') {
            pos_ += 2;
            RootVector b;
            for (;;) {
                skip_ws();
                bool neg = eat('-');
                size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                if (start == pos_) fail("expected integer in K[...]");
                long long v = std::stoll(src_.substr(start, pos_ - start));
                b.push_back(neg ? -v : v);
                if (eat(']')) break;
                if (!eat(',')) fail("expected ',' or ']' in K[...]");
            }
            if (static_cast<int>(b.size()) != alg_.n()) fail("K[...] arity mismatch");
            return alg_.K(b);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return alg_.one().scaled(Coef(Scalar(std::stol(src_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = read_label();
            if (name == "q") return alg_.one().scaled(Coef(Scalar::q()));
            if (name == "i") return alg_.one().scaled(Coef(Scalar::i()));
            return alg_.one().scaled(PScalar::param(name));
        }
        fail("unexpected character");
        return {};
    }
    std::string read_label() {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '\''))
            ++pos_;
        return src_.substr(start, pos_ - start);
    }
    int label_index(const std::string& l) const {
        for (int k = 0; k < alg_.n(); ++k)
            if (alg_.datum().labels[static_cast<size_t>(k)] == l) return k;
        return -1;
    }

    const Algebra& alg_;
    std::string src_;
    size_t pos_ = 0;
};

inline AlgebraElement Algebra::parse(const std::string& src) const {
    return ElementParser(*this, src).parse();
}

inline std::string Algebra::str(const NormalMonomial& m) const {
    std::string s;
    auto app = [&](const std::string& t) {
        if (!s.empty()) s += " ";
        s += t;
    };
    for (int l : m.e) app("E" + d_.labels[static_cast<size_t>(l)]);
    if (!rv_is_zero(m.k)) {
        std::string ks = "K[";
        for (size_t t = 0; t < m.k.size(); ++t) {
            if (t) ks += ",";
            ks += std::to_string(m.k[t]);
        }
        app(ks + "]");
    }
    for (int l : m.f) app("F" + d_.labels[static_cast<size_t>(l)]);
    return s.empty() ? "1" : s;
}

inline std::string Algebra::str(const AlgebraElement& a) const {
    if (a.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : a.terms) {
        std::string mono = str(m);
        std::string coef = pscalar_str(c);
        std::string body;
        if (coef == "1" && mono != "1") body = mono;
        else if (mono == "1") body = "(" + coef + ")";
        else body = "(" + coef + ")*" + mono;
        if (first) {
            s = body;
            first = false;
        } else {
            s += " + " + body;
        }
    }
    return s;
}

} // namespace qkm
