#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkm/cartan.hpp"
#include "qkm/scalar.hpp"

namespace qkm {

/// Word in the generators r_i; act() composes left-to-right, i.e. the last
/// letter is applied to the argument first.
using WeylWord = std::vector<int>;

inline RootVector act(const CartanDatum& d, const WeylWord& w, RootVector b) {
    for (size_t k = w.size(); k-- > 0;) b = d.reflect(w[k], std::move(b));
    return b;
}
inline RootVector act_coroot(const CartanDatum& d, const WeylWord& w, RootVector h) {
    for (size_t k = w.size(); k-- > 0;) h = d.reflect_coroot(w[k], std::move(h));
    return h;
}

/// Deterministic reduced word for the longest element of W_X: walk the
/// X-regular dominant weight to the antidominant chamber, smallest index
/// first.
inline WeylWord longest_word(const CartanDatum& d, const std::vector<int>& X) {
    if (!finite_type_subset(d, X)) throw NotFiniteType("longest element needs finite type X");
    std::vector<long long> p(static_cast<size_t>(d.n()), 0);  // pairings lambda(h_j), j in X
    for (int j : X) p[static_cast<size_t>(j)] = 1;
    WeylWord rec;
    for (;;) {
        int pick = -1;
        for (int j : X)
            if (p[static_cast<size_t>(j)] > 0) {
                pick = j;
                break;
            }
        if (pick < 0) break;
        rec.push_back(pick);
        long long pj = p[static_cast<size_t>(pick)];
        for (int k : X)
            p[static_cast<size_t>(k)] -=
                d.a[static_cast<size_t>(k)][static_cast<size_t>(pick)] * pj;
    }
    return {rec.rbegin(), rec.rend()};
}

/// alpha_j(2 rho_X^vee), the pairing against the sum of positive coroots.
inline long long pairing_2rho(const CartanDatum& d, const std::vector<int>& X, int j) {
    long long s = 0;
    for (const auto& h : positive_coroots(d, X)) s += d.pair_root(j, h);
    return s;
}

/// Multiplicative character of the root lattice with values in K(q)^x.
struct Character {
    std::vector<Scalar> values;  // value on alpha_i

    static Character trivial(int n) { return Character{std::vector<Scalar>(static_cast<size_t>(n), Scalar(1))}; }

    Scalar operator()(const RootVector& b) const {
        Scalar r(1);
        for (size_t k = 0; k < values.size(); ++k)
            if (b[k] != 0) r *= values[k].pow(b[k]);
        return r;
    }
    void check() const {
        for (const auto& v : values)
            if (v.is_zero()) throw InvalidCharacter("character value is zero");
    }
    friend Character operator*(const Character& a, const Character& b) {
        Character r = a;
        for (size_t k = 0; k < r.values.size(); ++k) r.values[k] *= b.values[k];
        return r;
    }
    Character inverse() const {
        Character r = *this;
        for (auto& v : r.values) v = v.inverse();
        return r;
    }
};

/// Admissible pair (X, tau) with cached combinatorial data.
struct AdmissiblePair {
    std::vector<int> X;            // sorted
    DiagramMap tau;
    WeylWord wX;
    DiagramMap tauX;               // the permutation with w_X(alpha_i) = -alpha_{tauX(i)}, on X
    std::vector<long long> rho2;   // alpha_j(2 rho_X^vee) for every j
    bool degenerate = false;       // X = I

    bool in_X(int i) const { return std::binary_search(X.begin(), X.end(), i); }
};

/// Theta(beta) = -w_X(tau(beta)) on the root lattice.
inline RootVector theta_on_Q(const CartanDatum& d, const AdmissiblePair& pair, const RootVector& b) {
    RootVector tb(b.size(), 0);
    for (size_t k = 0; k < b.size(); ++k) tb[static_cast<size_t>(pair.tau[k])] = b[k];
    return rv_neg(act(d, pair.wX, tb));
}

/// Builds the cached pair data without checking the admissibility axioms
/// (used internally and for negative controls).
inline AdmissiblePair make_pair_unchecked(const CartanDatum& d, std::vector<int> X, DiagramMap tau) {
    std::sort(X.begin(), X.end());
    AdmissiblePair p;
    p.X = std::move(X);
    p.tau = std::move(tau);
    p.wX = longest_word(d, p.X);
    p.tauX.assign(static_cast<size_t>(d.n()), -1);
    for (int i : p.X) {
        RootVector img = act(d, p.wX, rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)));
        RootVector neg = rv_neg(img);
        int target = -1;
        for (int j : p.X)
            if (neg == rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(j))) target = j;
        if (target < 0) throw NotFiniteType("w_X does not act as -1 composed with a permutation");
        p.tauX[static_cast<size_t>(i)] = target;
    }
    p.rho2.resize(static_cast<size_t>(d.n()));
    for (int j = 0; j < d.n(); ++j) p.rho2[static_cast<size_t>(j)] = pairing_2rho(d, p.X, j);
    p.degenerate = static_cast<int>(p.X.size()) == d.n();
    return p;
}

struct AdmissibleCheck {
    bool admissible = false;
    std::vector<std::string> failures;  // stable condition tags
    std::optional<AdmissiblePair> pair;
};

/// Checks the three admissibility conditions plus finite type of X and
/// reports every failed condition.
inline AdmissibleCheck validate_admissible(const CartanDatum& d, std::vector<int> X, DiagramMap tau) {
    AdmissibleCheck out;
    std::sort(X.begin(), X.end());
    for (int i : X)
        if (i < 0 || i >= d.n()) throw InvalidArgument("X contains an unknown node");
    if (!is_diagram_map(d, tau)) {
        out.failures.push_back("tau_not_diagram_automorphism");
        return out;
    }
    if (!finite_type_subset(d, X)) {
        out.failures.push_back("X_not_finite_type");
        return out;
    }
    bool tau_invol = true;
    for (int i = 0; i < d.n(); ++i)
        if (tau[static_cast<size_t>(tau[static_cast<size_t>(i)])] != i) tau_invol = false;
    if (!tau_invol) out.failures.push_back("condition1_tau_not_involutive");
    bool tau_X = true;
    for (int i : X)
        if (!std::binary_search(X.begin(), X.end(), tau[static_cast<size_t>(i)])) tau_X = false;
    if (!tau_X) {
        out.failures.push_back("tau_does_not_preserve_X");
        return out;
    }
    AdmissiblePair p = make_pair_unchecked(d, X, tau);
    for (int i : p.X)
        if (p.tau[static_cast<size_t>(i)] != p.tauX[static_cast<size_t>(i)]) {
            out.failures.push_back("condition2_tau_differs_from_minus_wX_on_X");
            break;
        }
    for (int j = 0; j < d.n(); ++j) {
        if (p.in_X(j) || p.tau[static_cast<size_t>(j)] != j) continue;
        if (p.rho2[static_cast<size_t>(j)] % 2 != 0) {
            out.failures.push_back("condition3_rho_pairing_not_integral");
            break;
        }
    }
    if (out.failures.empty()) {
        out.admissible = true;
        out.pair = std::move(p);
    }
    return out;
}

struct AdmissibleEnumeration {
    std::vector<AdmissiblePair> pairs;
    std::vector<std::vector<size_t>> orbits;  // indices into pairs, grouped under Aut(A)
};

/// All admissible pairs, grouped into Aut(A)-orbits under
/// sigma.(X,tau) = (sigma X, sigma tau sigma^-1).
inline AdmissibleEnumeration enumerate_admissible(const CartanDatum& d, int cap = 10) {
    int n = d.n();
    if (n > cap) throw IndexSetTooLarge("index set exceeds enumeration cap");
    auto auts = aut_A(d, cap);
    AdmissibleEnumeration out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> X;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) X.push_back(i);
        if (!finite_type_subset(d, X)) continue;
        for (const auto& tau : auts) {
            auto check = validate_admissible(d, X, tau);
            if (check.admissible) out.pairs.push_back(*check.pair);
        }
    }
    // orbit grouping
    auto key = [](const AdmissiblePair& p) { return std::make_pair(p.X, p.tau); };
    std::map<std::pair<std::vector<int>, DiagramMap>, size_t> index;
    for (size_t k = 0; k < out.pairs.size(); ++k) index[key(out.pairs[k])] = k;
    std::vector<bool> seen(out.pairs.size(), false);
    for (size_t k = 0; k < out.pairs.size(); ++k) {
        if (seen[k]) continue;
        std::vector<size_t> orbit;
        std::vector<size_t> stack{k};
        seen[k] = true;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            orbit.push_back(v);
            for (const auto& s : auts) {
                std::vector<int> sx;
                for (int i : out.pairs[v].X) sx.push_back(s[static_cast<size_t>(i)]);
                std::sort(sx.begin(), sx.end());
                DiagramMap st(static_cast<size_t>(n));
                for (int i = 0; i < n; ++i)
                    st[static_cast<size_t>(s[static_cast<size_t>(i)])] =
                        s[static_cast<size_t>(out.pairs[v].tau[static_cast<size_t>(i)])];
                auto it = index.find(std::make_pair(sx, st));
                if (it != index.end() && !seen[it->second]) {
                    seen[it->second] = true;
                    stack.push_back(it->second);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.orbits.push_back(std::move(orbit));
    }
    return out;
}

/// The fourth-root-of-unity character s(X,tau); `order` maps each index to
/// its rank in the chosen total order on I (defaults to label position).
inline Character s_character(const CartanDatum& d, const AdmissiblePair& pair,
                             const std::vector<int>& order = {}) {
    std::vector<int> pos(static_cast<size_t>(d.n()));
    if (order.empty()) {
        for (int k = 0; k < d.n(); ++k) pos[static_cast<size_t>(k)] = k;
    } else {
        if (static_cast<int>(order.size()) != d.n())
            throw InvalidArgument("total order must cover the index set");
        pos = order;
    }
    auto ipow = [](long long e) {
        switch (((e % 4) + 4) % 4) {
            case 0: return GaussRat(1);
            case 1: return GaussRat::i();
            case 2: return GaussRat(-1);
            default: return GaussRat(BigRat(0), BigRat(-1));
        }
    };
    Character s = Character::trivial(d.n());
    for (int j = 0; j < d.n(); ++j) {
        int tj = pair.tau[static_cast<size_t>(j)];
        if (pair.in_X(j) || tj == j) continue;
        long long e = pair.rho2[static_cast<size_t>(j)];
        s.values[static_cast<size_t>(j)] =
            Scalar(pos[static_cast<size_t>(tj)] > pos[static_cast<size_t>(j)] ? ipow(e) : ipow(-e));
    }
    s.check();
    return s;
}

/// Parameter domains for the coideal subalgebra attached to the pair.
struct ParamDomains {
    std::vector<std::pair<int, int>> c_equalities;  // c_i = c_tau(i), i < tau(i)
    std::vector<int> I_ns;
    std::vector<int> s_allowed;                     // i where s_i may be nonzero
    std::vector<int> I_star;                        // least-index tau-orbit representatives
    IMat qtheta_basis;                              // lattice basis of {b : Theta b = b}
};

inline ParamDomains parameter_domains(const CartanDatum& d, const AdmissiblePair& pair) {
    ParamDomains out;
    int n = d.n();
    for (int i = 0; i < n; ++i) {
        if (pair.in_X(i)) continue;
        int ti = pair.tau[static_cast<size_t>(i)];
        if (ti != i && i < ti) {
            RootVector ai = rv_unit(static_cast<size_t>(n), static_cast<size_t>(i));
            if (d.bilinear(ai, theta_on_Q(d, pair, ai)) == 0) out.c_equalities.emplace_back(i, ti);
        }
        if (ti == i) {
            bool ns = true;
            for (int j : pair.X)
                if (d.a[static_cast<size_t>(j)][static_cast<size_t>(i)] != 0) ns = false;  // alpha_i(h_j)
            if (ns) out.I_ns.push_back(i);
        }
        if (ti >= i) out.I_star.push_back(i);
    }
    for (int i : out.I_ns) {
        bool ok = true;
        for (int j : out.I_ns) {
            if (j == i) continue;
            long long a = d.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (a > 0 || (-a) % 2 != 0) ok = false;
        }
        if (ok) out.s_allowed.push_back(i);
    }
    // Theta - id as an integer matrix acting on column vectors
    IMat m(static_cast<size_t>(n), IVec(static_cast<size_t>(n), 0));
    for (int j = 0; j < n; ++j) {
        RootVector img = theta_on_Q(d, pair, rv_unit(static_cast<size_t>(n), static_cast<size_t>(j)));
        for (int r = 0; r < n; ++r)
            m[static_cast<size_t>(r)][static_cast<size_t>(j)] =
                img[static_cast<size_t>(r)] - (r == j ? 1 : 0);
    }
    out.qtheta_basis = int_kernel(m, static_cast<size_t>(n));
    return out;
}

inline bool in_qtheta(const ParamDomains& dom, const RootVector& b) {
    return int_solve_columns(dom.qtheta_basis, b).has_value();
}

// ---------------------------------------------------------------------------
// Untwisted affinization.
// ---------------------------------------------------------------------------

struct Affinization {
    CartanDatum datum;            // affine matrix with the new node first
    std::vector<long long> marks; // b_0 = 1; satisfies sum_j b_j a_ij = 0
    DiagramMap tauhat;
    AdmissiblePair pairhat;       // (X, tauhat) for the affine datum
};

/// Extends an indecomposable finite-type datum by the lowest-root node and
/// transports an admissible pair; the result is checked to be admissible.
inline Affinization affinize(const CartanDatum& d, const AdmissiblePair& pair) {
    if (d.comps.size() != 1) throw NotIndecomposable("affinization needs an indecomposable datum");
    if (d.comp_class[0] != TypeClass::Finite) throw NotFiniteType("affinization needs finite type");
    int n = d.n();
    RootVector theta = highest_root(d);
    long long eps0 = d.bilinear(theta, theta) / 2;

    std::string label0 = "0";
    while (std::find(d.labels.begin(), d.labels.end(), label0) != d.labels.end()) label0 += "0";
    std::vector<std::string> labels{label0};
    labels.insert(labels.end(), d.labels.begin(), d.labels.end());

    std::vector<std::vector<long long>> m(static_cast<size_t>(n + 1),
                                          std::vector<long long>(static_cast<size_t>(n + 1), 0));
    m[0][0] = 2;
    for (int j = 0; j < n; ++j) {
        RootVector aj = rv_unit(static_cast<size_t>(n), static_cast<size_t>(j));
        long long pairing = d.bilinear(theta, aj);
        if (pairing % eps0 != 0) throw NotGCM("affinization pairing is not integral");
        m[0][static_cast<size_t>(j + 1)] = -pairing / eps0;         // -alpha_j(theta^vee)
        m[static_cast<size_t>(j + 1)][0] = -d.pair_coroot(theta, j); // -alpha_max(h_j)
        for (int k = 0; k < n; ++k)
            m[static_cast<size_t>(j + 1)][static_cast<size_t>(k + 1)] =
                d.a[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }

    Affinization out{validate_cartan(std::move(labels), std::move(m)), {}, {}, {}};
    if (out.datum.comp_class[0] != TypeClass::Affine)
        throw NotGCM("affinization did not produce an affine matrix");

    out.marks.assign(static_cast<size_t>(n + 1), 0);
    out.marks[0] = 1;
    for (int j = 0; j < n; ++j) out.marks[static_cast<size_t>(j + 1)] = theta[static_cast<size_t>(j)];
    for (int i = 0; i <= n; ++i) {
        long long s = 0;
        for (int j = 0; j <= n; ++j)
            s += out.datum.a[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                 out.marks[static_cast<size_t>(j)];
        if (s != 0) throw NotGCM("marks do not annihilate the affine matrix");
    }

    out.tauhat.assign(static_cast<size_t>(n + 1), 0);
    for (int i = 0; i < n; ++i)
        out.tauhat[static_cast<size_t>(i + 1)] = pair.tau[static_cast<size_t>(i)] + 1;
    std::vector<int> Xhat;
    for (int i : pair.X) Xhat.push_back(i + 1);
    auto check = validate_admissible(out.datum, Xhat, out.tauhat);
    if (!check.admissible)
        throw NotGCM("transported pair is not admissible for the affinization");
    out.pairhat = *check.pair;
    return out;
}

// ---------------------------------------------------------------------------
// JSON interface for pairs: {"X":[...], "tau":{"1":"3", ...}}.
// ---------------------------------------------------------------------------

inline nlohmann::json pair_to_json(const CartanDatum& d, const AdmissiblePair& p) {
    nlohmann::json j;
    nlohmann::json xs = nlohmann::json::array();
    for (int i : p.X) xs.push_back(d.labels[static_cast<size_t>(i)]);
    j["X"] = xs;
    nlohmann::json tau = nlohmann::json::object();
    for (int i = 0; i < d.n(); ++i)
        if (p.tau[static_cast<size_t>(i)] != i)
            tau[d.labels[static_cast<size_t>(i)]] = d.labels[static_cast<size_t>(p.tau[static_cast<size_t>(i)])];
    j["tau"] = tau;
    j["degenerate"] = p.degenerate;
    return j;
}

inline std::string json_label(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError("node label must be a string or integer");
}

inline std::pair<std::vector<int>, DiagramMap> pair_spec_from_json(const CartanDatum& d,
                                                                   const nlohmann::json& j) {
    std::vector<int> X;
    if (j.contains("X"))
        for (const auto& v : j["X"]) X.push_back(d.index_of(json_label(v)));
    DiagramMap tau(static_cast<size_t>(d.n()));
    for (int i = 0; i < d.n(); ++i) tau[static_cast<size_t>(i)] = i;
    if (j.contains("tau"))
        for (auto it = j["tau"].begin(); it != j["tau"].end(); ++it)
            tau[static_cast<size_t>(d.index_of(it.key()))] = d.index_of(json_label(it.value()));
    return {X, tau};
}

} // namespace qkm
