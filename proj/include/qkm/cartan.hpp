#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkm/linalg.hpp"
#include "qkm/rational.hpp"

namespace qkm {

/// Element of the root lattice Q in the alpha-basis (or of the coroot
/// lattice in the h-basis; both are plain integer coordinate vectors).
using RootVector = std::vector<long long>;

inline RootVector rv_add(const RootVector& a, const RootVector& b) {
    RootVector r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
    return r;
}
inline RootVector rv_sub(const RootVector& a, const RootVector& b) {
    RootVector r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}
inline RootVector rv_neg(const RootVector& a) {
    RootVector r(a.size());
    for (size_t k = 0; k < a.size(); ++k) r[k] = -a[k];
    return r;
}
inline bool rv_is_zero(const RootVector& a) {
    return std::all_of(a.begin(), a.end(), [](long long x) { return x == 0; });
}
inline bool rv_in_Qplus(const RootVector& a) {
    return std::all_of(a.begin(), a.end(), [](long long x) { return x >= 0; });
}
inline long long rv_height(const RootVector& a) {
    long long h = 0;
    for (long long x : a) h += x;
    return h;
}
inline RootVector rv_unit(size_t n, size_t i, long long v = 1) {
    RootVector r(n, 0);
    r[i] = v;
    return r;
}

/// Permutation of the index set preserving the Cartan matrix.
using DiagramMap = std::vector<int>;

enum class TypeClass { Finite, Affine, Indefinite };

inline const char* type_class_name(TypeClass t) {
    switch (t) {
        case TypeClass::Finite: return "finite";
        case TypeClass::Affine: return "affine";
        default: return "indefinite";
    }
}

/// Generalized Cartan matrix with its coprime symmetrizer, component
/// structure and per-component type classification.
struct CartanDatum {
    std::vector<std::string> labels;
    std::vector<std::vector<long long>> a;  // a[i][j] = alpha_j(h_i)
    std::vector<long long> eps;             // symmetrizer, coprime per component
    std::vector<std::vector<int>> comps;
    std::vector<TypeClass> comp_class;

    int n() const { return static_cast<int>(labels.size()); }

    int index_of(const std::string& label) const {
        for (int k = 0; k < n(); ++k)
            if (labels[static_cast<size_t>(k)] == label) return k;
        throw InvalidArgument("unknown node label '" + label + "'");
    }

    /// (beta, gamma) extended bilinearly from (alpha_i, alpha_j) = eps_i a_ij.
    long long bilinear(const RootVector& b, const RootVector& g) const {
        long long s = 0;
        for (int i = 0; i < n(); ++i) {
            if (b[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; j < n(); ++j)
                s += b[static_cast<size_t>(i)] * g[static_cast<size_t>(j)] *
                     eps[static_cast<size_t>(i)] * a[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        return s;
    }

    /// beta(h_i) for beta in Q.
    long long pair_coroot(const RootVector& b, int i) const {
        long long s = 0;
        for (int j = 0; j < n(); ++j)
            s += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * b[static_cast<size_t>(j)];
        return s;
    }

    /// alpha_i(h) for a coroot vector h (coordinates in the h-basis).
    long long pair_root(int i, const RootVector& h) const {
        long long s = 0;
        for (int j = 0; j < n(); ++j)
            s += h[static_cast<size_t>(j)] * a[static_cast<size_t>(j)][static_cast<size_t>(i)];
        return s;
    }

    /// Simple reflection on Q: r_i(b) = b - b(h_i) alpha_i.
    RootVector reflect(int i, RootVector b) const {
        b[static_cast<size_t>(i)] -= pair_coroot(b, i);
        return b;
    }
    /// Simple reflection on the coroot lattice: r_i(h) = h - alpha_i(h) h_i.
    RootVector reflect_coroot(int i, RootVector h) const {
        h[static_cast<size_t>(i)] -= pair_root(i, h);
        return h;
    }
};

namespace detail {

inline bool positive_definite(const std::vector<std::vector<BigRat>>& m) {
    // Sylvester: all leading principal minors positive; computed by
    // fraction-free forward elimination on a rational copy.
    size_t n = m.size();
    std::vector<std::vector<BigRat>> w = m;
    for (size_t k = 0; k < n; ++k) {
        if (w[k][k] <= 0) return false;
        for (size_t r = k + 1; r < n; ++r) {
            BigRat f = w[r][k] / w[k][k];
            for (size_t c = k; c < n; ++c) w[r][c] -= f * w[k][c];
        }
    }
    return true;
}

inline BigRat determinant(std::vector<std::vector<BigRat>> w) {
    size_t n = w.size();
    BigRat det(1);
    for (size_t k = 0; k < n; ++k) {
        size_t sel = k;
        while (sel < n && w[sel][k] == 0) ++sel;
        if (sel == n) return BigRat(0);
        if (sel != k) {
            std::swap(w[sel], w[k]);
            det = -det;
        }
        det *= w[k][k];
        for (size_t r = k + 1; r < n; ++r) {
            BigRat f = w[r][k] / w[k][k];
            for (size_t c = k; c < n; ++c) w[r][c] -= f * w[k][c];
        }
    }
    return det;
}

inline std::vector<std::vector<BigRat>> symmetrized_submatrix(const CartanDatum& d,
                                                              const std::vector<int>& idx) {
    std::vector<std::vector<BigRat>> m(idx.size(), std::vector<BigRat>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
        for (size_t c = 0; c < idx.size(); ++c)
            m[r][c] = BigRat(d.eps[static_cast<size_t>(idx[r])] *
                             d.a[static_cast<size_t>(idx[r])][static_cast<size_t>(idx[c])]);
    return m;
}

} // namespace detail

/// Checks the GCM axioms, computes the coprime symmetrizer and classifies
/// each connected component.
inline CartanDatum validate_cartan(std::vector<std::string> labels,
                                   std::vector<std::vector<long long>> matrix) {
    CartanDatum d;
    size_t n = labels.size();
    if (matrix.size() != n) throw NotGCM("matrix size does not match label count");
    for (const auto& row : matrix)
        if (row.size() != n) throw NotGCM("matrix is not square");
    {
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != n) throw NotGCM("duplicate node labels");
    }
    for (size_t i = 0; i < n; ++i) {
        if (matrix[i][i] != 2) throw NotGCM("diagonal entry is not 2");
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (matrix[i][j] > 0) throw NotGCM("positive off-diagonal entry");
            if ((matrix[i][j] == 0) != (matrix[j][i] == 0))
                throw NotGCM("vanishing pattern is not symmetric");
        }
    }
    d.labels = std::move(labels);
    d.a = std::move(matrix);

    // connected components of the Dynkin graph
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<size_t> stack{s};
        comp[s] = nc;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (size_t w = 0; w < n; ++w)
                if (comp[w] < 0 && d.a[v][w] != 0) {
                    comp[w] = nc;
                    stack.push_back(w);
                }
        }
        ++nc;
    }
    d.comps.assign(static_cast<size_t>(nc), {});
    for (size_t k = 0; k < n; ++k) d.comps[static_cast<size_t>(comp[k])].push_back(static_cast<int>(k));

    // symmetrizer: propagate ratios along edges; scale per component
    std::vector<BigRat> e(n, BigRat(0));
    for (const auto& c : d.comps) {
        e[static_cast<size_t>(c[0])] = 1;
        std::vector<int> stack{c[0]};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : c) {
                if (d.a[static_cast<size_t>(v)][static_cast<size_t>(w)] == 0 || v == w) continue;
                // eps_v * a_vw = eps_w * a_wv
                BigRat need = e[static_cast<size_t>(v)] *
                              make_rat(BigInt(d.a[static_cast<size_t>(v)][static_cast<size_t>(w)]),
                                       BigInt(d.a[static_cast<size_t>(w)][static_cast<size_t>(v)]));
                if (e[static_cast<size_t>(w)] == 0) {
                    e[static_cast<size_t>(w)] = need;
                    stack.push_back(w);
                } else if (e[static_cast<size_t>(w)] != need) {
                    throw NotSymmetrizable("inconsistent symmetrizer ratios on a cycle");
                }
            }
        }
        BigInt l(1);
        for (int v : c) l = boost::multiprecision::lcm(l, rat_den(e[static_cast<size_t>(v)]));
        BigInt g(0);
        for (int v : c) {
            e[static_cast<size_t>(v)] *= BigRat(l);
            g = boost::multiprecision::gcd(g, rat_num(e[static_cast<size_t>(v)]));
        }
        for (int v : c) e[static_cast<size_t>(v)] /= BigRat(g);
    }
    d.eps.resize(n);
    for (size_t k = 0; k < n; ++k) d.eps[k] = static_cast<long long>(rat_num(e[k]));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (d.eps[i] * d.a[i][j] != d.eps[j] * d.a[j][i])
                throw NotSymmetrizable("symmetrized matrix is not symmetric");

    for (const auto& c : d.comps) {
        auto m = detail::symmetrized_submatrix(d, c);
        if (detail::positive_definite(m)) {
            d.comp_class.push_back(TypeClass::Finite);
            continue;
        }
        bool affine = detail::determinant(m) == 0;
        if (affine) {
            for (size_t drop = 0; drop < c.size() && affine; ++drop) {
                std::vector<int> sub;
                for (size_t k = 0; k < c.size(); ++k)
                    if (k != drop) sub.push_back(c[k]);
                if (!sub.empty() && !detail::positive_definite(detail::symmetrized_submatrix(d, sub)))
                    affine = false;
            }
        }
        d.comp_class.push_back(affine ? TypeClass::Affine : TypeClass::Indefinite);
    }
    return d;
}

inline bool finite_type_subset(const CartanDatum& d, const std::vector<int>& X) {
    if (X.empty()) return true;
    return detail::positive_definite(detail::symmetrized_submatrix(d, X));
}

inline bool is_diagram_map(const CartanDatum& d, const DiagramMap& p) {
    int n = d.n();
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        if (p[static_cast<size_t>(i)] < 0 || p[static_cast<size_t>(i)] >= n) return false;
        seen[static_cast<size_t>(p[static_cast<size_t>(i)])] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.a[static_cast<size_t>(p[static_cast<size_t>(i)])][static_cast<size_t>(p[static_cast<size_t>(j)])] !=
                d.a[static_cast<size_t>(i)][static_cast<size_t>(j)])
                return false;
    return true;
}

/// All matrix-preserving permutations, by backtracking.
inline std::vector<DiagramMap> aut_A(const CartanDatum& d, int cap = 10) {
    int n = d.n();
    if (n > cap) throw IndexSetTooLarge("index set exceeds automorphism search cap");
    std::vector<DiagramMap> out;
    DiagramMap p(static_cast<size_t>(n), -1);
    std::vector<bool> used(static_cast<size_t>(n), false);
    auto consistent = [&](int i) {
        for (int j = 0; j <= i; ++j) {
            if (d.a[static_cast<size_t>(p[static_cast<size_t>(i)])][static_cast<size_t>(p[static_cast<size_t>(j)])] !=
                    d.a[static_cast<size_t>(i)][static_cast<size_t>(j)] ||
                d.a[static_cast<size_t>(p[static_cast<size_t>(j)])][static_cast<size_t>(p[static_cast<size_t>(i)])] !=
                    d.a[static_cast<size_t>(j)][static_cast<size_t>(i)])
                return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            out.push_back(p);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<size_t>(v)]) continue;
            p[static_cast<size_t>(i)] = v;
            used[static_cast<size_t>(v)] = true;
            if (consistent(i)) rec(i + 1);
            used[static_cast<size_t>(v)] = false;
        }
        p[static_cast<size_t>(i)] = -1;
    };
    rec(0);
    return out;
}

/// Positive roots of the parabolic root system on X by reflection closure.
inline std::vector<RootVector> positive_roots(const CartanDatum& d, const std::vector<int>& X) {
    if (!finite_type_subset(d, X)) throw NotFiniteType("positive-root closure needs finite type");
    std::set<RootVector> roots;
    std::vector<RootVector> queue;
    for (int i : X) {
        roots.insert(rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)));
        queue.push_back(rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)));
    }
    while (!queue.empty()) {
        RootVector b = queue.back();
        queue.pop_back();
        for (int i : X) {
            RootVector g = d.reflect(i, b);
            if (rv_in_Qplus(g) && !roots.count(g)) {
                roots.insert(g);
                queue.push_back(g);
            }
        }
    }
    return {roots.begin(), roots.end()};
}

/// Positive coroots of the parabolic root system on X (h-basis coordinates).
inline std::vector<RootVector> positive_coroots(const CartanDatum& d, const std::vector<int>& X) {
    if (!finite_type_subset(d, X)) throw NotFiniteType("coroot closure needs finite type");
    std::set<RootVector> coroots;
    std::vector<RootVector> queue;
    for (int i : X) {
        coroots.insert(rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)));
        queue.push_back(rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)));
    }
    while (!queue.empty()) {
        RootVector h = queue.back();
        queue.pop_back();
        for (int i : X) {
            RootVector g = d.reflect_coroot(i, h);
            if (rv_in_Qplus(g) && !coroots.count(g)) {
                coroots.insert(g);
                queue.push_back(g);
            }
        }
    }
    return {coroots.begin(), coroots.end()};
}

/// Highest root of an indecomposable finite-type datum.
inline RootVector highest_root(const CartanDatum& d) {
    if (d.comps.size() != 1) throw NotIndecomposable("highest root needs one component");
    if (d.comp_class[0] != TypeClass::Finite) throw NotFiniteType("highest root needs finite type");
    std::vector<int> all(static_cast<size_t>(d.n()));
    for (int i = 0; i < d.n(); ++i) all[static_cast<size_t>(i)] = i;
    auto roots = positive_roots(d, all);
    RootVector best = roots.front();
    for (const auto& r : roots)
        if (rv_height(r) > rv_height(best)) best = r;
    // saturation sanity: the maximum is unique and cannot be raised
    std::set<RootVector> rset(roots.begin(), roots.end());
    for (const auto& r : roots)
        if (rv_height(r) == rv_height(best) && r != best)
            throw NotIndecomposable("highest root is not unique");
    for (int i = 0; i < d.n(); ++i)
        if (rset.count(rv_add(best, rv_unit(static_cast<size_t>(d.n()), static_cast<size_t>(i)))))
            throw NotIndecomposable("candidate highest root is not maximal");
    return best;
}

// ---------------------------------------------------------------------------
// Generalized intersection matrices.
// ---------------------------------------------------------------------------

/// Cartan-like matrix allowing positive off-diagonal entries; sign pattern
/// symmetric and symmetrizable.
struct GimMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<long long>> a;
    int n() const { return static_cast<int>(labels.size()); }
};

inline GimMatrix validate_gim(std::vector<std::string> labels,
                              std::vector<std::vector<long long>> matrix) {
    size_t n = labels.size();
    if (matrix.size() != n) throw NotGCM("GIM size does not match label count");
    for (const auto& row : matrix)
        if (row.size() != n) throw NotGCM("GIM is not square");
    for (size_t i = 0; i < n; ++i) {
        if (matrix[i][i] != 2) throw NotGCM("GIM diagonal entry is not 2");
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if ((matrix[i][j] > 0) != (matrix[j][i] > 0) || (matrix[i][j] < 0) != (matrix[j][i] < 0))
                throw NotGCM("GIM sign pattern is not symmetric");
        }
    }
    // symmetrizability: same ratio propagation as for a GCM
    GimMatrix g;
    g.labels = std::move(labels);
    g.a = std::move(matrix);
    std::vector<BigRat> e(n, BigRat(0));
    for (size_t s = 0; s < n; ++s) {
        if (e[s] != 0) continue;
        e[s] = 1;
        std::vector<size_t> stack{s};
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (size_t w = 0; w < n; ++w) {
                if (v == w || g.a[v][w] == 0) continue;
                BigRat need = e[v] * make_rat(BigInt(g.a[v][w]), BigInt(g.a[w][v]));
                if (need <= 0) need = -need;
                if (e[w] == 0) {
                    e[w] = need;
                    stack.push_back(w);
                } else if (e[w] != need) {
                    throw NotSymmetrizable("GIM is not symmetrizable");
                }
            }
        }
    }
    return g;
}

struct GimDouble {
    CartanDatum datum;   // C(A) on I and its barred copy
    DiagramMap sigma;    // swaps i and bar(i)
    bool unoriented;     // C(A) indecomposable
};

/// The doubling C(A): negative entries are copied to both diagonal blocks,
/// positive off-diagonal entries move to the off-blocks with flipped sign.
inline GimDouble gim_double(const GimMatrix& g) {
    int n = g.n();
    size_t nn = static_cast<size_t>(2 * n);
    std::vector<std::vector<long long>> c(nn, std::vector<long long>(nn, 0));
    for (int i = 0; i < n; ++i) {
        c[static_cast<size_t>(i)][static_cast<size_t>(i)] = 2;
        c[static_cast<size_t>(n + i)][static_cast<size_t>(n + i)] = 2;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            long long aij = g.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (aij <= 0) {
                c[static_cast<size_t>(i)][static_cast<size_t>(j)] = aij;
                c[static_cast<size_t>(n + i)][static_cast<size_t>(n + j)] = aij;
            } else {
                c[static_cast<size_t>(i)][static_cast<size_t>(n + j)] = -aij;
                c[static_cast<size_t>(n + i)][static_cast<size_t>(j)] = -aij;
            }
        }
    }
    std::vector<std::string> labels;
    labels.reserve(nn);
    for (const auto& l : g.labels) labels.push_back(l);
    for (const auto& l : g.labels) labels.push_back(l + "'");
    GimDouble out{validate_cartan(std::move(labels), std::move(c)), {}, false};
    out.sigma.resize(nn);
    for (int i = 0; i < n; ++i) {
        out.sigma[static_cast<size_t>(i)] = n + i;
        out.sigma[static_cast<size_t>(n + i)] = i;
    }
    if (!is_diagram_map(out.datum, out.sigma))
        throw NotGCM("doubling produced an inconsistent fold");
    out.unoriented = out.datum.comps.size() == 1;
    return out;
}

// ---------------------------------------------------------------------------
// JSON interface: {"labels":[...], "matrix":[[int]]}, GIM carries "gim":true.
// ---------------------------------------------------------------------------

inline std::vector<std::string> labels_from_json(const nlohmann::json& j) {
    std::vector<std::string> labels;
    for (const auto& l : j) {
        if (l.is_string()) labels.push_back(l.get<std::string>());
        else if (l.is_number_integer()) labels.push_back(std::to_string(l.get<long long>()));
        else throw ParseError("labels must be strings or integers");
    }
    return labels;
}

inline CartanDatum cartan_from_json(const nlohmann::json& j) {
    if (!j.contains("labels") || !j.contains("matrix")) throw ParseError("need labels and matrix");
    if (j.value("gim", false)) throw ParseError("matrix is flagged gim:true; use the GIM reader");
    return validate_cartan(labels_from_json(j["labels"]),
                           j["matrix"].get<std::vector<std::vector<long long>>>());
}

inline GimMatrix gim_from_json(const nlohmann::json& j) {
    if (!j.contains("labels") || !j.contains("matrix")) throw ParseError("need labels and matrix");
    return validate_gim(labels_from_json(j["labels"]),
                        j["matrix"].get<std::vector<std::vector<long long>>>());
}

inline nlohmann::json cartan_to_json(const CartanDatum& d) {
    nlohmann::json j;
    j["labels"] = d.labels;
    j["matrix"] = d.a;
    j["symmetrizer"] = d.eps;
    nlohmann::json comps = nlohmann::json::array();
    for (size_t k = 0; k < d.comps.size(); ++k) {
        nlohmann::json c;
        c["nodes"] = d.comps[k];
        c["class"] = type_class_name(d.comp_class[k]);
        comps.push_back(c);
    }
    j["components"] = comps;
    return j;
}

} // namespace qkm
