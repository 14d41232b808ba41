#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qkm/weyl.hpp"

using namespace qkm;

namespace {

CartanDatum make(const std::vector<std::vector<long long>>& m) {
    std::vector<std::string> labels;
    for (size_t k = 1; k <= m.size(); ++k) labels.push_back(std::to_string(k));
    return validate_cartan(labels, m);
}

const std::vector<std::vector<long long>> A1{{2}};
const std::vector<std::vector<long long>> A2{{2, -1}, {-1, 2}};
const std::vector<std::vector<long long>> A3{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
const std::vector<std::vector<long long>> AffSl2{{2, -2}, {-2, 2}};

DiagramMap idmap(int n) {
    DiagramMap p(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) p[static_cast<size_t>(k)] = k;
    return p;
}

DiagramMap swap13() { return DiagramMap{2, 1, 0}; }

} // namespace

TEST_CASE("simple reflections act on Q") {
    auto a2 = make(A2);
    CHECK(act(a2, {0}, RootVector{1, 0}) == RootVector{-1, 0});
    auto a3 = make(A3);
    CHECK(act(a3, {1}, RootVector{0, 0, 1}) == RootVector{0, 1, 1});
    std::mt19937 rng(3);
    std::uniform_int_distribution<long long> u(-4, 4);
    for (int t = 0; t < 40; ++t) {
        RootVector b{u(rng), u(rng), u(rng)};
        for (int i = 0; i < 3; ++i) CHECK(act(a3, {i, i}, b) == b);
    }
}

TEST_CASE("longest parabolic words") {
    auto a2 = make(A2);
    CHECK(longest_word(a2, {0}) == WeylWord{0});
    auto w12 = longest_word(a2, {0, 1});
    CHECK(w12.size() == 3);

    auto a3 = make(A3);
    auto w13 = longest_word(a3, {0, 2});
    CHECK(w13.size() == 2);
    CHECK(act(a3, w13, RootVector{1, 0, 0}) == RootVector{-1, 0, 0});
    CHECK(act(a3, w13, RootVector{0, 0, 1}) == RootVector{0, 0, -1});

    CHECK_THROWS_AS(longest_word(make(AffSl2), {0, 1}), NotFiniteType);

    // length equals the number of positive roots; acting twice is trivial
    for (auto X : std::vector<std::vector<int>>{{0}, {1}, {0, 1}, {0, 2}, {0, 1, 2}}) {
        auto w = longest_word(a3, X);
        CHECK(w.size() == positive_roots(a3, X).size());
        for (int i : X) {
            RootVector ai = rv_unit(3, static_cast<size_t>(i));
            RootVector img = act(a3, w, ai);
            CHECK_FALSE(rv_in_Qplus(img));
            CHECK(act(a3, w, img) == ai);
        }
    }
}

TEST_CASE("rho pairings") {
    auto a3 = make(A3);
    CHECK(pairing_2rho(a3, {0, 2}, 0) == 2);
    CHECK(pairing_2rho(a3, {0, 2}, 1) == -2);
    CHECK(pairing_2rho(a3, {0, 2}, 2) == 2);
    CHECK(pairing_2rho(a3, {0}, 1) == -1);
    for (auto X : std::vector<std::vector<int>>{{0}, {0, 1}, {0, 2}, {0, 1, 2}})
        for (int j : X) CHECK(pairing_2rho(a3, X, j) == 2);
}

TEST_CASE("theta on the root lattice") {
    auto a3 = make(A3);
    auto chk = validate_admissible(a3, {1}, swap13());
    REQUIRE(chk.admissible);
    const auto& p = *chk.pair;
    CHECK(theta_on_Q(a3, p, RootVector{1, 0, 0}) == RootVector{0, -1, -1});

    // involution and bilinear invariance on a spanning set
    std::mt19937 rng(17);
    std::uniform_int_distribution<long long> u(-3, 3);
    for (int t = 0; t < 40; ++t) {
        RootVector b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
        CHECK(theta_on_Q(a3, p, theta_on_Q(a3, p, b)) == b);
        CHECK(a3.bilinear(theta_on_Q(a3, p, b), theta_on_Q(a3, p, c)) == a3.bilinear(b, c));
    }

    // X-stability: Theta preserves ZX
    CHECK(theta_on_Q(a3, p, RootVector{0, 1, 0}) == RootVector{0, 1, 0});

    auto triv = validate_admissible(a3, {}, idmap(3));
    REQUIRE(triv.admissible);
    CHECK(theta_on_Q(a3, *triv.pair, RootVector{1, 2, -1}) == RootVector{-1, -2, 1});
}

TEST_CASE("admissibility verdicts for the rank-3 chain") {
    auto a3 = make(A3);
    CHECK(validate_admissible(a3, {0, 2}, idmap(3)).admissible);
    CHECK(validate_admissible(a3, {1}, swap13()).admissible);

    auto c1 = validate_admissible(a3, {0}, idmap(3));
    CHECK_FALSE(c1.admissible);
    CHECK(c1.failures == std::vector<std::string>{"condition3_rho_pairing_not_integral"});

    auto c2 = validate_admissible(a3, {1}, idmap(3));
    CHECK_FALSE(c2.admissible);
    CHECK(c2.failures == std::vector<std::string>{"condition3_rho_pairing_not_integral"});

    auto c3 = validate_admissible(a3, {0, 1}, idmap(3));
    CHECK_FALSE(c3.admissible);
    CHECK(c3.failures ==
          std::vector<std::string>{"condition2_tau_differs_from_minus_wX_on_X"});
}

TEST_CASE("enumeration with orbits") {
    auto a1 = make(A1);
    auto e1 = enumerate_admissible(a1);
    CHECK(e1.pairs.size() == 2);
    CHECK(e1.pairs[1].degenerate);

    auto a2 = make(A2);
    auto e2 = enumerate_admissible(a2);
    CHECK(e2.pairs.size() == 3);

    auto a3 = make(A3);
    auto e3 = enumerate_admissible(a3);
    bool has13 = false, has2swap = false;
    for (const auto& p : e3.pairs) {
        if (p.X == std::vector<int>{0, 2} && p.tau == idmap(3)) has13 = true;
        if (p.X == std::vector<int>{1} && p.tau == swap13()) has2swap = true;
    }
    CHECK(has13);
    CHECK(has2swap);

    // stability: every automorphism maps admissible pairs to admissible pairs
    for (const auto& s : aut_A(a3)) {
        for (const auto& p : e3.pairs) {
            std::vector<int> sx;
            for (int i : p.X) sx.push_back(s[static_cast<size_t>(i)]);
            DiagramMap st(3);
            for (int i = 0; i < 3; ++i)
                st[static_cast<size_t>(s[static_cast<size_t>(i)])] =
                    s[static_cast<size_t>(p.tau[static_cast<size_t>(i)])];
            CHECK(validate_admissible(a3, sx, st).admissible);
        }
    }
    for (const auto& orbit : e3.orbits) CHECK(!orbit.empty());
}

TEST_CASE("s character") {
    auto a3 = make(A3);
    auto triv = *validate_admissible(a3, {}, idmap(3)).pair;
    auto s0 = s_character(a3, triv);
    for (const auto& v : s0.values) CHECK(v == Scalar(1));

    auto p = *validate_admissible(a3, {1}, swap13()).pair;
    auto s = s_character(a3, p);
    CHECK(s.values[0] == Scalar(GaussRat(BigRat(0), BigRat(-1))));  // -i
    CHECK(s.values[1] == Scalar(1));
    CHECK(s.values[2] == Scalar::i());
    CHECK(s.values[0] * s.values[2] == Scalar(1));

    // swapped indices always multiply to 1
    auto aff = make(AffSl2);
    auto pswap = *validate_admissible(aff, {}, DiagramMap{1, 0}).pair;
    auto ss = s_character(aff, pswap);
    CHECK(ss.values[0] * ss.values[1] == Scalar(1));
}

TEST_CASE("parameter domains") {
    auto aff = make(AffSl2);
    auto p = *validate_admissible(aff, {}, idmap(2)).pair;
    auto dom = parameter_domains(aff, p);
    CHECK(dom.c_equalities.empty());
    CHECK(dom.I_ns == std::vector<int>{0, 1});
    CHECK(dom.s_allowed == std::vector<int>{0, 1});
    CHECK(dom.I_star == std::vector<int>{0, 1});
    CHECK(dom.qtheta_basis.empty());  // Theta = -id on the affine sl2 lattice

    auto a3 = make(A3);
    auto p13 = *validate_admissible(a3, {0, 2}, idmap(3)).pair;
    auto dom13 = parameter_domains(a3, p13);
    CHECK(dom13.I_ns.empty());
    CHECK(dom13.s_allowed.empty());
    CHECK(dom13.I_star == std::vector<int>{1});

    auto p2 = *validate_admissible(a3, {1}, swap13()).pair;
    auto dom2 = parameter_domains(a3, p2);
    CHECK(dom2.qtheta_basis.size() == 2);
    CHECK(in_qtheta(dom2, RootVector{1, 0, -1}));
    CHECK(in_qtheta(dom2, RootVector{0, 1, 0}));
    CHECK_FALSE(in_qtheta(dom2, RootVector{1, 0, 0}));
}

TEST_CASE("affinization") {
    auto a1 = make(A1);
    auto p = *validate_admissible(a1, {}, idmap(1)).pair;
    auto aff = affinize(a1, p);
    CHECK(aff.datum.a == std::vector<std::vector<long long>>{{2, -2}, {-2, 2}});
    CHECK(aff.marks == std::vector<long long>{1, 1});

    auto a2 = make(A2);
    auto aff2 = affinize(a2, *validate_admissible(a2, {}, idmap(2)).pair);
    CHECK(aff2.marks == std::vector<long long>{1, 1, 1});
    CHECK(aff2.tauhat == idmap(3));
    CHECK(aff2.datum.comp_class[0] == TypeClass::Affine);

    auto a3 = make(A3);
    auto aff3 = affinize(a3, *validate_admissible(a3, {0, 2}, idmap(3)).pair);
    CHECK(aff3.pairhat.X == std::vector<int>{1, 3});

    // non-simply-laced: the new node row and column differ
    auto c2 = make({{2, -2}, {-1, 2}});
    auto affc = affinize(c2, *validate_admissible(c2, {}, idmap(2)).pair);
    CHECK(affc.datum.a[0][1] == -1);
    CHECK(affc.datum.a[1][0] == -2);
    CHECK(affc.marks == std::vector<long long>{1, 2, 1});

    CHECK_THROWS_AS(affinize(make(AffSl2), *validate_admissible(make(AffSl2), {}, idmap(2)).pair),
                    NotFiniteType);
}

TEST_CASE("pair json round trip") {
    auto a3 = make(A3);
    auto p = *validate_admissible(a3, {1}, swap13()).pair;
    auto j = pair_to_json(a3, p);
    auto [X, tau] = pair_spec_from_json(a3, j);
    CHECK(X == p.X);
    CHECK(tau == p.tau);
}
