#include "doctest.h"
#include "fixtures.hpp"

#include "toeplitz/homomorphism.hpp"

#include <numeric>

using namespace fixtures;

namespace {

LevelPatchZ williams_patch(const WilliamsToeplitz& w, Int radius) {
    LevelPatchZ x;
    x.radius = radius;
    for (Int n = -radius; n <= radius; ++n) x.cells.push_back(w.at(n));
    return x;
}

BoxIndexer inset(Int radius) {
    Vec lo{}, ext{};
    lo[0] = -radius;
    ext[0] = 2 * radius + 1;
    return BoxIndexer(1, lo, ext, 1);
}

Int dot(const std::vector<Int>& w, const Vec& u) {
    Int s = 0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * u[j];
    return s;
}

}  // namespace

TEST_CASE("homomorphism validation") {
    CHECK(validate_hom({{1, 0}}, GroupSpec(2)));
    CHECK(validate_hom({{1, 1}}, swap_group()));
    CHECK_FALSE(validate_hom({{1, 0}}, swap_group()));
    CHECK_FALSE(check_hom({{1, 0}}, swap_group()).compatible);
    for (Int a : {1, 2, -3, 7}) CHECK_FALSE(validate_hom({{a}}, dihedral_group()));
    CHECK_FALSE(validate_hom({{2, 4}}, GroupSpec(2)));
    CHECK(check_hom({{2, 4}}, GroupSpec(2)).compatible);
    CHECK_FALSE(validate_hom({{0, 0}}, GroupSpec(2)));
    CHECK_FALSE(validate_hom({{1}}, GroupSpec(2)));
    CHECK(validate_hom({{6, 10, 15}}, GroupSpec(3)));
}

TEST_CASE("section vectors") {
    SplitMix rng(5);
    int tested = 0;
    while (tested < 200) {
        std::vector<Int> w;
        const int r = static_cast<int>(rng.range(1, 4));
        Int g = 0;
        for (int j = 0; j < r; ++j) {
            w.push_back(rng.range(-40, 40));
            g = std::gcd(g, w.back());
        }
        if (g != 1) {
            CHECK_THROWS_AS(section_vector({w}), SpecError);
            continue;
        }
        CHECK(dot(w, section_vector({w})) == 1);
        ++tested;
    }
    CHECK(section_vector({{1, 1}})[0] == 1);
    CHECK(section(HomSpec{{1, 1}}, swap_group(), 7) == swap_group().element({7, 0}));
}

TEST_CASE("pullback patches") {
    WilliamsToeplitz w(williams_deck());
    auto x = williams_patch(w, 200);

    const GroupSpec Z2(2);
    auto win = box_indexer(Z2, 20, false);
    auto pulled = pullback_patch({{1, 0}}, Z2, x, win);
    for (std::size_t k = 0; k < win.size(); ++k) {
        const auto g = win.element(k);
        CHECK(pulled[k] == x.at(g.v[0]));  // rows constant in the second coordinate
    }

    const auto S = swap_group();
    const HomSpec sw{{1, 1}};
    auto swin = box_indexer(S, 10, true);
    auto sp = pullback_patch(sw, S, x, swin);
    CHECK(sp.at(S.element({0, 0}, 1)) == x.at(0));
    CHECK(sp.at(S.element({3, -3}, 1)) == x.at(0));
    CHECK(sp.at(S.element({4, 5}, 0)) == x.at(9));

    // Per(phi* x, phi^{-1}(p_1 Z)) contains phi^{-1} of the level-1 part of x
    const Int p1 = w.params().periods[0];
    SubgroupRef H{"phi^-1(p1 Z)", [&](const GroupElement& g) { return section(sw, S, floor_mod(phi(sw, g), p1)); }};
    const Symbol a1 = w.alpha(1);
    auto per = per_set_empirical(sp, H, a1);
    std::size_t level1 = 0;
    for (std::size_t k = 0; k < swin.size(); ++k)
        if (x.at(phi(sw, swin.element(k))).level == 1) {
            ++level1;
            CHECK(per[k]);
        }
    CHECK(level1 > 0);

    CHECK_THROWS_AS(pullback_patch(sw, S, x, box_indexer(S, 101, true)), SpecError);
}

TEST_CASE("equivariance") {
    WilliamsToeplitz w(williams_deck());
    auto x = williams_patch(w, 400);
    const auto S = swap_group();
    const HomSpec sw{{1, 1}};
    auto win = box_indexer(S, 40, true);

    auto k1 = equivariance_check(sw, S, x, S.element({1, -1}, 0), win);
    CHECK(k1.holds());
    auto k2 = equivariance_check(sw, S, x, S.element({0, 0}, 1), win);
    CHECK(k2.holds());
    // kernel elements fix phi* x
    auto base = pullback_patch(sw, S, x, win);
    for (std::size_t k = 0; k < win.size(); ++k) {
        const auto h = win.element(k);
        CHECK(base[k].symbol == x.at(phi(sw, S.op(S.inv(S.element({5, -5}, 1)), h))).symbol);
    }

    const GroupSpec Z2(2);
    CHECK(equivariance_check({{1, 0}}, Z2, x, Z2.element({3, 4}), box_indexer(Z2, 30, false)).holds());

    SplitMix rng(77);
    std::size_t checked = 0;
    for (int t = 0; t < 100; ++t) {
        const auto g = random_element(S, rng, 100);
        BoxIndexer one(2, win.element(static_cast<std::size_t>(rng.range(0, static_cast<Int>(win.size()) - 1))).v, Vec{1, 1, 0, 0}, 2);
        auto e = equivariance_check(sw, S, x, g, one);
        CHECK(e.holds());
        checked += e.checked;
    }
    CHECK(checked == 200);

    // the dihedral group has no homomorphism onto Z: the same formula breaks equivariance
    const auto D = dihedral_group();
    auto bad = equivariance_check({{1}}, D, x, D.element({3}, 1), box_indexer(D, 20, true));
    CHECK(bad.mismatches > 0);
}

TEST_CASE("transported certificates") {
    const auto S = swap_group();
    const HomSpec sw{{1, 1}};
    for (int m : {2, 3}) {
        WilliamsToeplitz w(williams_deck(m));
        auto x = williams_patch(w, w.defined_radius() - 1);
        // source searches stay inside the band's reach
        auto oracle = make_oracle(w, inset(x.radius - 10));
        auto pulled = pullback_oracle(sw, S, x, pullback_band(sw, S, x.radius));
        std::vector<Cylinder> cyl;
        for (int s = 0; s < m; ++s) cyl.push_back(symbol_cylinder(w.group(), static_cast<Symbol>(s)));
        for (std::size_t L = 1; L <= (m == 2 ? 3u : 2u); ++L) {
            auto res = kernels::serial::find_independence_set(w.group(), cyl, L, oracle, candidate_box(w.group(), 300), {});
            REQUIRE(res.outcome == SearchOutcome::Found);
            auto t = transport_certificate(sw, S, *res.certificate, pulled);
            CHECK(t.J.size() == L);
            CHECK(check_certificate(S, t, pulled));
            for (std::size_t j = 0; j < L; ++j) CHECK(phi(sw, t.J[j]) == res.certificate->J[j].v[0]);
            if (L == 1) CHECK(t.J[0] == S.identity());
        }
    }
    WilliamsToeplitz w(williams_deck());
    auto x = williams_patch(w, 1799);
    auto oracle = make_oracle(w, inset(1700));
    const GroupSpec Z2(2);
    auto pulled = pullback_oracle({{1, 0}}, Z2, x, pullback_band({{1, 0}}, Z2, x.radius));
    std::vector<Cylinder> cyl{symbol_cylinder(w.group(), 0), symbol_cylinder(w.group(), 1)};
    auto res = kernels::serial::find_independence_set(w.group(), cyl, 2, oracle, candidate_box(w.group(), 300), {});
    auto t = transport_certificate({{1, 0}}, Z2, *res.certificate, pulled);
    CHECK(check_certificate(Z2, t, pulled));

    Certificate tampered = *res.certificate;
    tampered.witnesses[1].v[0] += 1;
    CHECK_THROWS_AS(transport_certificate({{1, 0}}, Z2, tampered, pulled), InvariantViolation);
    CHECK_THROWS_AS(transport_certificate({{1}}, dihedral_group(), *res.certificate, pulled), SpecError);
}

TEST_CASE("pullback is injective at window scale") {
    SplitMix rng(9);
    const auto S = swap_group();
    const HomSpec sw{{1, 1}};
    auto win = box_indexer(S, 3, true);  // phi(W) = [-6, 6]
    std::vector<LevelPatchZ> sources;
    for (int t = 0; t < 30; ++t) {
        LevelPatchZ x;
        x.radius = 10;
        for (int n = 0; n < 21; ++n) x.cells.push_back(Cell{static_cast<Symbol>(rng.range(0, 1)), 1});
        sources.push_back(x);
        LevelPatchZ y = x;  // differs only outside phi(W)
        y.at(9).symbol = static_cast<Symbol>(1 - y.at(9).symbol);
        sources.push_back(y);
    }
    CHECK(injectivity_failures(sw, S, sources, win) == 0);
    CHECK(pullback_patch(sw, S, sources[0], win).symbols() == pullback_patch(sw, S, sources[1], win).symbols());
}

TEST_CASE("recurrence of the pullback") {
    WilliamsToeplitz w(williams_deck());
    auto x = williams_patch(w, 1799);
    const auto S = swap_group();
    for (Int r : {0, 1, 2}) {
        auto d = recurrence_diagnostic({{1, 1}}, S, x, r);
        CHECK(d.source_width == 4 * r + 1);
        CHECK(d.bounded_by_source());
        CHECK(d.pullback_patterns <= d.source_words);
        CHECK(d.source_gap > 0);
    }
}
