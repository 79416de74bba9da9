#include "doctest.h"
#include "fixtures.hpp"

#include "toeplitz/kernels.hpp"

#include <set>

using namespace fixtures;

namespace {

GroupElement at(const GroupSpec& g, Int v, int f = 0) { return g.element({v}, f); }

std::vector<Int> coords1(const std::vector<GroupElement>& s) {
    std::vector<Int> out;
    for (const auto& g : s) out.push_back(g.v[0]);
    return out;
}

}  // namespace

TEST_CASE("dihedral array first steps") {
    auto sys = dihedral();
    const auto& G = sys.group();
    CHECK(sys.eta_value(G.identity()) == Cell{1, 1});
    CHECK(sys.eta_value(at(G, 0, 1)) == Cell{kBeta, 1});
    for (Int d : {-2, -1, 1, 2})
        for (int f = 0; f < 2; ++f) CHECK(sys.eta_value(at(G, d, f)) == Cell{2, 2});
    CHECK(sys.has_beta());
    CHECK(sys.alphabet() == std::vector<Symbol>{0, 1, 2});
}

TEST_CASE("J sets by subtraction and by recursion") {
    auto sys = dihedral();
    CHECK(sys.compute_J(0) == std::vector<GroupElement>{sys.group().identity()});
    CHECK(coords1(sys.compute_J(1)) == std::vector<Int>{-2, -1, 1, 2});
    // |J(2)| = |D_2| - |D_2 ∩ Gamma_1| - |D_2 ∩ Gamma_2 J(1)| = 25 - 5 - 4
    CHECK(sys.compute_J(2).size() == 16);
    for (int n = 0; n <= 3; ++n) CHECK(sys.compare_J(n).equal);
    auto z = z2();
    for (int n = 0; n <= 3; ++n) CHECK(z.compare_J(n).equal);
    CHECK(z.compute_J(1).size() == 24);
    auto sw = swapdeck();
    for (int n = 0; n <= 2; ++n) CHECK(sw.compare_J(n).equal);
}

TEST_CASE("J(n) is exactly the level n+1 part of D_n") {
    for (auto sys : {dihedral(), z2(4), swapdeck(4)}) {
        for (int n = 0; n <= 2; ++n) {
            std::set<std::vector<Int>> j;
            for (const auto& g : sys.compute_J(n)) j.insert({g.v[0], g.v[1]});
            for (const auto& g : sys.lattice().enumerate_domain(n, false))
                CHECK((sys.level_of(g) == n + 1) == (j.count({g.v[0], g.v[1]}) == 1));
        }
    }
}

TEST_CASE("point evaluation on deeper strata") {
    auto sys = dihedral();
    const auto& G = sys.group();
    // gamma in Gamma_2 \ Gamma_3, d in J(1), r in R
    for (Int gamma : {25, -50, 75})
        for (Int d : {-2, -1, 1, 2})
            for (int f = 0; f < 2; ++f) CHECK(sys.eta_value(G.op(at(G, gamma), at(G, d, f))) == Cell{2, 2});
    CHECK(sys.eta_value(at(G, 5)) == Cell{1, 1});
    CHECK(sys.eta_value(at(G, 3)) == Cell{1, 3});  // J(2) contains 3 = 5 - 2, alpha_3 = 1 for m = 2

    auto shallow = dihedral(3);
    CHECK_FALSE(shallow.cell(at(G, 31)).defined());
    CHECK_THROWS_AS(shallow.eta_value(at(G, 31)), DepthExhausted);
    CHECK(shallow.cell(at(G, 6)).level == 3);
}

TEST_CASE("normal variant over Z^2 has no extra symbol") {
    auto sys = z2();
    CHECK_FALSE(sys.has_beta());
    CHECK(sys.alphabet() == std::vector<Symbol>{1, 2});
    auto patch = kernels::serial::materialize(sys, sys.lattice().domain_indexer(3, true));
    for (const auto& c : patch.cells()) {
        CHECK(c.defined());
        CHECK(c.symbol != kBeta);
        CHECK(c.symbol == sys.alpha(c.level));
    }
}

TEST_CASE("strata partition D_N R") {
    for (int N = 1; N <= 3; ++N) {
        auto rep = dihedral().check_strata(N);
        CHECK(rep.ok());
        CHECK(rep.window_size == static_cast<std::size_t>(2 * dihedral().lattice().domain_size(N)));
        CHECK(rep.stratum_sizes[0] == static_cast<std::size_t>(dihedral().lattice().domain_size(N) / 5));
    }
    for (int N = 1; N <= 2; ++N) {
        CHECK(z2().check_strata(N).ok());
        CHECK(swapdeck().check_strata(N).ok());
    }
    auto z = z2().check_strata(2);
    CHECK(z.stratum_sizes[0] == 0);
    CHECK(z.stratum_sizes[1] == 25);
    CHECK(z.stratum_sizes[2] == 24);
    CHECK(z.stratum_sizes[3] == 576);
}

TEST_CASE("array fully defined on D_N R for N = steps - 1") {
    for (auto sys : {dihedral(5), z2(4), swapdeck(4)}) {
        auto patch = kernels::serial::materialize(sys, sys.lattice().domain_indexer(sys.max_window_level(), true));
        for (const auto& c : patch.cells()) REQUIRE(c.defined());
    }
}

TEST_CASE("periodic approximant") {
    auto sys = dihedral();
    const auto& G = sys.group();
    SplitMix rng(7);
    for (int n = 1; n <= 3; ++n) {
        for (const auto& w : sys.lattice().enumerate_domain(n, true)) CHECK(sys.eta_n_value(n, w) == sys.eta_value(w).symbol);
        for (int trial = 0; trial < 200; ++trial) {
            GroupElement g = random_element(G, rng, 200);
            GroupElement gamma = at(G, rng.range(-3, 3) * sys.lattice().modulus(n)[0]);
            CHECK(sys.eta_n_value(n, G.op(gamma, g)) == sys.eta_n_value(n, g));
            auto dec = sys.lattice().decompose_right(g, n);
            GroupElement w = at(G, dec.d[0], dec.r);
            CHECK(sys.eta_n_value(n, g) == sys.eta_value(w).symbol);
        }
    }
}

TEST_CASE("translates of J(i) R carry one symbol") {
    auto sys = dihedral();
    auto base = sys.verify_translate_constancy(1, sys.group().identity());
    CHECK(base.constant);
    CHECK(base.symbol == sys.alpha(2));
    for (int i = 1; i <= 2; ++i)
        for (const auto& gamma : sys.lattice().gamma_in_domain(i, 3)) {
            auto t = sys.verify_translate_constancy(i, gamma);
            CHECK(t.constant);
            CHECK(t.symbol >= 1);
        }
    auto z = z2();
    for (const auto& gamma : z.lattice().gamma_in_domain(1, 3)) CHECK(z.verify_translate_constancy(1, gamma).constant);
    CHECK_THROWS_AS(sys.verify_translate_constancy(1, at(sys.group(), 3)), SpecError);
}

TEST_CASE("construction parameter validation") {
    auto lat = Lattice::with_default_offsets(dihedral_group(), powers1(5, 3));
    CHECK_THROWS_AS(GroupToeplitz({lat, 1, Variant::Virtually43}), SpecError);
    CHECK_THROWS_AS(GroupToeplitz({lat, 2, Variant::Normal41}), SpecError);
    CHECK_THROWS_AS(GroupToeplitz({Lattice::with_default_offsets(GroupSpec(1), powers1(5, 1)), 2, Variant::Normal41}),
                    SpecError);
    // p^1 = 3 violates p^1 > 2i + 1
    auto small = Lattice::with_default_offsets(GroupSpec(1), powers1(3, 3));
    CHECK_FALSE(small.growth_violations().empty());
    CHECK_THROWS_AS(GroupToeplitz({small, 2, Variant::Normal41}), SpecError);
    CHECK(parse_variant("normal") == Variant::Normal41);
    CHECK(parse_variant("virtually") == Variant::Virtually43);
    CHECK_THROWS_AS(parse_variant("other"), SpecError);
}

TEST_CASE("Z reduction: both constructions have p_k-periodic level sets") {
    auto line = zline(4);
    WilliamsToeplitz w(williams_deck());
    const auto& G = line.group();
    for (int k = 1; k <= 3; ++k) {
        const Int pg = line.lattice().modulus(k)[0];
        const Int pw = w.params().periods[static_cast<std::size_t>(k - 1)];
        for (Int n = -400; n < 400; ++n) {
            const Cell a = line.cell(at(G, n)), b = line.cell(at(G, n + pg));
            CHECK((a.defined() && a.level <= k) == (b.defined() && b.level <= k));
            const Cell c = w.at(n), d = w.at(n + pw);
            CHECK((c.defined() && c.level <= k) == (d.defined() && d.level <= k));
        }
    }
    // level k residues: one class mod p_1 for the group array, two for the two-block array
    Int g1 = 0, w1 = 0;
    for (Int n = 0; n < 5; ++n) g1 += line.cell(at(G, n)).level == 1;
    for (Int n = 0; n < 9; ++n) w1 += w.at(n).level == 1;
    CHECK(g1 == 1);
    CHECK(w1 == 2);
}
