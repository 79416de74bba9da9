#include "doctest.h"
#include "fixtures.hpp"

#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"

#include <cmath>

using namespace fixtures;

namespace {

Rational sum(const MeasureVector& v) {
    Rational s = 0;
    for (const auto& x : v) s += x;
    return s;
}

}  // namespace

TEST_CASE("symbol frequencies of mu_n") {
    auto sys = dihedral(6);
    auto mu1 = mu_n_freq(sys, 1);
    CHECK(mu1[kBeta] == frac(1, 10));
    CHECK(mu1[2] >= frac(8, 10));
    CHECK(sum(mu1) == 1);
    for (int n = 1; n <= 5; ++n) {
        auto mu = mu_n_freq(sys, n);
        CHECK(sum(mu) == 1);
        CHECK(mu[kBeta] == beta_mass_closed_form(sys));
        // step symbol carries |J(n)R| + a_{n,alpha}
        auto t = count_table(sys, n);
        const Symbol a = sys.alpha(n + 1);
        CHECK(mu[static_cast<std::size_t>(a)] == Rational(t.fresh + t.per[static_cast<std::size_t>(a)], t.domain));
        Int total = t.fresh;
        for (Int x : t.per) total += x;
        CHECK(total == t.domain);
        CHECK(t.fresh == static_cast<Int>(sys.compute_J(n).size()) * 2);
    }
    CHECK(beta_mass_closed_form(sys) == frac(1, 10));
    CHECK(mu_n_freq(z2(4), 2)[kBeta] == 0);
    CHECK(beta_mass_closed_form(z2()) == 0);
    CHECK_THROWS_AS(mu_n_freq(dihedral(3), 3), DepthExhausted);
}

TEST_CASE("d_n product formula") {
    auto sys = dihedral(6);
    auto d0 = d_product_check(sys, 0);
    CHECK(d0.equal);
    CHECK(d0.counted == frac(1, 5));
    auto d1 = d_product_check(sys, 1);
    CHECK(d1.equal);
    CHECK(1 - d1.counted == frac(16, 25));
    Rational prev = 0;
    for (int n = 0; n <= 3; ++n) {
        auto d = d_product_check(sys, n);
        CHECK(d.equal);
        CHECK(d.below_half == (n <= 2));  // ratio 5 per level: d_4 = 369/625
        CHECK(d.counted >= prev);
        prev = d.counted;
    }
    for (int n = 0; n <= 2; ++n) {
        CHECK(d_product_check(z2(4), n).equal);
        CHECK(d_product_check(swapdeck(4), n).equal);
    }
    WilliamsToeplitz w(williams_deck());
    for (int n = 0; n <= 3; ++n) CHECK(d_product_check(w, n).equal);
    CHECK(d_product_check(w, 2).below_half);
}

TEST_CASE("simplex vertices") {
    auto sys = dihedral(6);
    for (int N = 2; N <= 4; ++N) {
        auto v = simplex_vertices(sys, N);
        REQUIRE(v.size() == 2);
        for (const auto& t : v) {
            CHECK(sum(t) == 1);
            CHECK(t[kBeta] == frac(1, 10));
        }
        CHECK(v[0] != v[1]);
        const Rational d = count_table(sys, N).d;
        CHECK(v[0][1] - v[1][1] == 1 - d);
        CHECK((1 - d > d) == (N <= 3));
    }
}

TEST_CASE("transition matrices") {
    auto sys = dihedral(6);
    // alpha_2 = 2 at n = 1, alpha_3 = 1 at n = 2; q = 5
    auto A1 = matrix_An(sys, 1);
    CHECK(A1 == RatMatrix{{4, 0}, {1, 5}});
    auto A2 = matrix_An(sys, 2);
    CHECK(A2 == RatMatrix{{5, 1}, {0, 4}});
    CHECK(determinant(A2) == 20);
    CHECK(matrix_A0(sys) == RatMatrix{{9, 1}, {0, 8}, {1, 1}});
    for (std::size_t j = 0; j < 2; ++j) {
        Rational col = 0;
        for (const auto& row : matrix_A0(sys)) col += row[j];
        CHECK(col == 10);
    }
    auto z = z2(4);
    CHECK(matrix_A0(z).back() == std::vector<Rational>{0, 0});
    CHECK(determinant(RatMatrix{{1, 2}, {2, 4}}) == 0);
    CHECK(determinant(RatMatrix{{0, 1}, {1, 0}}) == -1);
}

TEST_CASE("A_n and A_0 identities on periodic measures") {
    for (auto sys : {dihedral(6), z2(5), swapdeck(5)}) {
        auto eta4 = make_approximant(sys, 4);
        for (int n = 1; n <= 2; ++n) CHECK(verify_An_recursion(sys, eta4, n).holds);
        auto a0 = matrix_A0_check(sys, eta4);
        CHECK(a0.holds);
        CHECK(a0.rank == 2);
        CHECK(chain_reconstruction(sys, eta4, 3).holds);
    }
    auto sys = dihedral(6);
    auto eta3 = make_approximant(sys, 3);
    CHECK(verify_An_recursion(sys, eta3, 1).holds);
    CHECK_THROWS_AS(verify_An_recursion(sys, eta3, 2), SpecError);
}

TEST_CASE("cell measure agrees with explicit classification") {
    auto sys = dihedral(6);
    auto eta3 = make_approximant(sys, 3);
    const ArrayFn x3 = [&](const GroupElement& g) { return eta3.at(g); };
    const auto& G = sys.group();
    std::vector<Int> counts(3, 0);
    for (const auto& u : sys.lattice().gamma_in_domain(1, 3)) {
        auto x = [&, u](const GroupElement& h) { return x3(G.op(u, h)); };
        auto c = classify_cell(sys, x, 1, sys.compute_J(1), 3);
        REQUIRE(c.found);
        ++counts[static_cast<std::size_t>(c.symbol)];
    }
    auto mu = cell_measure(sys, eta3, 1);
    CHECK(mu.mu[0] == Rational(counts[1], 250));
    CHECK(mu.mu[1] == Rational(counts[2], 250));
}

TEST_CASE("nu estimates") {
    auto sys = dihedral(8);
    std::vector<MeasureVector> last;
    for (int i = 1; i <= 2; ++i) {
        auto nu = estimate_nu(sys, i, {1, 2, 3});
        CHECK(nu.dominant);
        CHECK(nu.levels == std::vector<int>{i + 1, i + 3, i + 5});
        for (const auto& v : nu.vectors) CHECK(v[kBeta] == frac(1, 10));
        CHECK(nu.step_distance.size() == 2);
        last.push_back(nu.vectors.back());
    }
    CHECK(last[0] != last[1]);
}

TEST_CASE("Z set masses") {
    auto sys = dihedral(8);
    for (int i = 1; i <= 2; ++i) {
        auto a = z_mass(sys, i, 1, 2);
        auto b = z_mass(sys, i, 1, 3);
        CHECK(a.agrees);
        CHECK(b.agrees);
        CHECK(a.above_bound);
        CHECK(b.above_bound);
        CHECK(a.bound == Rational(1, sys.lattice().domain_r_size(i + 1)));
        MESSAGE("Z_{" << i << ",1}: " << to_string(a.mass) << " -> " << to_string(b.mass));
    }
    CHECK(z_mass(sys, 1, 1, 2).bound == frac(1, 50));
    CHECK_THROWS_AS(z_mass(sys, 1, 2, 2), SpecError);
}

TEST_CASE("pattern complexity") {
    std::vector<Symbol> constant(500, 1);
    for (const auto& p : complexity_profile(constant, {1, 2, 5})) CHECK(p.count == 1);

    WilliamsToeplitz w(williams_deck());
    std::vector<Symbol> seq;
    for (Int n = -w.defined_radius(); n < w.defined_radius(); ++n) seq.push_back(w.at(n).symbol);
    std::vector<Int> radii{2, 3, 4, 5, 6, 7, 8};
    auto prof = complexity_profile(seq, radii);
    CHECK(strictly_decreasing(prof));

    SplitMix rng(1234);
    std::vector<Symbol> noise(1 << 20);
    for (auto& s : noise) s = static_cast<Symbol>(rng.next() & 1);
    auto control = complexity_profile(noise, radii);
    CHECK_FALSE(strictly_decreasing(control));
    CHECK(control.front().ratio == doctest::Approx(std::log(2.0)));

    CHECK_THROWS_AS(complexity_profile(std::vector<Symbol>(50, 0), {2}), SpecError);
}

TEST_CASE("periodic measure is shift invariant") {
    auto sys = dihedral(6);
    auto eta = make_approximant(sys, 3);
    const auto& G = sys.group();
    for (const auto& g : {G.element({1}, 0), G.element({0}, 1), G.element({-7}, 1), G.element({40}, 0)}) {
        auto s = shift_invariance(sys, eta, g);
        CHECK(s.within);
        CHECK(s.max_count_diff == 0);
    }
}
