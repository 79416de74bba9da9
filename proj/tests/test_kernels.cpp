#include "doctest.h"
#include "fixtures.hpp"

#include "toeplitz/kernels.hpp"
#include "toeplitz/periods.hpp"

#include <set>

using namespace fixtures;

namespace {

struct ThreadGuard {
    explicit ThreadGuard(int n) { set_threads(n); }
    ~ThreadGuard() { set_threads(0); }
};

std::size_t distinct_oracle(const std::vector<Symbol>& seq, std::size_t width) {
    std::set<std::vector<Symbol>> s;
    for (std::size_t k = 0; k + width <= seq.size(); ++k) s.emplace(seq.begin() + k, seq.begin() + k + width);
    return s.size();
}

}  // namespace

TEST_CASE("materialize and census agree across implementations") {
    for (int t : {1, 2, 4}) {
        ThreadGuard guard(t);
        auto sys = dihedral();
        auto window = sys.lattice().domain_indexer(3, true);
        auto a = kernels::serial::materialize(sys, window);
        auto b = kernels::parallel::materialize(sys, window);
        CHECK(a.cells() == b.cells());
        auto ca = kernels::serial::census(a, sys.steps(), 3);
        auto cb = kernels::parallel::census(a, sys.steps(), 3);
        CHECK(ca == cb);
        // direct count
        std::int64_t beta = 0, level2 = 0;
        for (const auto& c : a.cells()) {
            beta += c.symbol == kBeta;
            level2 += c.level == 2;
        }
        CHECK(ca.symbol_total(kBeta) == beta);
        CHECK(ca.level_total(2) == level2);
        CHECK(ca.undefined == 0);
    }
}

TEST_CASE("cell and z-mass tallies agree across implementations") {
    auto sys = dihedral(6);
    auto eta = make_approximant(sys, 4);
    for (int t : {1, 3}) {
        ThreadGuard guard(t);
        for (int n = 1; n <= 3; ++n) {
            auto j = sys.compute_J(n);
            CHECK(kernels::serial::cell_tally(eta, n, j, 3) == kernels::parallel::cell_tally(eta, n, j, 3));
            CHECK(kernels::serial::z_mass_tally(eta, n, j, 3) == kernels::parallel::z_mass_tally(eta, n, j, 3));
        }
    }
    auto tally = kernels::serial::cell_tally(eta, 1, sys.compute_J(1), 3);
    CHECK(tally.nonconstant == 0);
    std::int64_t total = 0;
    for (auto c : tally.by_symbol) total += c;
    CHECK(total == static_cast<std::int64_t>(sys.lattice().gamma_in_domain(1, 4).size()));
}

TEST_CASE("approximant needs a defined window") {
    auto sys = dihedral(3);
    CHECK_NOTHROW(make_approximant(sys, 2));
    CHECK_THROWS_AS(make_approximant(sys, 3), DepthExhausted);
}

TEST_CASE("distinct words against a set oracle") {
    SplitMix rng(11);
    for (int alphabet : {2, 3, 200}) {
        std::vector<Symbol> seq(3000);
        for (auto& s : seq) s = static_cast<Symbol>(rng.range(0, alphabet - 1));
        for (std::size_t width : {1, 2, 5, 9, 20, 40}) {
            const std::size_t want = distinct_oracle(seq, width);
            CHECK(kernels::serial::distinct_words(seq, width) == want);
            CHECK(kernels::parallel::distinct_words(seq, width) == want);
        }
    }
    CHECK(kernels::serial::distinct_words({1, 2}, 3) == 0);
    CHECK(kernels::serial::distinct_words({1, 2}, 0) == 0);
}

TEST_CASE("fiber scans agree across implementations") {
    WilliamsToeplitz w(williams_deck());
    Vec lo{}, ext{};
    lo[0] = -4;
    ext[0] = 9;
    BoxIndexer window(1, lo, ext, 1);
    auto oracle = default_oracle(w);
    auto a = kernels::serial::fiber_scan(w, 2, window, oracle);
    for (int t : {1, 2}) {
        ThreadGuard guard(t);
        CHECK(a == kernels::parallel::fiber_scan(w, 2, window, oracle));
    }
    CHECK(a.coords_scanned == 90);

    auto sys = dihedral(4);
    auto gwin = box_indexer(sys.group(), 2, true);
    auto goracle = default_oracle(sys);
    auto b = kernels::serial::fiber_scan(sys, 1, gwin, goracle);
    CHECK(b == kernels::parallel::fiber_scan(sys, 1, gwin, goracle));
}
