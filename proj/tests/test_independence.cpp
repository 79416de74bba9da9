#include "doctest.h"
#include "fixtures.hpp"

#include "toeplitz/independence.hpp"

#include <cmath>

using namespace fixtures;

namespace {

struct ThreadGuard {
    explicit ThreadGuard(int n) { set_threads(n); }
    ~ThreadGuard() { set_threads(0); }
};

std::vector<Cylinder> symbol_cylinders(const ToeplitzSystem& sys, int from, int to) {
    std::vector<Cylinder> out;
    for (int s = from; s <= to; ++s) out.push_back(symbol_cylinder(sys.group(), static_cast<Symbol>(s)));
    return out;
}

BoxIndexer line(Int radius) {
    Vec lo{}, ext{};
    lo[0] = -radius;
    ext[0] = 2 * radius + 1;
    return BoxIndexer(1, lo, ext, 1);
}

WindowPatch to_patch(const BoxIndexer& win, const std::vector<Symbol>& s) {
    WindowPatch p(win);
    for (std::size_t i = 0; i < s.size(); ++i) p[i].symbol = s[i];
    return p;
}

// Patches of a fiber whose Aper pieces all carry one symbol.
std::vector<WindowPatch> constant_aper_points(const ToeplitzSystem& sys, int K, const BoxIndexer& win,
                                              const LanguageOracle& oracle) {
    for (const auto& c : all_coords(sys.lattice(), K)) {
        auto f = fiber_enumerate(sys, c, win, oracle);
        std::vector<WindowPatch> pts;
        for (std::size_t p = 0; p < f.patches.size(); ++p) {
            const auto& a = f.aper_symbols[p];
            if (!a.empty() && std::all_of(a.begin(), a.end(), [&](Symbol s) { return s == a[0]; }))
                pts.push_back(to_patch(win, f.patches[p]));
        }
        if (pts.size() >= 2) return pts;
    }
    return {};
}

// independent re-check of one assignment straight from the array
bool realizes(const WilliamsToeplitz& w, const Certificate& c, std::size_t code) {
    const Int h = c.witnesses[code].v[0];
    for (std::size_t j = 0; j < c.J.size(); ++j) {
        const Cylinder& a = c.cylinders[c.digit(code, j)];
        for (std::size_t t = 0; t < a.shape.size(); ++t)
            if (w.at(h - c.J[j].v[0] + a.shape[t].v[0]).symbol != a.pattern[t]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("certificate basics") {
    WilliamsToeplitz w(williams_deck());
    auto oracle = default_oracle(w);
    const auto& G = w.group();
    auto space = candidate_box(G, 200);

    // one cylinder: any J works
    auto one = kernels::serial::find_independence_set(G, {symbol_cylinder(G, 1)}, 3, oracle, space, {});
    REQUIRE(one.outcome == SearchOutcome::Found);
    CHECK(check_certificate(G, *one.certificate, oracle));
    CHECK(one.certificate->J.front() == G.identity());

    // |J| = 1 is one occurrence query per cylinder
    auto single = kernels::serial::find_independence_set(G, symbol_cylinders(w, 0, 1), 1, oracle, space, {});
    REQUIRE(single.outcome == SearchOutcome::Found);
    CHECK(single.nodes == 1);
    CHECK(single.certificate->witnesses.size() == 2);

    auto cert = *kernels::serial::find_independence_set(G, symbol_cylinders(w, 0, 1), 3, oracle, space, {}).certificate;
    CHECK(cert.assignments() == 8);
    for (std::size_t c = 0; c < 8; ++c) CHECK(realizes(w, cert, c));

    Certificate broken = cert;
    broken.witnesses[5].v[0] += 1;
    CHECK_FALSE(check_certificate(G, broken, oracle));
    broken = cert;
    broken.witnesses[2].v[0] = 1799;
    broken.J[0].v[0] = -5;
    CHECK_THROWS_AS(check_certificate(G, broken, oracle), WitnessOutsideWindow);
    broken = cert;
    broken.witnesses.pop_back();
    CHECK_THROWS_AS(check_certificate(G, broken, oracle), SpecError);
}

TEST_CASE("symbol cylinder certificates on the Z decks") {
    for (int m : {2, 3}) {
        WilliamsToeplitz w(williams_deck(m));
        auto oracle = default_oracle(w);
        const Int p3 = w.params().periods[2];
        auto space = candidate_box(w.group(), p3);
        const std::size_t L = m == 2 ? 3 : 2;
        auto res = kernels::parallel::find_independence_set(w.group(), symbol_cylinders(w, 0, m - 1), L, oracle, space, {});
        REQUIRE(res.outcome == SearchOutcome::Found);
        CHECK(res.certificate->J.size() == L);
        CHECK(res.certificate->k() == static_cast<std::size_t>(m));
        for (const auto& g : res.certificate->J) CHECK(std::abs(g.v[0]) <= p3);

        // re-verified against a fresh, larger oracle from a deeper chain
        auto params = williams_deck(m);
        params.periods.push_back(params.periods.back() * 20);
        WilliamsToeplitz deep(params);
        auto big = make_oracle(deep, line(6000));
        CHECK(check_certificate(deep.group(), *res.certificate, big));

        // pigeonhole: m+1 disjoint single-site cylinders
        for (std::size_t l : {1, 2}) {
            auto none = kernels::parallel::find_independence_set(w.group(), symbol_cylinders(w, 0, m), l, oracle, space, {});
            CHECK(none.outcome == SearchOutcome::None);
            CHECK_FALSE(none.certificate);
        }
    }
}

TEST_CASE("search is deterministic across implementations") {
    WilliamsToeplitz w(williams_deck());
    auto oracle = default_oracle(w);
    const auto& G = w.group();
    auto space = candidate_box(G, 300);
    auto cyl = symbol_cylinders(w, 0, 1);
    for (std::size_t L : {2, 3, 4}) {
        auto a = kernels::serial::find_independence_set(G, cyl, L, oracle, space, {});
        for (int t : {1, 2, 3}) {
            ThreadGuard guard(t);
            auto b = kernels::parallel::find_independence_set(G, cyl, L, oracle, space, {});
            CHECK(a.outcome == b.outcome);
            CHECK(a.nodes == b.nodes);
            REQUIRE(a.certificate.has_value() == b.certificate.has_value());
            if (a.certificate) {
                CHECK(a.certificate->J == b.certificate->J);
                CHECK(a.certificate->witnesses == b.certificate->witnesses);
            }
        }
    }
    // a window-complete failure
    auto pts = constant_aper_points(w, 2, line(4), oracle);
    REQUIRE(pts.size() == 2);
    std::vector<Cylinder> wide{restrict_patch(pts[0], 4), restrict_patch(pts[1], 4)};
    auto small_space = gamma_candidates(w.lattice(), 2, 1800);
    auto sa = kernels::serial::find_independence_set(G, wide, 3, oracle, small_space, {});
    auto pa = kernels::parallel::find_independence_set(G, wide, 3, oracle, small_space, {});
    CHECK(sa.outcome == SearchOutcome::None);
    CHECK(pa.outcome == SearchOutcome::None);
    CHECK(sa.nodes == pa.nodes);
}

TEST_CASE("budget exhaustion is not a negative") {
    WilliamsToeplitz w(williams_deck());
    auto oracle = default_oracle(w);
    auto pts = constant_aper_points(w, 2, line(4), oracle);
    REQUIRE(pts.size() == 2);
    std::vector<Cylinder> cyl{restrict_patch(pts[0], 4), restrict_patch(pts[1], 4)};
    auto space = candidate_box(w.group(), 1800);
    SearchBudget tight;
    tight.nodes = 1000;
    for (auto* f : {&kernels::serial::find_independence_set, &kernels::parallel::find_independence_set}) {
        auto r = (*f)(w.group(), cyl, 3, oracle, space, tight);
        CHECK(r.outcome == SearchOutcome::Exhausted);
        CHECK_FALSE(r.certificate);
    }
    SearchBudget quick;
    quick.seconds = 1e-9;
    CHECK(kernels::serial::find_independence_set(w.group(), cyl, 3, oracle, space, quick).outcome == SearchOutcome::Exhausted);
    CHECK(to_string(SearchOutcome::Exhausted) == "exhausted");
    CHECK_THROWS_AS(kernels::serial::find_independence_set(w.group(), cyl, 0, oracle, space, {}), SpecError);
}

TEST_CASE("restriction and padding") {
    WilliamsToeplitz w(williams_deck(3));
    auto oracle = default_oracle(w);
    const auto& G = w.group();
    auto res = kernels::serial::find_independence_set(G, symbol_cylinders(w, 0, 2), 2, oracle, candidate_box(G, 400), {});
    REQUIRE(res.outcome == SearchOutcome::Found);
    const Certificate& c = *res.certificate;
    for (std::vector<std::size_t> keep_j : {std::vector<std::size_t>{0}, {1}, {1, 0}, {0, 1}})
        for (std::vector<std::size_t> keep_c : {std::vector<std::size_t>{0}, {2, 1}, {1, 2, 0}, {0, 2}}) {
            auto r = restrict_certificate(c, keep_j, keep_c);
            CHECK(r.k() == keep_c.size());
            CHECK(r.J.size() == keep_j.size());
            CHECK(check_certificate(G, r, oracle));
        }
    auto padded = pad_certificate(c);
    CHECK(padded.k() == 4);
    CHECK(padded.cylinders[0] == padded.cylinders[1]);
    CHECK(check_certificate(G, padded, oracle));
    CHECK(check_certificate(G, pad_certificate(padded), oracle));
}

TEST_CASE("fiber tuples") {
    WilliamsToeplitz w(williams_deck());
    auto oracle = default_oracle(w);
    const auto& G = w.group();
    auto pts = constant_aper_points(w, 2, line(4), oracle);
    REQUIRE(pts.size() == 2);
    auto space = gamma_candidates(w.lattice(), 2, 1800);

    auto pair = in_tuple_search(G, pts, {4, 2}, 2, oracle, space, {}, w.fiber_bound());
    CHECK(pair.filter_ok);
    CHECK(pair.certified());
    auto triple = in_tuple_search(G, pts, {4, 2}, 3, oracle, space, {}, w.fiber_bound());
    CHECK_FALSE(triple.certified());
    REQUIRE(triple.failure_radius);
    CHECK(*triple.failure_radius == 4);
    CHECK(triple.attempts[1].result.outcome == SearchOutcome::Found);

    auto single = in_tuple_search(G, {pts[0]}, {4, 2}, 3, oracle, space, {}, w.fiber_bound());
    CHECK(single.certified());

    auto dup = in_tuple_search(G, {pts[0], pts[0]}, {4}, 2, oracle, space, {}, w.fiber_bound());
    CHECK_FALSE(dup.filter_ok);
    CHECK(dup.attempts.empty());
    CHECK_THROWS_AS(in_tuple_search(G, pts, {2, 4}, 2, oracle, space, {}, 2), SpecError);
    CHECK_THROWS_AS(in_tuple_search(G, pts, {5}, 2, oracle, space, {}, 2), SpecError);

    // seventeen points on Z^2 cannot pass the filter
    auto z = z2(3);
    auto small = make_oracle(z, z.lattice().domain_indexer(2, true));
    auto win = box_indexer(z.group(), 1, true);
    std::vector<WindowPatch> many;
    for (int k = 0; k < 17; ++k) {
        std::vector<Symbol> s(win.size(), 1);
        for (std::size_t b = 0; b < s.size(); ++b) s[b] = static_cast<Symbol>(1 + ((k >> b) & 1));
        many.push_back(to_patch(win, s));
    }
    auto rej = in_tuple_search(z.group(), many, {1}, 2, small, candidate_box(z.group(), 2), {}, z.fiber_bound());
    CHECK(z.fiber_bound() == 16);
    CHECK_FALSE(rej.filter_ok);
    CHECK(rej.filter_reason.find("fiber bound") != std::string::npos);
}

TEST_CASE("fiber tuples on the dihedral group") {
    auto sys = dihedral(8);
    auto full = default_oracle(sys);
    auto win = box_indexer(sys.group(), 2, true);
    auto pts = constant_aper_points(sys, 2, win, full);
    REQUIRE(pts.size() >= 2);
    pts.resize(2);
    auto oracle = make_oracle(sys, sys.lattice().domain_indexer(6, true));
    auto rep = in_tuple_search(sys.group(), pts, {2, 1}, 3, oracle, gamma_candidates(sys.lattice(), 2, 1000), {},
                               sys.fiber_bound());
    CHECK(rep.certified());
    for (const auto& a : rep.attempts) CHECK(check_certificate(sys.group(), *a.result.certificate, full));
}

TEST_CASE("regional proximality") {
    WilliamsToeplitz w(williams_deck());
    auto oracle = default_oracle(w);
    const auto& G = w.group();
    auto shifts = candidate_box(G, 100);

    auto pts = constant_aper_points(w, 2, line(4), oracle);
    auto ball = restrict_patch(pts[0], 3);
    auto same = regional_proximality_check(G, {ball, ball, ball}, oracle, shifts);
    REQUIRE(same.holds);
    CHECK(same.witness->g == G.identity());
    CHECK(verify_proximal(G, {ball, ball, ball}, *same.witness, oracle));

    // fiber pair: proximal on the shape
    std::vector<Cylinder> pair{restrict_patch(pts[0], 3), restrict_patch(pts[1], 3)};
    auto rp = regional_proximality_check(G, pair, oracle, shifts);
    CHECK(rp.holds);
    CHECK(verify_proximal(G, pair, *rp.witness, oracle));

    // replay from a certificate
    auto cyl = symbol_cylinders(w, 0, 1);
    auto cert = *kernels::serial::find_independence_set(G, cyl, 2, oracle, shifts, {}).certificate;
    auto from_cert = proximal_from_certificate(G, cert);
    CHECK(verify_proximal(G, cyl, from_cert, oracle));
    ProximalWitness wrong = from_cert;
    wrong.g.v[0] += 1;
    CHECK_FALSE(verify_proximal(G, cyl, wrong, oracle));

    // distinct Gamma_1 cosets; on the Z array D_1 is too small (symbol 1 also appears off the
    // level-1 residues), D_2 separates them
    Cylinder a, b;
    for (Int f = 0; f < 90; ++f) {
        a.shape.push_back(G.element({f}));
        b.shape.push_back(G.element({f}));
        a.pattern.push_back(w.at(f).symbol);
        b.pattern.push_back(w.at(f + 1).symbol);
    }
    CHECK_FALSE(regional_proximality_check(G, {a, b}, oracle, shifts).holds);

    auto sys = dihedral(6);
    auto goracle = default_oracle(sys);
    const auto& H = sys.group();
    Cylinder c, d;
    for (const auto& f : sys.lattice().enumerate_domain(1, true)) {
        c.shape.push_back(f);
        d.shape.push_back(f);
        c.pattern.push_back(sys.cell(f).symbol);
        d.pattern.push_back(sys.cell(H.op(H.element({1}), f)).symbol);
    }
    CHECK_FALSE(regional_proximality_check(H, {c, d}, goracle, candidate_box(H, 30)).holds);
    CHECK(regional_proximality_check(H, {c, c}, goracle, candidate_box(H, 30)).holds);
}

TEST_CASE("entropy bounds") {
    auto e = entropy_bounds(2, 2);
    CHECK(e.lower == doctest::Approx(std::log(2.0)));
    CHECK(e.upper == e.lower);
    auto g = entropy_bounds(2, 16);
    CHECK(g.upper == doctest::Approx(std::log(16.0)));
    CHECK(g.lower <= g.upper);
    CHECK(g.lower_provenance == "search");
    CHECK_THROWS_AS(entropy_bounds(3, 2), InvariantViolation);
    CHECK_THROWS_AS(entropy_bounds(0, 2), SpecError);
}
