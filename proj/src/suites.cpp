#include "toeplitz/suites.hpp"

#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace toeplitz {

void SuiteResult::expect(bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
}

json SuiteResult::verdict() const {
    return json{{"suite", name},
                {"pass", passed()},
                {"exhausted", exhausted},
                {"failures", failures}};
}

int exit_status(const std::vector<SuiteResult>& results) {
    bool exhausted = false;
    for (const auto& r : results) {
        if (!r.failures.empty()) return 1;
        exhausted = exhausted || r.exhausted;
    }
    return exhausted ? 3 : 0;
}

namespace {

std::string symbol_str(const Cell& c) { return c.defined() ? std::to_string(c.symbol) : ""; }

std::vector<std::string> group_header(int rank) {
    std::vector<std::string> h{"finite_index"};
    for (int j = 0; j < rank; ++j) h.push_back("x" + std::to_string(j + 1));
    h.push_back("symbol");
    h.push_back("level");
    h.push_back("provenance");
    return h;
}

std::vector<std::string> group_row(const GroupElement& g, const Cell& c) {
    std::vector<std::string> row{std::to_string(g.f)};
    for (int j = 0; j < g.rank; ++j) row.push_back(std::to_string(g.v[j]));
    row.push_back(symbol_str(c));
    row.push_back(std::to_string(c.level));
    row.push_back(kCounted);
    return row;
}

const GroupToeplitz* as_group(const ToeplitzSystem& sys) { return dynamic_cast<const GroupToeplitz*>(&sys); }
const WilliamsToeplitz* as_williams(const ToeplitzSystem& sys) { return dynamic_cast<const WilliamsToeplitz*>(&sys); }

GroupElement random_in(const BoxIndexer& box, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, box.size() - 1);
    return box.element(pick(rng));
}

GroupElement random_element(const GroupSpec& G, std::mt19937_64& rng, Int radius) {
    std::uniform_int_distribution<Int> coord(-radius, radius);
    std::uniform_int_distribution<int> fin(0, G.order() - 1);
    GroupElement g = G.identity();
    for (int j = 0; j < G.rank(); ++j) g.v[j] = coord(rng);
    g.f = fin(rng);
    return g;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Cylinder> symbol_cylinders(const GroupSpec& G, const std::vector<Symbol>& symbols) {
    std::vector<Cylinder> out;
    for (Symbol s : symbols) out.push_back(symbol_cylinder(G, s));
    return out;
}

// Realized fiber patches whose aperiodic pieces carry a single symbol, from the first coords
// with at least two of them.
std::vector<WindowPatch> constant_aper_points(const ToeplitzSystem& sys, int K, const BoxIndexer& win,
                                              const LanguageOracle& oracle, std::size_t most) {
    for (const auto& c : all_coords(sys.lattice(), K)) {
        auto f = fiber_enumerate(sys, c, win, oracle);
        std::vector<WindowPatch> pts;
        for (std::size_t p = 0; p < f.patches.size() && pts.size() < most; ++p) {
            const auto& a = f.aper_symbols[p];
            if (a.empty() || std::any_of(a.begin(), a.end(), [&](Symbol s) { return s != a[0]; })) continue;
            WindowPatch w(win);
            for (std::size_t k = 0; k < win.size(); ++k) w[k].symbol = f.patches[p][k];
            pts.push_back(std::move(w));
        }
        if (pts.size() >= 2) return pts;
    }
    return {};
}

std::string describe(const std::vector<Symbol>& symbols) {
    std::string s;
    for (Symbol x : symbols) s += (s.empty() ? "" : " ") + std::to_string(x);
    return s;
}

}  // namespace

// ---- construction ------------------------------------------------------------------------

SuiteResult construction_suite(const SuiteContext& ctx) {
    SuiteResult res;
    const auto& ck = ctx.cfg.checks;
    if (const auto* w = as_williams(ctx.sys)) {
        res.name = "gen-z";
        const Int N = ck.generate_radius;
        const auto patch = williams_generate(w->params(), N);
        std::vector<std::vector<std::string>> rows;
        std::size_t mismatches = 0;
        for (Int n = -N; n <= N; ++n) {
            const Cell& c = patch.at(n);
            if (!(c == w->at(n))) ++mismatches;
            rows.push_back({std::to_string(n), symbol_str(c), std::to_string(c.level), kCounted});
        }
        const Int undefined = static_cast<Int>(patch.undefined_count());
        const Rational bound = williams_undefined_bound(w->params(), N);
        json steps = json::array();
        for (int n = 0; n < w->steps(); ++n)
            steps.push_back(json{{"after_step", n + 1}, {"undefined_fraction", quantity(williams_undefined_closed_form(w->params(), n), kClosedForm)}});
        json sums = json::array();
        for (const auto& q : convergence_diag(w->params())) sums.push_back(quantity(q, kClosedForm));
        res.report = json{{"deck", ctx.cfg.deck},
                          {"parameters", json{{"m", w->m()}, {"periods", w->params().periods}, {"radius", N}}},
                          {"undefined", quantity(undefined, kCounted)},
                          {"undefined_density", quantity(Rational(undefined, 2 * N + 1), kCounted)},
                          {"undefined_density_bound", quantity(bound, kClosedForm)},
                          {"undefined_fraction_by_step", steps},
                          {"partial_sums", sums},
                          {"level_map_mismatches", quantity(static_cast<Int>(mismatches), kCounted)},
                          {"smallest_window_period", quantity(smallest_window_period(patch), kCounted)}};
        res.expect(mismatches == 0, "literal generation disagrees with the level map");
        res.expect(Rational(undefined, 2 * N + 1) <= bound, "undefined density exceeds its bound");
        if (ctx.writer) ctx.writer->write_csv("gen-z.csv", {"position", "symbol", "level", "provenance"}, rows);
    } else {
        const auto& sys = *as_group(ctx.sys);
        res.name = "gen-group";
        json jrep = json::array();
        for (int n = 1; n <= ck.j_levels; ++n) {
            const auto cmp = sys.compare_J(n);
            jrep.push_back(json{{"n", n},
                                {"size", quantity(static_cast<Int>(cmp.by_subtraction.size()), kCounted)},
                                {"recursion_size", quantity(static_cast<Int>(cmp.by_recursion.size()), kCounted)},
                                {"equal", cmp.equal}});
            res.expect(cmp.equal, "J(" + std::to_string(n) + ") differs between subtraction and recursion");
        }
        json strata = nullptr;
        if (ck.strata_level > 0) {
            const auto st = sys.check_strata(ck.strata_level);
            json sizes = json::array();
            for (std::size_t k = 0; k < st.stratum_sizes.size(); ++k)
                sizes.push_back(json{{"stratum", k == 0 ? "extra" : std::to_string(k)},
                                     {"size", quantity(static_cast<Int>(st.stratum_sizes[k]), kCounted)}});
            strata = json{{"N", st.level},
                          {"window_size", quantity(static_cast<Int>(st.window_size), kCounted)},
                          {"undefined", quantity(static_cast<Int>(st.undefined), kCounted)},
                          {"uncovered", quantity(static_cast<Int>(st.uncovered), kCounted)},
                          {"overlapping", quantity(static_cast<Int>(st.overlapping), kCounted)},
                          {"level_mismatch", quantity(static_cast<Int>(st.level_mismatch), kCounted)},
                          {"strata", sizes},
                          {"ok", st.ok()}};
            res.expect(st.ok(), "strata on D_" + std::to_string(ck.strata_level) + "R are not a partition");
        }
        const int N = ck.generate_level;
        const auto window = sys.lattice().domain_indexer(N, true);
        const auto patch = kernels::parallel::materialize(sys, window);
        std::vector<std::vector<std::string>> rows;
        std::size_t undefined = 0;
        for (std::size_t k = 0; k < window.size(); ++k) {
            rows.push_back(group_row(window.element(k), patch[k]));
            undefined += !patch[k].defined();
        }
        json index = json::array();
        for (int i = 1; i < sys.lattice().depth(); ++i) {
            const auto ic = sys.lattice().check_index_condition(i);
            index.push_back(json{{"i", i}, {"index", quantity(ic.index, kCounted)},
                                 {"rhs_upper", quantity(static_cast<double>(ic.rhs_upper), kClosedForm)}, {"holds", ic.holds}});
        }
        res.report = json{{"deck", ctx.cfg.deck},
                          {"parameters", json{{"m", sys.m()}, {"variant", to_string(sys.params().variant)},
                                              {"rank", sys.group().rank()}, {"finite_order", sys.group().order()},
                                              {"depth", sys.lattice().depth()}}},
                          {"generated_level", N},
                          {"generated_cells", quantity(static_cast<Int>(window.size()), kCounted)},
                          {"undefined", quantity(static_cast<Int>(undefined), kCounted)},
                          {"J", jrep},
                          {"strata", strata},
                          {"index_condition_diagnostic", index}};
        res.expect(undefined == 0, "undefined cells on D_" + std::to_string(N) + "R");
        if (ctx.writer) ctx.writer->write_csv("gen-group.csv", group_header(sys.group().rank()), rows);
    }
    if (ctx.writer) ctx.writer->write_json(res.name + ".json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    return res;
}

// ---- measures ----------------------------------------------------------------------------

SuiteResult measures_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "measures";
    const auto& ck = ctx.cfg.checks;
    const auto& sys = ctx.sys;
    const auto* gsys = as_group(sys);
    const int top = sys.steps() - 1;

    std::vector<std::vector<std::string>> rows;
    json beta = json::array();
    for (int n = 1; n <= top; ++n) {
        const auto mu = mu_n_freq(sys, n);
        for (Symbol s : sys.alphabet())
            rows.push_back({std::to_string(n), std::to_string(s), numerator_string(mu.at(s)), denominator_string(mu.at(s)), kCounted});
        if (gsys && gsys->has_beta()) {
            const Rational closed = beta_mass_closed_form(*gsys);
            beta.push_back(json{{"n", n}, {"counted", quantity(mu[0], kCounted)}, {"closed_form", quantity(closed, kClosedForm)},
                                {"equal", mu[0] == closed}});
            res.expect(mu[0] == closed, "extra-symbol mass at level " + std::to_string(n) + " differs from the closed form");
        }
    }

    json dprod = json::array();
    for (int n = 0; n <= ck.d_levels; ++n) {
        const auto d = d_product_check(sys, n);
        dprod.push_back(json{{"n", n}, {"d_next_counted", quantity(d.counted, kCounted)},
                             {"d_next_closed_form", quantity(d.closed_form, kClosedForm)}, {"equal", d.equal},
                             {"d_below_half", d.below_half}});
        res.expect(d.equal, "d_" + std::to_string(n + 1) + " differs from the product formula");
        if (n + 1 == 3) res.expect(d.below_half, "d_3 < 1 - d_3 fails");
    }

    json matrices = nullptr;
    if (gsys && ck.matrix_level > 0) {
        const int N = ck.matrix_level;
        const auto eta = make_approximant(*gsys, N);
        json an = json::array();
        for (int n = 1; n + 1 < N; ++n) {
            const auto c = verify_An_recursion(*gsys, eta, n);
            json lhs = json::array(), rhs = json::array();
            for (const auto& q : c.lhs) lhs.push_back(quantity(q, kCounted));
            for (const auto& q : c.rhs) rhs.push_back(quantity(q, kCounted));
            an.push_back(json{{"n", n}, {"N", N}, {"A_n_mu_next", lhs}, {"mu_n", rhs},
                              {"det", quantity(c.det, kClosedForm)}, {"holds", c.holds}});
            res.expect(c.holds, "A_" + std::to_string(n) + " mu^(n+1) != mu^(n)");
        }
        const auto a0 = matrix_A0_check(*gsys, eta);
        json p = json::array(), q = json::array();
        for (const auto& x : a0.p_mu) p.push_back(quantity(x, kCounted));
        for (const auto& x : a0.a0_mu) q.push_back(quantity(x, kCounted));
        matrices = json{{"A_n", an}, {"A_0", json{{"N", N}, {"p_mu", p}, {"A0_mu1", q}, {"rank", a0.rank}, {"holds", a0.holds}}}};
        res.expect(a0.holds, "p(mu_N) != A_0 mu^(1)");
    }

    json zm = json::array();
    for (const auto& [i, k, s] : ck.z_mass) {
        const auto z = z_mass(*gsys, i, k, s);
        zm.push_back(json{{"i", i}, {"k", k}, {"s", s}, {"measure_level", z.M}, {"cell_level", z.L},
                          {"mass", quantity(z.mass, kCounted)}, {"shortcut", quantity(z.shortcut, kCounted)},
                          {"bound", quantity(z.bound, kClosedForm)}, {"agrees", z.agrees}, {"above_bound", z.above_bound}});
        const std::string tag = "(" + std::to_string(i) + "," + std::to_string(k) + "," + std::to_string(s) + ")";
        res.expect(z.agrees, "Z-mass counts disagree at " + tag);
        res.expect(z.above_bound, "Z-mass below 1/|D_LR| at " + tag);
    }

    res.report = json{{"deck", ctx.cfg.deck}, {"d_product", dprod}, {"extra_symbol_mass", beta},
                      {"matrices", matrices}, {"z_mass", zm}};
    if (ctx.writer) {
        ctx.writer->write_csv("measures.csv", {"level", "symbol", "numerator", "denominator", "provenance"}, rows);
        ctx.writer->write_json("measures.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    }
    return res;
}

// ---- fibers ------------------------------------------------------------------------------

SuiteResult fiber_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "fibers";
    const auto& sys = ctx.sys;
    const int K = ctx.cfg.checks.fiber_depth;
    const auto window = box_indexer(sys.group(), ctx.cfg.checks.fiber_radius, true);
    const auto oracle = default_oracle(sys);
    const auto coords = all_coords(sys.lattice(), K);

    std::vector<FiberResult> results(coords.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads() > 0 ? threads() : omp_get_max_threads())
    for (std::size_t c = 0; c < coords.size(); ++c) results[c] = fiber_enumerate(sys, coords[c], window, oracle);

    json per = json::array();
    std::size_t max_fiber = 0, max_pieces = 0, not_ok = 0;
    for (const auto& f : results) {
        per.push_back(json{{"coords", element_to_json(f.coords.t(K))},
                           {"pieces", quantity(static_cast<Int>(f.pieces), kCounted)},
                           {"aperiodic_pieces", quantity(static_cast<Int>(f.aper_pieces), kCounted)},
                           {"fiber_count", quantity(static_cast<Int>(f.patches.size()), kCounted)},
                           {"pass", f.ok()}});
        max_fiber = std::max(max_fiber, f.patches.size());
        max_pieces = std::max(max_pieces, f.pieces);
        not_ok += !f.ok();
    }
    res.report = json{{"deck", ctx.cfg.deck},
                      {"depth", K},
                      {"window_radius", ctx.cfg.checks.fiber_radius},
                      {"coords_scanned", quantity(static_cast<Int>(coords.size()), kCounted)},
                      {"max_fiber", quantity(static_cast<Int>(max_fiber), kCounted)},
                      {"fiber_bound", quantity(sys.fiber_bound(), kClosedForm)},
                      {"max_pieces", quantity(static_cast<Int>(max_pieces), kCounted)},
                      {"piece_bound", quantity(sys.piece_bound(), kClosedForm)},
                      {"per_coords", per}};
    res.expect(not_ok == 0, std::to_string(not_ok) + " coords fail the fiber or piece checks");
    res.expect(static_cast<Int>(max_fiber) <= sys.fiber_bound(), "fiber count exceeds the bound");
    res.expect(static_cast<Int>(max_pieces) <= sys.piece_bound(), "piece count exceeds the bound");
    if (as_williams(sys)) res.expect(max_fiber >= 2, "no coords realizes a nontrivial fiber");
    if (ctx.writer) ctx.writer->write_json("fibers.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    return res;
}

// ---- independence ------------------------------------------------------------------------

SuiteResult independence_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "independence";
    const auto& sys = ctx.sys;
    const auto& G = sys.group();
    const auto& ic = ctx.cfg.independence;
    const auto oracle = default_oracle(sys);
    const auto space = candidate_box(G, ic.candidate_radius);

    json certs = json::array();
    std::vector<std::vector<std::string>> rows;
    auto persist = [&] {
        if (!ctx.writer) return;
        ctx.writer->write_json("certificates.json", json{{"deck", ctx.cfg.deck}, {"oracle", oracle.source}, {"searches", certs}});
        ctx.writer->write_csv("independence.csv", {"kind", "symbols", "k", "L", "radius", "verdict", "nodes", "provenance"}, rows);
    };
    auto run = [&](const char* kind, const SymbolSearch& s) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = kernels::parallel::find_independence_set(G, symbol_cylinders(G, s.symbols), s.L, oracle, space, ctx.budget);
        if (ctx.writer)
            ctx.writer->log(std::string(kind) + " symbols [" + describe(s.symbols) + "] L=" + std::to_string(s.L) + ": " +
                            to_string(r.outcome) + " in " + std::to_string(elapsed(t0)) + " s");
        json entry = search_to_json(r, s.L);
        entry["kind"] = kind;
        entry["symbols"] = s.symbols;
        entry["candidate_radius"] = ic.candidate_radius;
        certs.push_back(entry);
        rows.push_back({kind, describe(s.symbols), std::to_string(s.symbols.size()), std::to_string(s.L),
                        std::to_string(ic.candidate_radius), to_string(r.outcome), std::to_string(r.nodes), kSearch});
        persist();
        return r;
    };

    std::size_t certified_k = 0;
    for (const auto& s : ic.searches) {
        const auto r = run("search", s);
        const std::string tag = "[" + describe(s.symbols) + "] L=" + std::to_string(s.L);
        if (r.outcome == SearchOutcome::Found) {
            res.expect(check_certificate(G, *r.certificate, oracle), "certificate " + tag + " does not re-verify");
            certified_k = std::max(certified_k, s.symbols.size());
        } else if (s.required) {
            if (r.outcome == SearchOutcome::Exhausted) res.exhausted = true;
            else res.failures.push_back("no certificate " + tag + " within the window");
        }
    }
    for (const auto& s : ic.negatives) {
        const auto r = run("negative", s);
        const std::string tag = "[" + describe(s.symbols) + "] L=" + std::to_string(s.L);
        if (r.outcome == SearchOutcome::Exhausted) res.exhausted = true;
        res.expect(r.outcome != SearchOutcome::Found, "expected no certificate for " + tag);
    }

    json tuple = nullptr;
    if (ic.tuple) {
        const auto& t = *ic.tuple;
        const auto win = box_indexer(G, t.window_radius, true);
        auto pts = constant_aper_points(sys, t.depth, win, oracle, static_cast<std::size_t>(sys.m()));
        const auto toracle = t.oracle_level > 0 ? make_oracle(sys, sys.lattice().domain_indexer(t.oracle_level, true)) : oracle;
        if (pts.size() < 2) {
            tuple = json{{"points", 0}, {"certified", false}, {"reason", "no coords with two constant-aperiodic points"}};
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            auto rep = in_tuple_search(G, pts, t.radii, t.L, toracle, gamma_candidates(sys.lattice(), t.gamma_level, t.candidate_radius),
                                       ctx.budget, sys.fiber_bound());
            if (ctx.writer) ctx.writer->log("fiber tuple L=" + std::to_string(t.L) + " in " + std::to_string(elapsed(t0)) + " s");
            json attempts = json::array();
            for (const auto& a : rep.attempts) {
                json e = search_to_json(a.result, t.L);
                e["radius"] = a.radius;
                attempts.push_back(e);
                if (a.result.certificate)
                    res.expect(check_certificate(G, *a.result.certificate, oracle), "fiber tuple certificate does not re-verify");
                rows.push_back({"tuple", "fiber points", std::to_string(pts.size()), std::to_string(t.L), std::to_string(a.radius),
                                to_string(a.result.outcome), std::to_string(a.result.nodes), kSearch});
            }
            json patches = json::array();
            for (const auto& p : pts) patches.push_back(p.symbols());
            tuple = json{{"points", patches}, {"window_radius", t.window_radius}, {"filter_ok", rep.filter_ok},
                         {"filter_reason", rep.filter_reason}, {"attempts", attempts},
                         {"failure_radius", rep.failure_radius ? json(*rep.failure_radius) : json(nullptr)},
                         {"certified", rep.certified()}};
            certs.push_back(json{{"kind", "tuple"}, {"attempts", attempts}});
            persist();
        }
    }

    json entropy = nullptr;
    if (certified_k > 0) {
        try {
            const auto eb = entropy_bounds(certified_k, sys.fiber_bound());
            entropy = json{{"certified_k", eb.certified_k}, {"fiber_bound", eb.fiber_bound},
                           {"lower", quantity(eb.lower, eb.lower_provenance.c_str())},
                           {"upper", quantity(eb.upper, eb.upper_provenance.c_str())}};
        } catch (const InvariantViolation& e) {
            res.failures.push_back(e.what());
        }
    }
    if (!ic.searches.empty() && !res.exhausted) res.expect(certified_k >= 2, "no certificate with two or more cylinders");

    res.report = json{{"deck", ctx.cfg.deck}, {"candidate_radius", ic.candidate_radius}, {"oracle", oracle.source},
                      {"oracle_cells", oracle.patch.size()}, {"convention", kIntersectionConvention},
                      {"fiber_tuple", tuple}, {"entropy", entropy}};
    persist();
    if (ctx.writer) ctx.writer->write_json("independence.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    return res;
}

// ---- conjugation -------------------------------------------------------------------------

SuiteResult conjugation_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "conjugation";
    const auto& sys = ctx.sys;
    const auto& lat = sys.lattice();
    const auto& G = sys.group();
    const int N = ctx.cfg.checks.conjugation_level;
    if (N < 1 || N >= sys.steps()) throw SpecError("checks.conjugation_level must lie in 1.." + std::to_string(sys.steps() - 1));
    const auto eta = make_approximant(sys, N);
    const auto core = lat.domain_indexer(std::max(1, N - 1), true);
    const auto alphabet = sys.alphabet();
    const auto origins = lat.domain_indexer(N, true);
    Int reach = 0;
    for (int j = 0; j < G.rank(); ++j) reach = std::max(reach, lat.modulus(N)[j]);

    std::mt19937_64 rng(ctx.cfg.checks.seed);
    std::uniform_int_distribution<int> level(1, N);
    std::uniform_int_distribution<std::size_t> sym(0, alphabet.size() - 1);
    std::size_t holds = 0, nonvacuous = 0;
    json samples = json::array();
    for (int t = 0; t < ctx.cfg.checks.conjugation_samples; ++t) {
        const GroupElement u = random_in(origins, rng);
        const GroupElement g = random_element(G, rng, reach);
        const int i = level(rng);
        const Symbol a = alphabet[sym(rng)];
        const ArrayFn x = [&](const GroupElement& h) { return eta.at(G.op(u, h)); };
        const auto c = conjugation_identity_check(x, lat, N, g, i, a, core);
        holds += c.holds;
        nonvacuous += c.lhs_count > 0;
        samples.push_back(json{{"x_origin", element_to_json(u)}, {"g", element_to_json(g)}, {"i", i}, {"alpha", a},
                               {"per_size", quantity(static_cast<Int>(c.lhs_count), kCounted)},
                               {"mismatches", quantity(static_cast<Int>(c.mismatches), kCounted)}});
    }
    res.report = json{{"deck", ctx.cfg.deck}, {"N", N}, {"core_size", core.size()}, {"seed", ctx.cfg.checks.seed},
                      {"samples", quantity(static_cast<Int>(samples.size()), kCounted)},
                      {"holds", quantity(static_cast<Int>(holds), kCounted)},
                      {"nonvacuous", quantity(static_cast<Int>(nonvacuous), kCounted)}, {"instances", samples}};
    res.expect(holds == samples.size(), std::to_string(samples.size() - holds) + " sampled instances violate the identity");
    if (ctx.writer) ctx.writer->write_json("conjugation.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    return res;
}

// ---- complexity --------------------------------------------------------------------------

SuiteResult complexity_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "complexity";
    const auto& ck = ctx.cfg.checks;
    const auto* w = as_williams(ctx.sys);
    if (!w) throw SpecError("the complexity diagnostic runs on the Z construction only");
    std::vector<Symbol> seq;
    for (Int n = -w->defined_radius(); n < w->defined_radius(); ++n) seq.push_back(w->at(n).symbol);
    std::mt19937_64 rng(ck.control_seed);
    std::vector<Symbol> noise(ck.control_length);
    for (auto& s : noise) s = static_cast<Symbol>(rng() & 1);

    const auto prof = complexity_profile(seq, ck.complexity_radii);
    const auto ctrl = complexity_profile(noise, ck.complexity_radii);
    std::vector<std::vector<std::string>> rows;
    json pts = json::array();
    for (std::size_t k = 0; k < prof.size(); ++k) {
        for (const auto& [name, p] : {std::pair{"array", prof[k]}, std::pair{"control", ctrl[k]}}) {
            std::ostringstream ratio;
            ratio.precision(17);
            ratio << p.ratio;
            rows.push_back({name, std::to_string(p.radius), std::to_string(p.width), std::to_string(p.count), ratio.str(), kCounted});
        }
        pts.push_back(json{{"radius", prof[k].radius}, {"width", prof[k].width},
                           {"array_count", quantity(static_cast<Int>(prof[k].count), kCounted)},
                           {"array_ratio", quantity(prof[k].ratio, kCounted)},
                           {"control_count", quantity(static_cast<Int>(ctrl[k].count), kCounted)},
                           {"control_ratio", quantity(ctrl[k].ratio, kCounted)}});
    }
    const bool dec = strictly_decreasing(prof), ctrl_dec = strictly_decreasing(ctrl);
    res.report = json{{"deck", ctx.cfg.deck}, {"array_length", seq.size()}, {"control_length", noise.size()},
                      {"control_seed", ck.control_seed}, {"profile", pts},
                      {"array_strictly_decreasing", dec}, {"control_strictly_decreasing", ctrl_dec}};
    res.expect(dec, "pattern-count ratio of the array is not strictly decreasing");
    res.expect(!ctrl_dec, "random control is strictly decreasing");
    if (ctx.writer) {
        ctx.writer->write_csv("complexity.csv", {"sequence", "radius", "width", "count", "ratio", "provenance"}, rows);
        ctx.writer->write_json("complexity.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    }
    return res;
}

// ---- pullback ----------------------------------------------------------------------------

SuiteResult pullback_suite(const SuiteContext& ctx) {
    SuiteResult res;
    res.name = "pullback";
    if (!ctx.cfg.hom) throw SpecError("deck has no 'hom' section");
    const auto& hc = *ctx.cfg.hom;
    const auto& G = ctx.sys.group();
    const auto v = check_hom(hc.spec, G);
    res.report = json{{"deck", ctx.cfg.deck}, {"w", hc.spec.w}, {"compatible", v.compatible}, {"surjective", v.surjective},
                      {"valid", v.ok()}, {"expected_valid", hc.expect_valid}, {"reason", v.reason}};
    res.expect(v.ok() == hc.expect_valid, std::string("homomorphism ") + (v.ok() ? "accepted" : "rejected") + " against expectation");
    if (!v.ok() || hc.source_deck.empty()) {
        if (ctx.writer) ctx.writer->write_json("pullback.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
        return res;
    }

    const auto src_cfg = load_config(hc.source_deck);
    if (!src_cfg.williams) throw SpecError("hom.source_deck must be a Z deck");
    const WilliamsToeplitz src(*src_cfg.williams);
    LevelPatchZ x;
    x.radius = src.defined_radius() - 1;
    for (Int n = -x.radius; n <= x.radius; ++n) x.cells.push_back(src.at(n));

    // equivariance on sampled (g, position) pairs, every finite part at the position
    std::mt19937_64 rng(hc.seed);
    const auto win = box_indexer(G, hc.window_radius, true);
    Vec ones{};
    for (int j = 0; j < G.rank(); ++j) ones[j] = 1;
    std::size_t checked = 0, mismatches = 0;
    for (int t = 0; t < hc.samples; ++t) {
        const GroupElement g = random_element(G, rng, 10 * hc.window_radius);
        const GroupElement h = random_in(win, rng);
        const auto e = equivariance_check(hc.spec, G, x, g, BoxIndexer(G.rank(), h.v, ones, G.order()));
        checked += e.checked;
        mismatches += e.mismatches;
    }
    res.report["equivariance"] = json{{"samples", hc.samples}, {"checked", quantity(static_cast<Int>(checked), kCounted)},
                                      {"mismatches", quantity(static_cast<Int>(mismatches), kCounted)}};
    res.expect(mismatches == 0, "pullback is not equivariant on sampled pairs");

    // a certificate found on the source, mapped through the section, re-verified upstairs
    Vec lo{}, ext{};
    lo[0] = -(x.radius - 10);
    ext[0] = 2 * (x.radius - 10) + 1;
    const LanguageOracle src_oracle = make_oracle(src, BoxIndexer(1, lo, ext, 1));
    const LanguageOracle pulled = pullback_oracle(hc.spec, G, x, pullback_band(hc.spec, G, x.radius));
    std::vector<Symbol> syms{0, 1};
    const auto r = kernels::parallel::find_independence_set(src.group(), symbol_cylinders(src.group(), syms), hc.transport_L,
                                                            src_oracle, candidate_box(src.group(), hc.candidate_radius), ctx.budget);
    json transport = json{{"source_deck", src_cfg.deck}, {"source", search_to_json(r, hc.transport_L)}};
    if (r.outcome == SearchOutcome::Found) {
        try {
            const auto t = transport_certificate(hc.spec, G, *r.certificate, pulled);
            transport["transported"] = certificate_to_json(t);
            transport["size_preserved"] = t.J.size() == r.certificate->J.size();
            transport["reverified"] = check_certificate(G, t, pulled);
            res.expect(t.J.size() == hc.transport_L, "transported certificate changed |J|");
        } catch (const InvariantViolation& e) {
            res.failures.push_back(e.what());
        }
    } else if (r.outcome == SearchOutcome::Exhausted) {
        res.exhausted = true;
    } else {
        res.failures.push_back("no source certificate to transport");
    }
    res.report["transport"] = transport;

    json rec = json::array();
    for (Int rad : {0, 1, 2}) {
        const auto d = recurrence_diagnostic(hc.spec, G, x, rad);
        rec.push_back(json{{"shape_radius", rad}, {"source_gap", quantity(d.source_gap, kCounted)},
                           {"pullback_gap", quantity(d.pullback_gap, kCounted)},
                           {"source_words", quantity(static_cast<Int>(d.source_words), kCounted)},
                           {"pullback_patterns", quantity(static_cast<Int>(d.pullback_patterns), kCounted)},
                           {"bounded_by_source", d.bounded_by_source()}});
    }
    res.report["recurrence"] = rec;

    if (ctx.writer) {
        const auto patch = pullback_patch(hc.spec, G, x, win);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < win.size(); ++k) rows.push_back(group_row(win.element(k), patch[k]));
        ctx.writer->write_csv("pullback.csv", group_header(G.rank()), rows);
        ctx.writer->write_json("pullback.json", json{{"summary", res.report}, {"verdict", res.verdict()}});
    }
    return res;
}

// ---- commands ----------------------------------------------------------------------------

int run_command(const RunOptions& opts) {
    try {
        static const std::vector<std::string> known = {"gen-z", "gen-group", "measures", "fibers", "independence", "pullback", "verify-all"};
        if (std::find(known.begin(), known.end(), opts.command) == known.end()) throw SpecError("unknown subcommand " + opts.command);
        const auto cfg = load_config(opts.config);
        if (opts.threads < 0) throw SpecError("--threads must be nonnegative");
        set_threads(opts.threads);
        SearchBudget budget = cfg.budget;
        if (opts.budget_seconds) {
            if (*opts.budget_seconds <= 0) throw SpecError("--budget must be positive");
            budget.seconds = *opts.budget_seconds;
        }
        const std::string out = !opts.out.empty() ? opts.out : !cfg.out_dir.empty() ? cfg.out_dir : "out/" + cfg.deck;
        const auto sys = cfg.make_system();
        ReportWriter writer(out);
        writer.log("deck " + cfg.deck + " command " + opts.command + " threads " + std::to_string(threads()));
        SuiteContext ctx{cfg, *sys, budget, &writer};

        using SuiteFn = SuiteResult (*)(const SuiteContext&);
        std::vector<std::pair<std::string, SuiteFn>> plan;
        if (opts.command == "gen-z") {
            if (!cfg.is_williams()) throw SpecError("gen-z needs a deck with construction \"williams\"");
            plan = {{opts.command, construction_suite}};
        } else if (opts.command == "gen-group") {
            if (cfg.is_williams()) throw SpecError("gen-group needs a deck with construction \"group\"");
            plan = {{opts.command, construction_suite}};
        } else if (opts.command == "measures") {
            plan = {{"measures", measures_suite}};
        } else if (opts.command == "fibers") {
            plan = {{"fibers", fiber_suite}};
        } else if (opts.command == "independence") {
            plan = {{"independence", independence_suite}};
        } else if (opts.command == "pullback") {
            plan = {{"pullback", pullback_suite}};
        } else {
            plan = {{cfg.is_williams() ? "gen-z" : "gen-group", construction_suite},
                    {"measures", measures_suite},
                    {"fibers", fiber_suite},
                    {"independence", independence_suite},
                    {"conjugation", conjugation_suite}};
            if (!cfg.checks.complexity_radii.empty()) plan.push_back({"complexity", complexity_suite});
            if (cfg.hom) plan.push_back({"pullback", pullback_suite});
        }

        std::vector<SuiteResult> results;
        for (const auto& [name, fn] : plan) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                results.push_back(fn(ctx));
            } catch (const InvariantViolation& e) {
                SuiteResult r;
                r.name = name;
                r.failures.push_back(e.what());
                results.push_back(r);
            }
            const auto& r = results.back();
            writer.log(r.name + " finished in " + std::to_string(elapsed(t0)) + " s");
            std::cout << r.name << ": " << (r.passed() ? "PASS" : r.failures.empty() ? "EXHAUSTED" : "FAIL") << "\n";
            for (const auto& f : r.failures) std::cout << "  " << f << "\n";
        }
        const int status = exit_status(results);
        if (opts.command == "verify-all") {
            json suites = json::array();
            for (const auto& r : results) suites.push_back(r.verdict());
            writer.write_json("verdict.json", json{{"deck", cfg.deck}, {"pass", status == 0}, {"exit_status", status}, {"suites", suites}});
        }
        return status;
    } catch (const SpecError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace toeplitz
