#include "toeplitz/periods.hpp"

#include "toeplitz/toeplitz_g.hpp"
#include "toeplitz/toeplitz_z.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace toeplitz {

namespace {

bool periodic_level(const Cell& c, int i) { return c.defined() && c.level >= 1 && c.level <= i; }

// x reads alpha on every c^{-1} gamma^{-1} c h, gamma in Gamma_i ∩ D_N.
bool in_per_periodic(const ArrayFn& x, const GroupSpec& grp, const std::vector<GroupElement>& gammas,
                     const GroupElement& c, const GroupElement& h, Symbol alpha) {
    const GroupElement ci = grp.inv(c);
    for (const auto& gamma : gammas) {
        const GroupElement t = grp.op(ci, grp.op(grp.inv(gamma), c));
        if (x(grp.op(t, h)) != alpha) return false;
    }
    return true;
}

std::set<Symbol> regular_symbols(const ToeplitzSystem& sys) {
    std::set<Symbol> out;
    for (int i = 1; i <= sys.m(); ++i) out.insert(sys.alpha(i));
    return out;
}

Int ceil_div(Int a, Int p) { return -floor_div(-a, p); }

}  // namespace

std::vector<char> per_set_empirical(const WindowPatch& x, const SubgroupRef& h, Symbol alpha) {
    std::unordered_map<GroupElement, std::vector<std::size_t>, ElementHash> classes;
    for (std::size_t k = 0; k < x.size(); ++k) classes[h.right_coset_rep(x.element(k))].push_back(k);
    std::vector<char> out(x.size(), 0);
    for (const auto& [rep, members] : classes) {
        bool all = std::all_of(members.begin(), members.end(), [&](std::size_t k) { return x[k].symbol == alpha; });
        if (all)
            for (std::size_t k : members) out[k] = 1;
    }
    return out;
}

std::vector<char> per_set_exact(const ToeplitzSystem& sys, const BoxIndexer& window, int i, Symbol alpha) {
    std::vector<char> out(window.size(), 0);
    for (std::size_t k = 0; k < window.size(); ++k) {
        Cell c = sys.cell(window.element(k));
        out[k] = periodic_level(c, i) && c.symbol == alpha;
    }
    return out;
}

std::vector<char> per_set_periodic(const ArrayFn& x, const Lattice& lat, int N, int i, const GroupElement& c,
                                   const BoxIndexer& window, Symbol alpha) {
    if (i > N) throw SpecError("per_set_periodic needs i <= N");
    if (!lat.gamma_normal(N)) throw SpecError("Gamma_" + std::to_string(N) + " is not invariant under the action");
    const auto gammas = lat.gamma_in_domain(i, N);
    std::vector<char> out(window.size(), 0);
    for (std::size_t k = 0; k < window.size(); ++k)
        out[k] = in_per_periodic(x, lat.group(), gammas, c, window.element(k), alpha);
    return out;
}

SubgroupRef gamma_subgroup(const Lattice& lat, int i) {
    return {"Gamma_" + std::to_string(i), [&lat, i](const GroupElement& g) { return lat.rep(g, i); }};
}

SubgroupRef conjugated_gamma(const Lattice& lat, int i, const GroupElement& t) {
    return {"t^-1 Gamma_" + std::to_string(i) + " t",
            [&lat, i, t](const GroupElement& g) { return lat.rep(lat.group().op(t, g), i); }};
}

ConjugationCheck conjugation_identity_check(const ArrayFn& x, const Lattice& lat, int N, const GroupElement& g, int i,
                                            Symbol alpha, const BoxIndexer& core) {
    if (!lat.gamma_normal(N)) throw SpecError("Gamma_" + std::to_string(N) + " is not invariant under the action");
    const GroupSpec& grp = lat.group();
    const auto gammas = lat.gamma_in_domain(i, N);
    const GroupElement gi = grp.inv(g);
    const ArrayFn y = [&](const GroupElement& h) { return x(grp.op(gi, h)); };
    ConjugationCheck out;
    out.core_size = core.size();
    for (std::size_t k = 0; k < core.size(); ++k) {
        const GroupElement h = core.element(k);
        const bool lhs = in_per_periodic(y, grp, gammas, grp.identity(), h, alpha);
        // h in g Per(x, g^{-1} Gamma_i g) iff g^{-1} h in Per(x, g^{-1} Gamma_i g)
        const bool rhs = in_per_periodic(x, grp, gammas, g, grp.op(gi, h), alpha);
        out.lhs_count += lhs;
        out.rhs_count += rhs;
        out.mismatches += lhs != rhs;
    }
    out.holds = out.mismatches == 0;
    return out;
}

OdometerCoords code_orbit_point(const Lattice& lat, const GroupElement& g, int depth) {
    if (depth < 1 || depth > lat.depth()) throw SpecError("coords depth out of range");
    OdometerCoords c;
    for (int i = 1; i <= depth; ++i) c.reps.push_back(lat.rep(g, i));
    return c;
}

bool coords_compatible(const Lattice& lat, const OdometerCoords& c) {
    for (int i = 1; i <= c.depth(); ++i) {
        if (!lat.in_domain_r(c.t(i), i)) return false;
        if (i < c.depth() && !(lat.rep(c.t(i + 1), i) == c.t(i))) return false;
    }
    return true;
}

std::vector<OdometerCoords> all_coords(const Lattice& lat, int depth) {
    std::vector<OdometerCoords> out;
    for (const auto& t : lat.enumerate_domain(depth, true)) out.push_back(code_orbit_point(lat, t, depth));
    return out;
}

Classification classify_cell(const ToeplitzSystem& sys, const ArrayFn& x, int n, const std::vector<GroupElement>& j_set,
                             int translate_level) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    if (n < 1 || n + 1 > sys.steps()) throw SpecError("classify_cell needs 1 <= n < steps");
    const int T = translate_level == 0 ? n + 1 : translate_level;
    if (T <= n || T > lat.depth()) throw SpecError("translate level must lie in (n, depth]");
    const auto translates = lat.gamma_in_domain(n, T);
    const auto domain = lat.enumerate_domain(n, true);
    std::vector<Cell> pattern;
    for (const auto& h : domain) pattern.push_back(sys.cell(h));

    Classification out;
    for (const auto& v : domain) {
        const GroupElement vi = grp.inv(v);
        auto y = [&](const GroupElement& h) { return x(grp.op(vi, h)); };
        bool match = true;
        for (std::size_t k = 0; k < domain.size() && match; ++k) {
            const Cell& want = pattern[k];
            const bool periodic = periodic_level(want, n);
            Symbol first = kUndefined;
            bool constant = true;
            for (std::size_t t = 0; t < translates.size(); ++t) {
                Symbol s = y(grp.op(translates[t], domain[k]));
                if (t == 0) first = s;
                else if (s != first) constant = false;
                if (periodic && s != want.symbol) {
                    match = false;
                    break;
                }
            }
            if (!periodic && constant) match = false;
        }
        if (!match) continue;
        ++out.matches;
        if (out.found) continue;
        Symbol s = kUndefined;
        bool constant = true;
        for (const auto& j : j_set)
            for (int f = 0; f < grp.order(); ++f) {
                GroupElement h = j;
                h.f = f;
                Symbol t = y(h);
                if (s == kUndefined) s = t;
                else if (t != s) constant = false;
            }
        if (!constant) {
            out.failure = "sigma^v x not constant on J(" + std::to_string(n) + ")R for v = " + to_string(v);
            continue;
        }
        out.found = true;
        out.v = v;
        out.symbol = s;
    }
    if (out.matches == 0) out.failure = "no v in D_" + std::to_string(n) + "R matches the period pattern";
    else if (out.matches > 1) {
        out.found = false;
        out.failure = std::to_string(out.matches) + " matches in D_" + std::to_string(n) + "R";
    }
    return out;
}

TZetaResult tzeta_decompose(const ToeplitzSystem& sys, const OdometerCoords& coords, int base_level,
                            const BoxIndexer& window) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    const int K = coords.depth();
    if (base_level < 1 || base_level > K) throw SpecError("base level out of range");
    const GroupElement& t = coords.t(K);
    const int levels = K - base_level + 1;

    TZetaResult out;
    std::unordered_map<GroupElement, std::size_t, ElementHash> piece_of;
    std::vector<std::unordered_map<GroupElement, GroupElement, ElementHash>> parent(static_cast<std::size_t>(levels));
    out.nested = true;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < window.size(); ++k) {
        const GroupElement tg = grp.op(t, window.element(k));
        std::vector<GroupElement> chain;
        for (int l = base_level; l <= K; ++l) chain.push_back(lat.decompose_right(tg, l).gamma);
        for (int l = 0; l + 1 < levels; ++l) {
            auto [it, fresh] = parent[static_cast<std::size_t>(l)].emplace(chain[l], chain[l + 1]);
            if (!fresh && !(it->second == chain[l + 1])) out.nested = false;
        }
        auto [it, fresh] = piece_of.emplace(chain.back(), out.pieces.size());
        if (fresh) {
            TZetaPiece p;
            p.base_level = base_level;
            p.zeta = chain.front();
            p.chain = chain;
            out.pieces.push_back(std::move(p));
        }
        out.pieces[it->second].members.push_back(k);
        ++assigned;
    }
    std::vector<char> seen(window.size(), 0);
    out.disjoint = true;
    std::size_t total = 0;
    for (const auto& p : out.pieces)
        for (std::size_t k : p.members) {
            if (seen[k]) out.disjoint = false;
            seen[k] = 1;
            ++total;
        }
    out.covers = total == window.size() && assigned == window.size() &&
                 std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    out.within_bound = static_cast<Int>(out.pieces.size()) <= sys.piece_bound();
    return out;
}

std::vector<char> aper_set(const ToeplitzSystem& sys, const OdometerCoords& coords, const BoxIndexer& window) {
    const GroupSpec& grp = sys.group();
    std::vector<char> out(window.size(), 1);
    for (std::size_t k = 0; k < window.size(); ++k) {
        const GroupElement g = window.element(k);
        for (int i = 1; i <= coords.depth(); ++i)
            if (periodic_level(sys.cell(grp.op(coords.t(i), g)), i)) {
                out[k] = 0;
                break;
            }
    }
    return out;
}

LanguageOracle make_oracle(const ToeplitzSystem& sys, const BoxIndexer& window) {
    LanguageOracle o;
    o.patch = kernels::parallel::materialize(sys, window);
    for (const auto& c : o.patch.cells())
        if (!c.defined()) throw DepthExhausted("oracle window not fully defined");
    o.source = sys.kind();
    return o;
}

LanguageOracle default_oracle(const ToeplitzSystem& sys) {
    if (const auto* w = dynamic_cast<const WilliamsToeplitz*>(&sys)) {
        const Int r = w->defined_radius();
        Vec lo{}, ext{};
        lo[0] = -r;
        ext[0] = 2 * r;
        LanguageOracle o = make_oracle(sys, BoxIndexer(1, lo, ext, 1));
        o.source = "williams [-" + std::to_string(r) + ", " + std::to_string(r) + ")";
        return o;
    }
    const int N = sys.steps() - 1;
    LanguageOracle o = make_oracle(sys, sys.lattice().domain_indexer(N, true));
    o.source = sys.kind() + " D_" + std::to_string(N) + "R";
    return o;
}

FiberResult fiber_enumerate(const ToeplitzSystem& sys, const OdometerCoords& coords, const BoxIndexer& window,
                            const LanguageOracle& oracle) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    const int K = coords.depth();
    const int r = lat.rank();
    const GroupElement& tK = coords.t(K);

    FiberResult out;
    out.coords = coords;
    const TZetaResult tz = tzeta_decompose(sys, coords, K, window);
    out.pieces = tz.pieces.size();
    out.pieces_ok = tz.disjoint && tz.covers && tz.nested && tz.within_bound;

    const std::vector<char> aper = aper_set(sys, coords, window);
    std::vector<Symbol> forced(window.size(), kUndefined);
    for (std::size_t k = 0; k < window.size(); ++k) {
        Cell c = sys.cell(grp.op(tK, window.element(k)));
        if (aper[k]) {
            ++out.aper_size;
            // the literal union and the depth-K level must agree
            if (periodic_level(c, K)) out.pieces_ok = false;
        } else {
            if (!periodic_level(c, K)) out.pieces_ok = false;
            forced[k] = c.symbol;
        }
    }
    std::vector<std::vector<std::size_t>> aper_members;
    for (const auto& p : tz.pieces) {
        std::vector<std::size_t> mem;
        for (std::size_t k : p.members)
            if (aper[k]) mem.push_back(k);
        if (!mem.empty()) aper_members.push_back(std::move(mem));
    }
    out.aper_pieces = aper_members.size();
    out.candidates = 1;
    for (std::size_t k = 0; k < out.aper_pieces; ++k) out.candidates *= static_cast<std::size_t>(sys.m());

    // approximants gamma t_K, gamma in Gamma_K, with gamma t_K W inside the oracle box
    Vec lo_range{}, hi_range{};
    for (int j = 0; j < r; ++j) {
        lo_range[j] = std::numeric_limits<Int>::max();
        hi_range[j] = std::numeric_limits<Int>::min();
    }
    std::vector<GroupElement> tw(window.size());
    for (std::size_t k = 0; k < window.size(); ++k) {
        tw[k] = grp.op(tK, window.element(k));
        for (int j = 0; j < r; ++j) {
            lo_range[j] = std::min(lo_range[j], tw[k].v[j]);
            hi_range[j] = std::max(hi_range[j], tw[k].v[j]);
        }
    }
    const BoxIndexer& ob = oracle.patch.indexer();
    const Vec& p = lat.modulus(K);
    Vec first{}, count{};
    bool empty = window.size() == 0;
    for (int j = 0; j < r && !empty; ++j) {
        const Int a = ob.lo()[j] - lo_range[j];
        const Int b = ob.lo()[j] + ob.extent()[j] - 1 - hi_range[j];
        first[j] = ceil_div(a, p[j]);
        const Int last = floor_div(b, p[j]);
        count[j] = last - first[j] + 1;
        if (count[j] <= 0) empty = true;
    }
    const std::set<Symbol> regular = regular_symbols(sys);
    std::set<std::vector<Symbol>> realized;
    if (!empty) {
        Int total = 1;
        for (int j = 0; j < r; ++j) total *= count[j];
        for (Int code = 0; code < total; ++code) {
            Int c = code;
            Vec shift{};
            for (int j = r - 1; j >= 0; --j) {
                shift[j] = (first[j] + c % count[j]) * p[j];
                c /= count[j];
            }
            std::vector<Symbol> word(window.size());
            for (std::size_t k = 0; k < window.size(); ++k) {
                GroupElement h = tw[k];
                for (int j = 0; j < r; ++j) h.v[j] += shift[j];
                word[k] = oracle.at(h);
            }
            ++out.approximants;
            realized.insert(std::move(word));
        }
    }
    out.patches.assign(realized.begin(), realized.end());
    out.realized_are_candidates = true;
    for (const auto& word : out.patches) {
        bool ok = true;
        for (std::size_t k = 0; k < window.size() && ok; ++k)
            if (!aper[k] && word[k] != forced[k]) ok = false;
        std::vector<Symbol> syms;
        for (const auto& mem : aper_members) {
            const Symbol s = word[mem.front()];
            for (std::size_t k : mem)
                if (word[k] != s) ok = false;
            if (!regular.count(s)) ok = false;
            syms.push_back(s);
        }
        out.aper_symbols.push_back(std::move(syms));
        if (!ok) out.realized_are_candidates = false;
    }
    out.within_bound = static_cast<Int>(out.patches.size()) <= sys.fiber_bound() && out.patches.size() <= out.candidates;
    return out;
}

namespace {

void accumulate(FiberScanSummary& s, const OdometerCoords& c, const FiberResult& r) {
    ++s.coords_scanned;
    const std::size_t fib = r.patches.size();
    s.max_fiber = std::max(s.max_fiber, fib);
    s.max_pieces = std::max(s.max_pieces, r.pieces);
    if (s.fiber_histogram.size() <= fib) s.fiber_histogram.resize(fib + 1, 0);
    ++s.fiber_histogram[fib];
    if (s.piece_histogram.size() <= r.pieces) s.piece_histogram.resize(r.pieces + 1, 0);
    ++s.piece_histogram[r.pieces];
    if (!r.ok()) ++s.violations;
    if (fib >= 2 && !s.first_nontrivial) s.first_nontrivial = c;
}

}  // namespace

namespace kernels::serial {

FiberScanSummary fiber_scan(const ToeplitzSystem& sys, int depth, const BoxIndexer& window, const LanguageOracle& oracle) {
    FiberScanSummary s;
    s.depth = depth;
    for (const auto& c : all_coords(sys.lattice(), depth)) accumulate(s, c, fiber_enumerate(sys, c, window, oracle));
    return s;
}

}  // namespace kernels::serial

namespace kernels::parallel {

FiberScanSummary fiber_scan(const ToeplitzSystem& sys, int depth, const BoxIndexer& window, const LanguageOracle& oracle) {
    const auto coords = all_coords(sys.lattice(), depth);
    std::vector<FiberResult> results(coords.size());
    const auto n = static_cast<std::int64_t>(coords.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads())
    for (std::int64_t k = 0; k < n; ++k) {
        const auto u = static_cast<std::size_t>(k);
        results[u] = fiber_enumerate(sys, coords[u], window, oracle);
    }
    FiberScanSummary s;
    s.depth = depth;
    for (std::size_t k = 0; k < coords.size(); ++k) accumulate(s, coords[k], results[k]);
    return s;
}

}  // namespace kernels::parallel

PerLemmaReport lemma_per_check(const GroupToeplitz& sys, int n, int N) {
    const Lattice& lat = sys.lattice();
    if (n < 1 || n >= N || N > sys.max_window_level()) throw SpecError("lemma_per_check needs 1 <= n < N <= steps-1");
    const WindowPatch eta = kernels::serial::materialize(sys, lat.domain_indexer(N, true));
    const SubgroupRef gam = gamma_subgroup(lat, n);
    std::vector<char> per(eta.size(), 0);
    for (Symbol a : sys.alphabet()) {
        auto part = per_set_empirical(eta, gam, a);
        for (std::size_t k = 0; k < per.size(); ++k) per[k] |= part[k];
    }
    PerLemmaReport out;
    out.n = n;
    out.N = N;
    out.empirical_matches_levels = true;
    for (std::size_t k = 0; k < eta.size(); ++k) {
        const Cell& c = eta[k];
        const bool lv = periodic_level(c, n);
        if (lv != static_cast<bool>(per[k])) out.empirical_matches_levels = false;
        // union over i = 1..n-1 of Gamma_{i+1} J(i) R: levels 2..n
        const bool stated = c.level >= 2 && c.level <= n;
        out.per_size += per[k] != 0;
        out.stated_union_size += stated;
        if (per[k] && !stated) ++out.stated_union_missing;
    }
    return out;
}

LemmaRReport lemma_r_check(const GroupToeplitz& sys, int n) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    LemmaRReport out;
    out.n = n;
    for (const auto& g : lat.enumerate_domain(n, true)) {
        GroupElement base = g;
        base.f = 0;
        const Cell cg = sys.cell(g);
        const Cell cb = sys.cell(base);
        const bool above1 = !lat.member_gamma(grp.lattice_element(g.v), 1);
        for (int i = 1; i <= sys.m(); ++i) {
            const Symbol a = sys.alpha(i);
            const bool lhs = periodic_level(cg, n) && cg.symbol == a;
            const bool rhs = periodic_level(cb, n) && cb.symbol == a;
            if (lhs != rhs) {
                ++out.literal_mismatches;
                if (above1) ++out.mismatches_above_level1;
            }
        }
    }
    return out;
}

std::size_t essentiality_failures(const GroupToeplitz& sys) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    if (sys.steps() < 3) throw SpecError("essentiality check needs three steps");
    const auto gammas = lat.gamma_in_domain(1, 3);
    std::vector<GroupElement> level1;
    for (const auto& h : lat.enumerate_domain(1, true))
        if (sys.cell(h).level == 1) level1.push_back(h);
    std::size_t failures = 0;
    for (const auto& g : lat.enumerate_domain(2, true)) {
        if (lat.member_gamma(g, 1) && g.f == 0) continue;
        const GroupElement gi = grp.inv(g);
        bool witnessed = false;
        for (const auto& h : level1) {
            const Symbol a = sys.cell(h).symbol;
            for (const auto& gamma : gammas)
                if (sys.cell(grp.op(gi, grp.op(grp.inv(gamma), h))).symbol != a) {
                    witnessed = true;
                    break;
                }
            if (witnessed) break;
        }
        if (!witnessed) ++failures;
    }
    return failures;
}

bool approximant_in_class(const ToeplitzSystem& sys, const PeriodicApproximant& eta_m, int n) {
    const Lattice& lat = sys.lattice();
    // at n = M every Gamma_M class in D_M R is a single point
    if (n >= eta_m.level) throw SpecError("approximant_in_class needs n below the approximant level");
    const BoxIndexer small = lat.domain_indexer(n, true);
    std::vector<Symbol> value(small.size(), kUndefined);
    std::vector<char> constant(small.size(), 1), seen(small.size(), 0);
    const BoxIndexer& big = eta_m.base.indexer();
    for (std::size_t k = 0; k < big.size(); ++k) {
        const std::size_t c = small.index(lat.rep(big.element(k), n));
        const Symbol s = eta_m.base[k].symbol;
        if (!seen[c]) {
            seen[c] = 1;
            value[c] = s;
        } else if (value[c] != s) {
            constant[c] = 0;
        }
    }
    for (std::size_t c = 0; c < small.size(); ++c) {
        const Cell want = sys.cell(small.element(c));
        const bool periodic = periodic_level(want, n);
        if (periodic != static_cast<bool>(constant[c])) return false;
        if (periodic && value[c] != want.symbol) return false;
    }
    return true;
}

}  // namespace toeplitz
