#include "toeplitz/independence.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <climits>
#include <cmath>
#include <map>

namespace toeplitz {

void Cylinder::validate() const {
    if (shape.empty()) throw SpecError("cylinder with empty shape");
    if (pattern.size() != shape.size()) throw SpecError("cylinder pattern does not cover its shape");
}

Cylinder symbol_cylinder(const GroupSpec& g, Symbol s) { return Cylinder{{g.identity()}, {s}}; }

Cylinder restrict_patch(const WindowPatch& patch, Int radius) {
    const auto& ix = patch.indexer();
    for (int j = 0; j < ix.rank(); ++j)
        if (ix.lo()[j] > -radius || ix.lo()[j] + ix.extent()[j] - 1 < radius)
            throw SpecError("radius " + std::to_string(radius) + " does not fit the patch window");
    Cylinder c;
    for (std::size_t k = 0; k < patch.size(); ++k) {
        const GroupElement g = patch.element(k);
        if (max_norm(g) <= radius) {
            c.shape.push_back(g);
            c.pattern.push_back(patch[k].symbol);
        }
    }
    return c;
}

std::size_t Certificate::assignments() const {
    std::size_t n = 1;
    for (std::size_t j = 0; j < J.size(); ++j) n *= k();
    return n;
}

std::size_t Certificate::digit(std::size_t c, std::size_t j) const {
    for (std::size_t t = 0; t < j; ++t) c /= k();
    return c % k();
}

namespace {

// h g^{-1} f for each f, or nothing if some read leaves the window
bool read_matches(const GroupSpec& G, const LanguageOracle& oracle, const Cylinder& a, const GroupElement& h,
                  const GroupElement& g, bool throw_outside) {
    const GroupElement hg = G.op(h, G.inv(g));
    for (std::size_t t = 0; t < a.shape.size(); ++t) {
        const GroupElement p = G.op(hg, a.shape[t]);
        const std::size_t idx = oracle.patch.indexer().find(p);
        if (idx == oracle.patch.size()) {
            if (throw_outside) throw WitnessOutsideWindow("read at " + to_string(p) + " is outside the oracle window");
            return false;
        }
        if (oracle.patch[idx].symbol != a.pattern[t]) return false;
    }
    return true;
}

}  // namespace

bool occurs_at(const GroupSpec& G, const LanguageOracle& oracle, const Cylinder& a, const GroupElement& h,
               const GroupElement& g) {
    return read_matches(G, oracle, a, h, g, false);
}

bool check_certificate(const GroupSpec& G, const Certificate& cert, const LanguageOracle& oracle) {
    if (cert.cylinders.empty() || cert.J.empty()) throw SpecError("certificate without cylinders or J");
    if (cert.witnesses.size() != cert.assignments()) throw SpecError("witness table has the wrong size");
    for (const auto& c : cert.cylinders) c.validate();
    bool ok = true;
    for (std::size_t c = 0; c < cert.witnesses.size(); ++c)
        for (std::size_t j = 0; j < cert.J.size(); ++j)
            if (!read_matches(G, oracle, cert.cylinders[cert.digit(c, j)], cert.witnesses[c], cert.J[j], true)) ok = false;
    return ok;
}

Certificate restrict_certificate(const Certificate& cert, const std::vector<std::size_t>& keep_j,
                                 const std::vector<std::size_t>& keep_cyl) {
    if (keep_j.empty() || keep_cyl.empty()) throw SpecError("restriction must keep at least one element");
    Certificate out;
    for (auto i : keep_cyl) out.cylinders.push_back(cert.cylinders.at(i));
    for (auto j : keep_j) out.J.push_back(cert.J.at(j));
    const std::size_t n = out.assignments();
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::size_t> old(cert.J.size(), keep_cyl[0]);
        for (std::size_t t = 0; t < keep_j.size(); ++t) old[keep_j[t]] = keep_cyl[out.digit(c, t)];
        std::size_t code = 0;
        for (std::size_t j = cert.J.size(); j-- > 0;) code = code * cert.k() + old[j];
        out.witnesses.push_back(cert.witnesses[code]);
    }
    return out;
}

Certificate pad_certificate(const Certificate& cert) {
    Certificate out;
    out.cylinders.push_back(cert.cylinders.at(0));
    out.cylinders.insert(out.cylinders.end(), cert.cylinders.begin(), cert.cylinders.end());
    out.J = cert.J;
    const std::size_t n = out.assignments();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t code = 0;
        for (std::size_t j = cert.J.size(); j-- > 0;) {
            const std::size_t d = out.digit(c, j);
            code = code * cert.k() + (d <= 1 ? 0 : d - 1);
        }
        out.witnesses.push_back(cert.witnesses[code]);
    }
    return out;
}

std::string to_string(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::Found: return "found";
        case SearchOutcome::None: return "none";
        case SearchOutcome::Exhausted: return "exhausted";
    }
    return "?";
}

SearchSpace candidate_box(const GroupSpec& G, Int radius) {
    SearchSpace s{box_elements(G, radius, true)};
    std::sort(s.candidates.begin(), s.candidates.end(), search_less);
    return s;
}

SearchSpace gamma_candidates(const Lattice& lat, int K, Int radius) {
    SearchSpace s;
    for (const auto& g : box_elements(lat.group(), radius, false))
        if (lat.member_gamma(g, K)) s.candidates.push_back(g);
    std::sort(s.candidates.begin(), s.candidates.end(), search_less);
    return s;
}

// ---- backtracking ----------------------------------------------------------------------

namespace {

using Bits = std::vector<std::uint64_t>;
using Clock = std::chrono::steady_clock;

struct Masks {
    std::size_t k = 0, words = 0;
    std::vector<Bits> m;  // [candidate * k + cylinder]: oracle positions h that read the cylinder at g
    std::vector<char> viable;

    const Bits& at(std::size_t c, std::size_t a) const { return m[c * k + a]; }
};

// Oracle positions u where the cylinder occurs: eta(u f) = pattern(f).
std::vector<std::size_t> occurrences(const GroupSpec& G, const LanguageOracle& oracle, const Cylinder& a, bool parallel) {
    const long n = static_cast<long>(oracle.patch.size());
    std::vector<char> hit(oracle.patch.size(), 0);
    if (parallel) {
#pragma omp parallel for schedule(static) num_threads(threads())
        for (long u = 0; u < n; ++u)
            hit[static_cast<std::size_t>(u)] = read_matches(G, oracle, a, oracle.patch.element(static_cast<std::size_t>(u)), G.identity(), false);
    } else {
        for (long u = 0; u < n; ++u)
            hit[static_cast<std::size_t>(u)] = read_matches(G, oracle, a, oracle.patch.element(static_cast<std::size_t>(u)), G.identity(), false);
    }
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < hit.size(); ++u)
        if (hit[u]) out.push_back(u);
    return out;
}

bool any(const Bits& b) {
    for (auto w : b)
        if (w) return true;
    return false;
}

// h reads the cylinder at g iff h g^{-1} is an occurrence, i.e. h = u g
void fill_candidate(Masks& M, const GroupSpec& G, const LanguageOracle& oracle,
                    const std::vector<std::vector<std::size_t>>& occ, const SearchSpace& space, std::size_t c) {
    bool ok = true;
    const GroupElement& g = space.candidates[c];
    for (std::size_t a = 0; a < M.k; ++a) {
        Bits& b = M.m[c * M.k + a];
        b.assign(M.words, 0);
        for (std::size_t u : occ[a]) {
            const std::size_t h = oracle.patch.indexer().find(G.op(oracle.patch.element(u), g));
            if (h != oracle.patch.size()) b[h / 64] |= std::uint64_t{1} << (h % 64);
        }
        ok = ok && any(b);
    }
    M.viable[c] = ok;
}

Masks make_masks(const GroupSpec& G, const LanguageOracle& oracle, const std::vector<Cylinder>& cyl,
                 const SearchSpace& space, bool parallel) {
    Masks M;
    M.k = cyl.size();
    M.words = (oracle.patch.size() + 63) / 64;
    M.m.resize(space.candidates.size() * M.k);
    M.viable.assign(space.candidates.size(), 0);
    std::vector<std::vector<std::size_t>> occ;
    for (const auto& a : cyl) occ.push_back(occurrences(G, oracle, a, parallel));
    const long n = static_cast<long>(space.candidates.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads())
        for (long c = 0; c < n; ++c) fill_candidate(M, G, oracle, occ, space, static_cast<std::size_t>(c));
    } else {
        for (long c = 0; c < n; ++c) fill_candidate(M, G, oracle, occ, space, static_cast<std::size_t>(c));
    }
    return M;
}

struct Shared {
    Clock::time_point start;
    SearchBudget budget;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> out_of_budget{false};
    std::atomic<long> best{LONG_MAX};  // smallest first-level candidate with a success

    bool over() {
        if (out_of_budget.load(std::memory_order_relaxed)) return true;
        const std::uint64_t n = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        bool stop = budget.nodes != 0 && n > budget.nodes;
        if (!stop && budget.seconds > 0 && (n & 63) == 0)
            stop = std::chrono::duration<double>(Clock::now() - start).count() > budget.seconds;
        if (stop) out_of_budget = true;
        return stop;
    }
};

enum class Branch { Found, None, Exhausted, Cancelled };

struct BranchResult {
    Branch status = Branch::None;
    std::vector<std::size_t> chosen;
    std::vector<Bits> final_sets;
    std::uint64_t nodes = 0;
};

class Searcher {
public:
    Searcher(const Masks& M, std::size_t L, Shared& shared, long root) : M_(M), L_(L), shared_(shared), root_(root) {}

    BranchResult run() {
        BranchResult r;
        const auto c0 = static_cast<std::size_t>(root_);
        if (!M_.viable[c0]) return r;
        ++r.nodes;
        if (shared_.over()) {
            r.status = Branch::Exhausted;
            return r;
        }
        std::vector<Bits> sets;
        for (std::size_t a = 0; a < M_.k; ++a) sets.push_back(M_.at(c0, a));
        chosen_ = {c0};
        const Branch b = extend(sets, c0 + 1, r);
        r.status = b;
        if (b == Branch::Found) r.chosen = chosen_;
        return r;
    }

private:
    Branch extend(const std::vector<Bits>& sets, std::size_t start, BranchResult& r) {
        if (chosen_.size() == L_) {
            r.final_sets = sets;
            return Branch::Found;
        }
        const std::size_t n = M_.viable.size();
        std::vector<Bits> next(sets.size() * M_.k, Bits(M_.words));
        for (std::size_t c = start; c < n; ++c) {
            if (!M_.viable[c]) continue;
            if (shared_.best.load(std::memory_order_relaxed) < root_) return Branch::Cancelled;
            ++r.nodes;
            if (shared_.over()) return Branch::Exhausted;
            bool ok = true;
            for (std::size_t a = 0; a < M_.k && ok; ++a) {
                const Bits& mask = M_.at(c, a);
                for (std::size_t s = 0; s < sets.size() && ok; ++s) {
                    Bits& out = next[s + a * sets.size()];
                    std::uint64_t acc = 0;
                    for (std::size_t w = 0; w < M_.words; ++w) acc |= (out[w] = sets[s][w] & mask[w]);
                    ok = acc != 0;
                }
            }
            if (!ok) continue;
            chosen_.push_back(c);
            const Branch b = extend(next, c + 1, r);
            if (b != Branch::None) return b;
            chosen_.pop_back();
        }
        return Branch::None;
    }

    const Masks& M_;
    std::size_t L_;
    Shared& shared_;
    long root_;
    std::vector<std::size_t> chosen_;
};

std::size_t first_bit(const Bits& b) {
    for (std::size_t w = 0; w < b.size(); ++w)
        if (b[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(b[w]));
    return SIZE_MAX;
}

Certificate assemble(const std::vector<Cylinder>& cyl, const SearchSpace& space, const LanguageOracle& oracle,
                     const BranchResult& r) {
    Certificate cert;
    cert.cylinders = cyl;
    for (auto c : r.chosen) cert.J.push_back(space.candidates[c]);
    for (const auto& s : r.final_sets) cert.witnesses.push_back(oracle.patch.element(first_bit(s)));
    return cert;
}

SearchResult finish(const GroupSpec& G, const std::vector<Cylinder>& cyl, const SearchSpace& space,
                    const LanguageOracle& oracle, const std::vector<BranchResult>& branches, Clock::time_point start) {
    SearchResult out;
    out.outcome = SearchOutcome::None;
    for (const auto& b : branches) {
        out.nodes += b.nodes;
        if (b.status == Branch::Found) {
            out.outcome = SearchOutcome::Found;
            out.certificate = assemble(cyl, space, oracle, b);
            if (!check_certificate(G, *out.certificate, oracle))
                throw InvariantViolation("search produced a certificate that does not re-verify");
            break;
        }
        if (b.status == Branch::Exhausted || b.status == Branch::Cancelled) {
            out.outcome = SearchOutcome::Exhausted;
            break;
        }
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
}

void check_inputs(const std::vector<Cylinder>& cyl, std::size_t L) {
    if (cyl.empty()) throw SpecError("no cylinders");
    if (L == 0) throw SpecError("target size must be positive");
    for (const auto& c : cyl) c.validate();
}

}  // namespace

namespace kernels::serial {

SearchResult find_independence_set(const GroupSpec& G, const std::vector<Cylinder>& cylinders, std::size_t L,
                                   const LanguageOracle& oracle, const SearchSpace& space, const SearchBudget& budget) {
    check_inputs(cylinders, L);
    Shared shared;
    shared.start = Clock::now();
    shared.budget = budget;
    const Masks M = make_masks(G, oracle, cylinders, space, false);
    std::vector<BranchResult> branches;
    for (std::size_t c = 0; c < space.candidates.size(); ++c) {
        branches.push_back(Searcher(M, L, shared, static_cast<long>(c)).run());
        if (branches.back().status != Branch::None) break;
    }
    return finish(G, cylinders, space, oracle, branches, shared.start);
}

}  // namespace kernels::serial

namespace kernels::parallel {

SearchResult find_independence_set(const GroupSpec& G, const std::vector<Cylinder>& cylinders, std::size_t L,
                                   const LanguageOracle& oracle, const SearchSpace& space, const SearchBudget& budget) {
    check_inputs(cylinders, L);
    Shared shared;
    shared.start = Clock::now();
    shared.budget = budget;
    const Masks M = make_masks(G, oracle, cylinders, space, true);
    const long n = static_cast<long>(space.candidates.size());
    std::vector<BranchResult> branches(space.candidates.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads())
    for (long c = 0; c < n; ++c) {
        if (shared.best.load() < c || shared.out_of_budget.load()) {
            branches[static_cast<std::size_t>(c)].status = Branch::Cancelled;
            continue;
        }
        branches[static_cast<std::size_t>(c)] = Searcher(M, L, shared, c).run();
        if (branches[static_cast<std::size_t>(c)].status == Branch::Found) {
            long cur = shared.best.load();
            while (c < cur && !shared.best.compare_exchange_weak(cur, c)) {
            }
        }
    }
    // branches before the first success ran to completion unless the budget ran out
    return finish(G, cylinders, space, oracle, branches, shared.start);
}

}  // namespace kernels::parallel

// ---- tuples ------------------------------------------------------------------------------

InTupleReport in_tuple_search(const GroupSpec& G, const std::vector<WindowPatch>& points, const std::vector<Int>& radii,
                              std::size_t L, const LanguageOracle& oracle, const SearchSpace& space,
                              const SearchBudget& budget, Int fiber_bound) {
    if (points.empty() || radii.empty()) throw SpecError("in_tuple_search needs points and radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] >= radii[i - 1]) throw SpecError("radii must be strictly decreasing");
    InTupleReport rep;
    if (static_cast<Int>(points.size()) > fiber_bound) {
        rep.filter_reason = "k = " + std::to_string(points.size()) + " exceeds the fiber bound " + std::to_string(fiber_bound);
        return rep;
    }
    std::vector<Cylinder> outer;
    for (const auto& p : points) outer.push_back(restrict_patch(p, radii.front()));
    for (std::size_t i = 0; i < outer.size(); ++i)
        for (std::size_t j = i + 1; j < outer.size(); ++j)
            if (outer[i] == outer[j]) {
                rep.filter_reason = "points " + std::to_string(i) + " and " + std::to_string(j) + " agree on the largest radius";
                return rep;
            }
    rep.filter_ok = true;
    for (Int r : radii) {
        std::vector<Cylinder> cyl;
        for (const auto& p : points) cyl.push_back(restrict_patch(p, r));
        RadiusAttempt at{r, kernels::parallel::find_independence_set(G, cyl, L, oracle, space, budget)};
        if (at.result.outcome != SearchOutcome::Found && !rep.failure_radius) rep.failure_radius = r;
        rep.attempts.push_back(std::move(at));
    }
    return rep;
}

bool verify_proximal(const GroupSpec& G, const std::vector<Cylinder>& balls, const ProximalWitness& w,
                     const LanguageOracle& oracle) {
    if (w.h.size() != balls.size()) throw SpecError("one witness position per ball expected");
    std::vector<Symbol> common;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        if (!read_matches(G, oracle, balls[i], w.h[i], G.identity(), true)) return false;
        std::vector<Symbol> shifted;
        const GroupElement base = G.op(w.h[i], G.inv(w.g));
        for (const auto& f : balls[i].shape) {
            const GroupElement p = G.op(base, f);
            if (!oracle.covers(p)) throw WitnessOutsideWindow("read at " + to_string(p) + " is outside the oracle window");
            shifted.push_back(oracle.at(p));
        }
        if (i == 0) common = shifted;
        else if (shifted != common) return false;
    }
    return true;
}

ProximalResult regional_proximality_check(const GroupSpec& G, const std::vector<Cylinder>& balls,
                                          const LanguageOracle& oracle, const SearchSpace& shifts) {
    if (balls.empty()) throw SpecError("no balls");
    for (const auto& b : balls) {
        b.validate();
        if (b.shape != balls[0].shape) throw SpecError("balls must share one shape");
    }
    const auto& shape = balls[0].shape;
    std::vector<std::vector<GroupElement>> occ(balls.size());
    for (std::size_t idx = 0; idx < oracle.patch.size(); ++idx) {
        const GroupElement h = oracle.patch.element(idx);
        for (std::size_t i = 0; i < balls.size(); ++i)
            if (read_matches(G, oracle, balls[i], h, G.identity(), false)) occ[i].push_back(h);
    }
    ProximalResult res;
    for (const auto& g : shifts.candidates) {
        ++res.shifts_tried;
        const GroupElement gi = G.inv(g);
        std::map<std::vector<Symbol>, std::vector<GroupElement>> common;  // pattern -> h per ball
        for (std::size_t i = 0; i < balls.size(); ++i) {
            std::map<std::vector<Symbol>, GroupElement> seen;
            for (const auto& h : occ[i]) {
                const GroupElement base = G.op(h, gi);
                std::vector<Symbol> w;
                w.reserve(shape.size());
                bool inside = true;
                for (const auto& f : shape) {
                    const GroupElement p = G.op(base, f);
                    if (!oracle.covers(p)) {
                        inside = false;
                        break;
                    }
                    w.push_back(oracle.at(p));
                }
                if (inside) seen.emplace(std::move(w), h);
            }
            if (i == 0) {
                for (auto& [w, h] : seen) common[w] = {h};
            } else {
                for (auto it = common.begin(); it != common.end();) {
                    auto s = seen.find(it->first);
                    if (s == seen.end()) {
                        it = common.erase(it);
                    } else {
                        it->second.push_back(s->second);
                        ++it;
                    }
                }
            }
            if (common.empty()) break;
        }
        if (!common.empty()) {
            res.holds = true;
            res.witness = ProximalWitness{g, common.begin()->second};
            return res;
        }
    }
    return res;
}

ProximalWitness proximal_from_certificate(const GroupSpec& G, const Certificate& cert) {
    if (cert.J.size() < 2) throw SpecError("need |J| >= 2");
    ProximalWitness w;
    const GroupElement g0i = G.inv(cert.J[0]);
    w.g = G.op(cert.J[1], g0i);
    // assignment s(J[0]) = i, s(J[j]) = 1 otherwise
    for (std::size_t i = 0; i < cert.k(); ++i) w.h.push_back(G.op(cert.witnesses[i], g0i));
    return w;
}

EntropyBounds entropy_bounds(std::size_t certified_k, Int fiber_bound) {
    if (certified_k == 0 || fiber_bound <= 0) throw SpecError("entropy bounds need a certified size and a fiber bound");
    if (static_cast<Int>(certified_k) > fiber_bound)
        throw InvariantViolation("certified tuple size " + std::to_string(certified_k) + " exceeds the fiber bound " +
                                 std::to_string(fiber_bound));
    EntropyBounds e;
    e.certified_k = certified_k;
    e.fiber_bound = fiber_bound;
    e.lower = std::log(static_cast<double>(certified_k));
    e.upper = std::log(static_cast<double>(fiber_bound));
    return e;
}

}  // namespace toeplitz
