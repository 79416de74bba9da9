#include "toeplitz/toeplitz_g.hpp"

#include <algorithm>

namespace toeplitz {

std::string to_string(Variant v) { return v == Variant::Normal41 ? "normal" : "virtually"; }

Variant parse_variant(const std::string& s) {
    if (s == "normal") return Variant::Normal41;
    if (s == "virtually") return Variant::Virtually43;
    throw SpecError("unknown variant '" + s + "' (expected normal or virtually)");
}

GroupToeplitz::GroupToeplitz(ConstructionParams params) : params_(std::move(params)) {
    if (params_.m < 2) throw SpecError("m must be at least 2");
    if (params_.variant == Variant::Normal41 && group().order() > 1)
        throw SpecError("the normal-subgroup variant is only supported with trivial finite part");
    auto bad = lattice().growth_violations();
    if (!bad.empty()) throw SpecError(bad.front());
    if (lattice().depth() < 2) throw SpecError("chain needs at least two levels");
}

int GroupToeplitz::level_of(const GroupElement& g) const {
    const Lattice& lat = lattice();
    for (int k = 1; k <= lat.depth(); ++k) {
        auto dec = lat.decompose_right(g, k);
        if (lat.in_domain(dec.d, k - 1)) return k;
    }
    return 0;
}

Cell GroupToeplitz::cell(const GroupElement& g) const {
    const int level = level_of(g);
    if (level == 0) return {};
    if (level == 1) return {g.f == 0 ? alpha(1) : kBeta, 1};
    return {alpha(level), static_cast<std::int16_t>(level)};
}

Cell GroupToeplitz::eta_value(const GroupElement& g) const {
    Cell c = cell(g);
    if (!c.defined())
        throw DepthExhausted("position " + to_string(g) + " is not covered by the " + std::to_string(steps()) +
                             " configured levels");
    return c;
}

Symbol GroupToeplitz::eta_n_value(int n, const GroupElement& g) const {
    return eta_value(lattice().rep(g, n)).symbol;
}

std::vector<Symbol> GroupToeplitz::alphabet() const {
    std::vector<Symbol> out;
    if (has_beta()) out.push_back(kBeta);
    for (int s = 1; s <= params_.m; ++s) out.push_back(static_cast<Symbol>(s));
    return out;
}

Int GroupToeplitz::fiber_bound() const {
    Int e = (Int{1} << lattice().rank()) * group().order();
    Int b = 1;
    for (Int k = 0; k < e; ++k) b *= params_.m;
    return b;
}

Int GroupToeplitz::piece_bound() const { return (Int{1} << lattice().rank()) * group().order(); }

namespace {

// Lattice multiples of p (coordinate-wise) with lo <= x < hi.
template <class F>
void for_multiples_in_box(const Vec& p, const Vec& lo, const Vec& hi, int rank, F&& fn) {
    Vec kmin{}, ext{};
    for (int j = 0; j < rank; ++j) {
        kmin[j] = -floor_div(-lo[j], p[j]);  // ceil(lo/p)
        Int kmax = floor_div(hi[j] - 1, p[j]);
        ext[j] = kmax - kmin[j] + 1;
        if (ext[j] <= 0) return;
    }
    BoxIndexer idx(rank, kmin, ext, 1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        GroupElement g = idx.element(k);
        for (int j = 0; j < rank; ++j) g.v[j] *= p[j];
        fn(g.v);
    }
}

Vec modulus_or_one(const Lattice& lat, int i) {
    if (i == 0) {
        Vec one{};
        for (int j = 0; j < lat.rank(); ++j) one[j] = 1;
        return one;
    }
    return lat.modulus(i);
}

}  // namespace

std::vector<GroupElement> GroupToeplitz::compute_J(int n) const {
    const Lattice& lat = lattice();
    const int r = lat.rank();
    if (n < 0 || n + 1 > lat.depth()) throw DepthExhausted("J(" + std::to_string(n) + ") needs Gamma_" + std::to_string(n + 1));
    std::vector<std::vector<GroupElement>> J(1, {group().identity()});
    for (int level = 1; level <= n; ++level) {
        BoxIndexer dom = lat.domain_indexer(level, false);
        std::vector<char> covered(dom.size(), 0);
        Vec lo{}, hi{};
        for (int j = 0; j < r; ++j) {
            lo[j] = -lat.q1(level)[j];
            hi[j] = lat.q2(level)[j];
        }
        for (int i = 0; i < level; ++i) {
            const Vec& p = lat.modulus(i + 1);
            for (const auto& x : J[i]) {
                Vec l2{}, h2{};
                for (int j = 0; j < r; ++j) {
                    l2[j] = lo[j] - x.v[j];
                    h2[j] = hi[j] - x.v[j];
                }
                for_multiples_in_box(p, l2, h2, r, [&](const Vec& gam) {
                    GroupElement y = group().identity();
                    for (int j = 0; j < r; ++j) y.v[j] = gam[j] + x.v[j];
                    covered[dom.index(y)] = 1;
                });
            }
        }
        std::vector<GroupElement> next;
        for (std::size_t k = 0; k < dom.size(); ++k)
            if (!covered[k]) next.push_back(dom.element(k));
        J.push_back(std::move(next));
    }
    return J[n];
}

std::vector<GroupElement> GroupToeplitz::compute_J_recursion(int n) const {
    const Lattice& lat = lattice();
    const int r = lat.rank();
    if (n < 0 || n + 1 > lat.depth()) throw DepthExhausted("J(" + std::to_string(n) + ") needs Gamma_" + std::to_string(n + 1));
    std::vector<GroupElement> cur{group().identity()};
    for (int level = 1; level <= n; ++level) {
        Vec lo{}, hi{};
        for (int j = 0; j < r; ++j) {
            lo[j] = -lat.q1(level)[j];
            hi[j] = lat.q2(level)[j];
        }
        std::vector<GroupElement> next;
        for_multiples_in_box(modulus_or_one(lat, level - 1), lo, hi, r, [&](const Vec& gam) {
            bool zero = true;
            for (int j = 0; j < r; ++j) zero = zero && gam[j] == 0;
            if (zero) return;
            for (const auto& x : cur) {
                GroupElement y = group().identity();
                for (int j = 0; j < r; ++j) y.v[j] = gam[j] + x.v[j];
                next.push_back(y);
            }
        });
        std::sort(next.begin(), next.end(), canonical_less);
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cur = std::move(next);
    }
    return cur;
}

JComparison GroupToeplitz::compare_J(int n) const {
    JComparison out;
    out.by_subtraction = compute_J(n);
    out.by_recursion = compute_J_recursion(n);
    out.equal = out.by_subtraction == out.by_recursion;
    return out;
}

StrataReport GroupToeplitz::check_strata(int N) const {
    const Lattice& lat = lattice();
    const int r = lat.rank();
    if (N + 1 > lat.depth()) throw DepthExhausted("strata on D_" + std::to_string(N) + "R need level " + std::to_string(N + 1));
    BoxIndexer dom = lat.domain_indexer(N, true);
    StrataReport rep;
    rep.level = N;
    rep.window_size = dom.size();
    rep.stratum_sizes.assign(static_cast<std::size_t>(N + 2), 0);
    std::vector<int> hits(dom.size(), 0);
    std::vector<int> stratum(dom.size(), -1);
    Vec lo{}, hi{};
    for (int j = 0; j < r; ++j) {
        lo[j] = -lat.q1(N)[j];
        hi[j] = lat.q2(N)[j];
    }
    auto mark = [&](const Vec& v, int f, int id) {
        GroupElement g = group().identity();
        g.v = v;
        g.f = f;
        std::size_t k = dom.index(g);
        ++hits[k];
        stratum[k] = id;
    };
    // step 1: Gamma_1 (finite part e) and, with the extra symbol, Gamma_1 (R \ {1})
    for_multiples_in_box(lat.modulus(1), lo, hi, r, [&](const Vec& gam) {
        mark(gam, 0, 1);
        for (int f = 1; f < group().order(); ++f) mark(gam, f, has_beta() ? 0 : 1);
    });
    // step i+1: Gamma_{i+1} J(i) R
    for (int i = 1; i <= N; ++i) {
        const Vec& p = lat.modulus(i + 1);
        for (const auto& x : compute_J(i)) {
            Vec l2{}, h2{};
            for (int j = 0; j < r; ++j) {
                l2[j] = lo[j] - x.v[j];
                h2[j] = hi[j] - x.v[j];
            }
            for_multiples_in_box(p, l2, h2, r, [&](const Vec& gam) {
                Vec v{};
                for (int j = 0; j < r; ++j) v[j] = gam[j] + x.v[j];
                for (int f = 0; f < group().order(); ++f) mark(v, f, i + 1);
            });
        }
    }
    for (std::size_t k = 0; k < dom.size(); ++k) {
        if (hits[k] == 0) ++rep.uncovered;
        if (hits[k] > 1) ++rep.overlapping;
        GroupElement g = dom.element(k);
        Cell c = cell(g);
        if (!c.defined()) ++rep.undefined;
        if (stratum[k] >= 0) {
            ++rep.stratum_sizes[static_cast<std::size_t>(stratum[k])];
            int expect_level = stratum[k] == 0 ? 1 : stratum[k];
            bool beta_cell = c.symbol == kBeta && has_beta();
            if (c.level != expect_level || (stratum[k] == 0) != beta_cell) ++rep.level_mismatch;
        }
    }
    return rep;
}

TranslateConstancy GroupToeplitz::verify_translate_constancy(int i, const GroupElement& gamma) const {
    if (!lattice().member_gamma(gamma, i)) throw SpecError("translate is not in Gamma_" + std::to_string(i));
    TranslateConstancy out;
    bool first = true;
    for (const auto& x : compute_J(i)) {
        for (int f = 0; f < group().order(); ++f) {
            GroupElement g = gamma;
            for (int j = 0; j < lattice().rank(); ++j) g.v[j] += x.v[j];
            g.f = f;
            Symbol s = eta_value(g).symbol;
            if (first) {
                out.symbol = s;
                out.witness_a = g;
                first = false;
            } else if (s != out.symbol) {
                out.constant = false;
                out.witness_b = g;
                return out;
            }
        }
    }
    out.constant = out.symbol != kUndefined && !(has_beta() && out.symbol == kBeta);
    return out;
}

}  // namespace toeplitz
