#include "toeplitz/measures.hpp"

#include "toeplitz/toeplitz_z.hpp"

#include <algorithm>
#include <cmath>

namespace toeplitz {

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    RatMatrix out(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            if (a[i][t] != 0)
                for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    return out;
}

MeasureVector mat_apply(const RatMatrix& a, const MeasureVector& v) {
    MeasureVector out(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

Rational determinant(RatMatrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

namespace {

std::size_t matrix_rank(RatMatrix a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

int symbol_slots(const ToeplitzSystem& sys) { return sys.m() + 1; }

MeasureVector normalize(const std::vector<std::int64_t>& counts, Int total) {
    MeasureVector out;
    for (auto c : counts) out.emplace_back(Rational(c, total));
    return out;
}

}  // namespace

CountTable count_table(const ToeplitzSystem& sys, int n) {
    const BoxIndexer dom = sys.lattice().domain_indexer(n, true);
    const WindowPatch patch = kernels::parallel::materialize(sys, dom);
    const int slots = symbol_slots(sys);
    const Census c = kernels::parallel::census(patch, n, slots);
    CountTable t;
    t.n = n;
    t.domain = static_cast<Int>(dom.size());
    t.per.assign(static_cast<std::size_t>(slots), 0);
    Int periodic = 0;
    for (int s = 0; s < slots; ++s) {
        for (int l = 1; l <= n; ++l) t.per[static_cast<std::size_t>(s)] += c.at(l, s);
        periodic += t.per[static_cast<std::size_t>(s)];
    }
    t.fresh = t.domain - periodic;
    t.d = Rational(periodic, t.domain);
    for (Int a : t.per) t.d_alpha.emplace_back(Rational(a, t.domain));
    return t;
}

MeasureVector mu_n_freq(const ToeplitzSystem& sys, int n) {
    const BoxIndexer dom = sys.lattice().domain_indexer(n, true);
    const WindowPatch patch = kernels::parallel::materialize(sys, dom);
    const Census c = kernels::parallel::census(patch, sys.steps(), symbol_slots(sys));
    if (c.undefined != 0) throw DepthExhausted("eta is not fully defined on D_" + std::to_string(n) + "R");
    std::vector<std::int64_t> counts;
    for (int s = 0; s < symbol_slots(sys); ++s) counts.push_back(c.symbol_total(s));
    return normalize(counts, static_cast<Int>(dom.size()));
}

Rational beta_mass_closed_form(const GroupToeplitz& sys) {
    const Lattice& lat = sys.lattice();
    if (!sys.has_beta()) return 0;
    return Rational(1, lat.domain_size(1)) * (1 - Rational(1, lat.group().order()));
}

Rational undefined_closed_form(const ToeplitzSystem& sys, int n) {
    if (const auto* w = dynamic_cast<const WilliamsToeplitz*>(&sys)) return williams_undefined_closed_form(w->params(), n);
    const Lattice& lat = sys.lattice();
    if (n < 0 || n + 1 > lat.depth()) throw DepthExhausted("closed form needs D_" + std::to_string(n + 1));
    Rational q = 1 - Rational(1, lat.domain_size(1));
    for (int j = 1; j <= n; ++j) q *= 1 - Rational(lat.domain_size(j), lat.domain_size(j + 1));
    return q;
}

DProductCheck d_product_check(const ToeplitzSystem& sys, int n) {
    DProductCheck out;
    out.n = n;
    out.counted = count_table(sys, n + 1).d;
    out.closed_form = 1 - undefined_closed_form(sys, n);
    out.equal = out.counted == out.closed_form;
    out.below_half = out.counted < 1 - out.counted;
    return out;
}

std::vector<MeasureVector> simplex_vertices(const GroupToeplitz& sys, int N) {
    const CountTable t = count_table(sys, N);
    std::vector<MeasureVector> out;
    for (int i = 1; i <= sys.m(); ++i) {
        MeasureVector v = t.d_alpha;
        v[static_cast<std::size_t>(i)] += 1 - t.d;
        out.push_back(std::move(v));
    }
    return out;
}

RatMatrix matrix_An(const GroupToeplitz& sys, int n) {
    const Lattice& lat = sys.lattice();
    const int m = sys.m();
    const Rational q(lat.domain_size(n + 1), lat.domain_size(n));
    const int a = sys.alpha(n + 1) - 1;
    RatMatrix A(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) A[i][j] = i == a ? q : q - 1;
            else if (i == a) A[i][j] = 1;
        }
    return A;
}

RatMatrix matrix_A0(const GroupToeplitz& sys) {
    const int m = sys.m();
    const Int j1r = static_cast<Int>(sys.compute_J(1).size()) * sys.group().order();
    RatMatrix A(static_cast<std::size_t>(m + 1), std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == 0 && j == 0) A[i][j] = 1 + j1r;
            else if (i == j) A[i][j] = j1r;
            else if (i == 0) A[i][j] = 1;
        }
    for (int j = 0; j < m; ++j) A[static_cast<std::size_t>(m)][j] = sys.group().order() - 1;
    return A;
}

CellMeasure cell_measure(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n) {
    if (n >= eta_N.level) throw SpecError("cell measure needs n below the approximant level");
    const CellTally t = kernels::parallel::cell_tally(eta_N, n, sys.compute_J(n), symbol_slots(sys));
    const Int total = static_cast<Int>(eta_N.base.size());
    CellMeasure out;
    for (int i = 1; i <= sys.m(); ++i) out.mu.emplace_back(Rational(t.by_symbol[static_cast<std::size_t>(i)], total));
    // a cell reading the extra symbol is not a class E_{n,i}
    out.nonconstant = t.nonconstant + t.by_symbol[0];
    return out;
}

AnCheck verify_An_recursion(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n) {
    if (n + 1 >= eta_N.level) throw SpecError("A_n check needs N > n + 1");
    AnCheck out;
    out.n = n;
    out.N = eta_N.level;
    const RatMatrix A = matrix_An(sys, n);
    const CellMeasure upper = cell_measure(sys, eta_N, n + 1);
    const CellMeasure lower = cell_measure(sys, eta_N, n);
    out.lhs = mat_apply(A, upper.mu);
    out.rhs = lower.mu;
    out.det = determinant(A);
    out.holds = out.lhs == out.rhs && out.det != 0 && upper.nonconstant == 0 && lower.nonconstant == 0;
    return out;
}

A0Check matrix_A0_check(const GroupToeplitz& sys, const PeriodicApproximant& eta_N) {
    if (eta_N.level < 2) throw SpecError("A_0 check needs N >= 2");
    A0Check out;
    out.N = eta_N.level;
    const int m = sys.m();
    const Census c = kernels::parallel::census(eta_N.base, sys.steps(), symbol_slots(sys));
    const Int total = static_cast<Int>(eta_N.base.size());
    for (int s = 1; s <= m; ++s) out.p_mu.emplace_back(Rational(c.symbol_total(s), total));
    out.p_mu.emplace_back(Rational(c.symbol_total(kBeta), total));
    const RatMatrix A0 = matrix_A0(sys);
    const CellMeasure mu1 = cell_measure(sys, eta_N, 1);
    out.a0_mu = mat_apply(A0, mu1.mu);
    out.rank = matrix_rank(A0);
    out.holds = out.p_mu == out.a0_mu && out.rank == static_cast<std::size_t>(m) && mu1.nonconstant == 0;
    return out;
}

ChainCheck chain_reconstruction(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n) {
    ChainCheck out;
    out.n = n;
    out.rebuilt = cell_measure(sys, eta_N, n).mu;
    for (int j = n - 1; j >= 1; --j) out.rebuilt = mat_apply(matrix_An(sys, j), out.rebuilt);
    out.counted = cell_measure(sys, eta_N, 1).mu;
    out.holds = out.rebuilt == out.counted;
    return out;
}

NuEstimate estimate_nu(const GroupToeplitz& sys, int i, const std::vector<int>& s_list) {
    if (i < 1 || i > sys.m()) throw SpecError("symbol index out of range");
    NuEstimate out;
    out.i = i;
    out.dominant = true;
    for (int s : s_list) {
        const int level = i + s * sys.m() - 1;
        MeasureVector mu = mu_n_freq(sys, level);
        const Rational d = count_table(sys, level).d;
        Rational other = 0;
        for (int j = 1; j <= sys.m(); ++j)
            if (j != i) other = std::max(other, mu[static_cast<std::size_t>(j)]);
        const Rational margin = mu[static_cast<std::size_t>(i)] - other;
        const Rational bound = (1 - d) - d;
        if (margin < bound) out.dominant = false;
        if (!out.vectors.empty()) {
            Rational dist = 0;
            for (std::size_t k = 0; k < mu.size(); ++k) dist += abs(mu[k] - out.vectors.back()[k]);
            out.step_distance.push_back(dist);
        }
        out.levels.push_back(level);
        out.vectors.push_back(std::move(mu));
        out.margin.push_back(margin);
        out.margin_bound.push_back(bound);
    }
    return out;
}

ZMass z_mass(const GroupToeplitz& sys, int i, int k, int s) {
    if (s <= k) throw SpecError("z_mass needs s > k");
    ZMass out;
    out.i = i;
    out.k = k;
    out.s = s;
    out.L = i + k * sys.m() - 1;
    out.M = i + s * sys.m() - 1;
    const PeriodicApproximant eta_M = make_approximant(sys, out.M);
    const auto j_set = sys.compute_J(out.L);
    const int slots = symbol_slots(sys);
    const Int total = static_cast<Int>(eta_M.base.size());
    const Int dlr = sys.lattice().domain_r_size(out.L);
    const CellTally z = kernels::parallel::z_mass_tally(eta_M, out.L, j_set, slots);
    const CellTally cells = kernels::parallel::cell_tally(eta_M, out.L, j_set, slots);
    out.mass = Rational(z.by_symbol[static_cast<std::size_t>(i)], total);
    out.shortcut = Rational(dlr * cells.by_symbol[static_cast<std::size_t>(i)], total);
    out.bound = Rational(1, dlr);
    out.agrees = out.mass == out.shortcut;
    out.above_bound = out.mass >= out.bound;
    return out;
}

std::vector<ComplexityPoint> complexity_profile(const std::vector<Symbol>& seq, const std::vector<Int>& radii) {
    std::vector<ComplexityPoint> out;
    for (Int r : radii) {
        ComplexityPoint p;
        p.radius = r;
        p.width = static_cast<std::size_t>(2 * r + 1);
        if (seq.size() < p.width + 99) throw SpecError("sequence too short for 100 placements at radius " + std::to_string(r));
        p.count = kernels::parallel::distinct_words(seq, p.width);
        p.ratio = std::log(static_cast<double>(p.count)) / static_cast<double>(p.width);
        out.push_back(p);
    }
    return out;
}

bool strictly_decreasing(const std::vector<ComplexityPoint>& profile) {
    // log(c1)/w1 > log(c2)/w2  <=>  c1^w2 > c2^w1, compared exactly
    for (std::size_t k = 1; k < profile.size(); ++k) {
        const auto& a = profile[k - 1];
        const auto& b = profile[k];
        const BigInt lhs = boost::multiprecision::pow(BigInt(a.count), static_cast<unsigned>(b.width));
        const BigInt rhs = boost::multiprecision::pow(BigInt(b.count), static_cast<unsigned>(a.width));
        if (!(lhs > rhs)) return false;
    }
    return true;
}

ShiftInvariance shift_invariance(const ToeplitzSystem& sys, const PeriodicApproximant& eta_N, const GroupElement& g) {
    const Lattice& lat = sys.lattice();
    const GroupSpec& grp = lat.group();
    const int slots = symbol_slots(sys);
    std::vector<Int> base(static_cast<std::size_t>(slots), 0), moved(static_cast<std::size_t>(slots), 0);
    const BoxIndexer& idx = eta_N.base.indexer();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        ++base[static_cast<std::size_t>(eta_N.base[k].symbol)];
        ++moved[static_cast<std::size_t>(eta_N.at(grp.op(idx.element(k), g)))];
    }
    ShiftInvariance out;
    out.g = g;
    Int sum = 0;
    for (int s = 0; s < slots; ++s) {
        const Int d = std::abs(base[static_cast<std::size_t>(s)] - moved[static_cast<std::size_t>(s)]);
        out.max_count_diff = std::max(out.max_count_diff, d);
        sum += d;
    }
    out.normalized_diff = Rational(sum, static_cast<Int>(idx.size()));
    out.bound = 2 * lat.folner_ratio(eta_N.level, g);
    out.within = out.normalized_diff <= out.bound;
    return out;
}

}  // namespace toeplitz
