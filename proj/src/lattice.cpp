#include "toeplitz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace toeplitz {

bool canonical_less(const GroupElement& a, const GroupElement& b) {
    if (a.f != b.f) return a.f < b.f;
    for (int j = 0; j < a.rank; ++j)
        if (a.v[j] != b.v[j]) return a.v[j] < b.v[j];
    return false;
}

Int max_norm(const GroupElement& g) {
    Int m = 0;
    for (int j = 0; j < g.rank; ++j) m = std::max(m, g.v[j] < 0 ? -g.v[j] : g.v[j]);
    return m;
}

bool search_less(const GroupElement& a, const GroupElement& b) {
    if (a.f != b.f) return a.f < b.f;
    Int na = max_norm(a), nb = max_norm(b);
    if (na != nb) return na < nb;
    return canonical_less(a, b);
}

std::string to_string(const GroupElement& g) {
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < g.rank; ++j) os << (j ? "," : "") << g.v[j];
    os << ';' << g.f << ')';
    return os.str();
}

std::size_t ElementHash::operator()(const GroupElement& g) const noexcept {
    std::size_t h = static_cast<std::size_t>(g.f) * 0x9e3779b97f4a7c15ULL;
    for (int j = 0; j < g.rank; ++j) {
        h ^= static_cast<std::size_t>(g.v[j]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Matrix Matrix::identity(int rank) {
    Matrix m;
    m.rank = rank;
    for (int j = 0; j < rank; ++j) m.a[j][j] = 1;
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    Matrix m;
    m.rank = rank;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            Int s = 0;
            for (int k = 0; k < rank; ++k) s += a[i][k] * o.a[k][j];
            m.a[i][j] = s;
        }
    return m;
}

Vec Matrix::apply(const Vec& v) const {
    Vec out{};
    for (int i = 0; i < rank; ++i) {
        Int s = 0;
        for (int k = 0; k < rank; ++k) s += a[i][k] * v[k];
        out[i] = s;
    }
    return out;
}

Int Matrix::determinant() const {
    // Bareiss elimination, exact for integer input.
    std::array<std::array<BigInt, kMaxRank>, kMaxRank> m;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) m[i][j] = a[i][j];
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < rank - 1; ++k) {
        if (m[k][k] == 0) {
            int p = k + 1;
            while (p < rank && m[p][k] == 0) ++p;
            if (p == rank) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < rank; ++i)
            for (int j = k + 1; j < rank; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[rank - 1][rank - 1].convert_to<Int>();
}

GroupSpec::GroupSpec(int rank) : GroupSpec(rank, {{0}}, {Matrix::identity(rank)}) {}

GroupSpec::GroupSpec(int rank, std::vector<std::vector<int>> table, std::vector<Matrix> action)
    : rank_(rank), table_(std::move(table)), action_(std::move(action)) {
    if (rank < 1 || rank > kMaxRank)
        throw SpecError("rank must be in 1.." + std::to_string(kMaxRank) + ", got " + std::to_string(rank));
    const int n = static_cast<int>(table_.size());
    if (n < 1) throw SpecError("finite part table is empty");
    if (static_cast<int>(action_.size()) != n) throw SpecError("need one action matrix per finite-part element");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw SpecError("finite part table is not square");
        for (int x : row)
            if (x < 0 || x >= n) throw SpecError("finite part table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        if (table_[0][a] != a || table_[a][0] != a) throw SpecError("index 0 is not the identity of the finite part");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw SpecError("finite part table is not associative");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == 0 && table_[b][a] == 0) inverse_[a] = b;
    for (int a = 0; a < n; ++a)
        if (inverse_[a] < 0) throw SpecError("finite part element " + std::to_string(a) + " has no inverse");
    for (auto& m : action_) {
        if (m.rank != rank) throw SpecError("action matrix has wrong size");
        Int det = m.determinant();
        if (det != 1 && det != -1) throw SpecError("action matrix is not invertible over Z");
    }
    if (!(action_[0] == Matrix::identity(rank))) throw SpecError("M_0 must be the identity");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (!(action_[a] * action_[b] == action_[table_[a][b]]))
                throw SpecError("f -> M_f is not a homomorphism");
}

GroupElement GroupSpec::identity() const {
    GroupElement g;
    g.rank = rank_;
    return g;
}

GroupElement GroupSpec::element(const std::vector<Int>& v, int f) const {
    if (static_cast<int>(v.size()) != rank_) throw SpecError("element has wrong rank");
    if (f < 0 || f >= order()) throw SpecError("finite part index out of range");
    GroupElement g;
    g.rank = rank_;
    g.f = f;
    for (int j = 0; j < rank_; ++j) g.v[j] = v[j];
    return g;
}

GroupElement GroupSpec::lattice_element(const Vec& v) const {
    GroupElement g;
    g.rank = rank_;
    g.v = v;
    return g;
}

void GroupSpec::check(const GroupElement& g) const {
    if (g.rank != rank_) throw SpecError("element rank " + std::to_string(g.rank) + " does not match group rank " + std::to_string(rank_));
    if (g.f < 0 || g.f >= order()) throw SpecError("finite part index out of range");
}

GroupElement GroupSpec::op(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    GroupElement out;
    out.rank = rank_;
    Vec mv = action_[a.f].apply(b.v);
    for (int j = 0; j < rank_; ++j) out.v[j] = a.v[j] + mv[j];
    out.f = table_[a.f][b.f];
    return out;
}

GroupElement GroupSpec::inv(const GroupElement& a) const {
    check(a);
    GroupElement out;
    out.rank = rank_;
    out.f = inverse_[a.f];
    Vec mv = action_[out.f].apply(a.v);
    for (int j = 0; j < rank_; ++j) out.v[j] = -mv[j];
    return out;
}

BoxIndexer::BoxIndexer(int rank, Vec lo, Vec extent, int finite_count)
    : rank_(rank), lo_(lo), extent_(extent), finite_count_(finite_count) {
    lattice_size_ = 1;
    for (int j = 0; j < rank; ++j) lattice_size_ *= static_cast<std::size_t>(extent[j]);
    size_ = lattice_size_ * static_cast<std::size_t>(finite_count);
}

bool BoxIndexer::contains(const GroupElement& g) const {
    if (g.f < 0 || g.f >= finite_count_) return false;
    for (int j = 0; j < rank_; ++j) {
        Int x = g.v[j] - lo_[j];
        if (x < 0 || x >= extent_[j]) return false;
    }
    return true;
}

std::size_t BoxIndexer::index(const GroupElement& g) const {
    std::size_t idx = static_cast<std::size_t>(g.f);
    for (int j = 0; j < rank_; ++j) idx = idx * static_cast<std::size_t>(extent_[j]) + static_cast<std::size_t>(g.v[j] - lo_[j]);
    return idx;
}

std::size_t BoxIndexer::find(const GroupElement& g) const { return contains(g) ? index(g) : size_; }

GroupElement BoxIndexer::element(std::size_t idx) const {
    GroupElement g;
    g.rank = rank_;
    for (int j = rank_ - 1; j >= 0; --j) {
        auto e = static_cast<std::size_t>(extent_[j]);
        g.v[j] = lo_[j] + static_cast<Int>(idx % e);
        idx /= e;
    }
    g.f = static_cast<int>(idx);
    return g;
}

BoxIndexer box_indexer(const GroupSpec& g, Int radius, bool with_r) {
    Vec lo{}, ext{};
    for (int j = 0; j < g.rank(); ++j) {
        lo[j] = -radius;
        ext[j] = 2 * radius + 1;
    }
    return BoxIndexer(g.rank(), lo, ext, with_r ? g.order() : 1);
}

std::vector<GroupElement> box_elements(const GroupSpec& g, Int radius, bool with_r) {
    BoxIndexer idx = box_indexer(g, radius, with_r);
    std::vector<GroupElement> out;
    out.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out.push_back(idx.element(k));
    return out;
}

std::vector<Vec> Lattice::default_offsets(int rank, const std::vector<Vec>& moduli) {
    std::vector<Vec> q1(moduli.size());
    for (std::size_t l = 0; l < moduli.size(); ++l) {
        const Int level = static_cast<Int>(l) + 1;
        for (int j = 0; j < rank; ++j) {
            const Int p = moduli[l][j];
            if (l == 0) {
                q1[l][j] = p / 2;
                continue;
            }
            const Int pp = moduli[l - 1][j];
            const Int base = q1[l - 1][j];
            if (pp <= 0 || p % pp != 0) {
                q1[l][j] = p / 2;  // rejected later by the structural checks
                continue;
            }
            // Candidates base + k*pp in [0, p); closest to p/2, smaller on ties, both offsets > level.
            Int best = -1, fallback = -1;
            Int best_dist = 0, fallback_dist = 0;
            for (Int c = floor_mod(base, pp); c < p; c += pp) {
                Int dist = 2 * c - p < 0 ? p - 2 * c : 2 * c - p;
                if (fallback < 0 || dist < fallback_dist) {
                    fallback = c;
                    fallback_dist = dist;
                }
                if (c > level && p - c > level && (best < 0 || dist < best_dist)) {
                    best = c;
                    best_dist = dist;
                }
            }
            q1[l][j] = best >= 0 ? best : fallback;
        }
    }
    return q1;
}

Lattice Lattice::with_default_offsets(GroupSpec group, std::vector<Vec> moduli) {
    auto q1 = default_offsets(group.rank(), moduli);
    return Lattice(std::move(group), std::move(moduli), std::move(q1));
}

Lattice::Lattice(GroupSpec group, std::vector<Vec> moduli, std::vector<Vec> q1)
    : group_(std::move(group)), moduli_(std::move(moduli)), q1_(std::move(q1)) {
    const int r = group_.rank();
    if (moduli_.empty()) throw SpecError("subgroup chain is empty");
    if (q1_.size() != moduli_.size()) throw SpecError("need one offset vector per chain level");
    for (std::size_t l = 0; l < moduli_.size(); ++l) {
        const std::string lv = std::to_string(l + 1);
        for (int j = 0; j < r; ++j) {
            const Int p = moduli_[l][j];
            if (p <= 0) throw SpecError("p^" + lv + " has a nonpositive entry");
            if (q1_[l][j] < 0 || q1_[l][j] >= p)
                throw SpecError("offset q1^" + lv + " must lie in [0, p^" + lv + ")");
            if (l > 0) {
                const Int pp = moduli_[l - 1][j];
                if (p % pp != 0 || p <= pp)
                    throw SpecError("p^" + std::to_string(l) + " must strictly divide p^" + lv);
                if (floor_mod(q1_[l][j] - q1_[l - 1][j], pp) != 0)
                    throw SpecError("offset q1^" + lv + " is not aligned with q1^" + std::to_string(l) + " mod p^" + std::to_string(l));
                if (q1_[l][j] < q1_[l - 1][j] || p - q1_[l][j] < pp - q1_[l - 1][j])
                    throw SpecError("D_" + std::to_string(l) + " is not contained in D_" + lv);
            }
        }
    }
}

std::vector<std::string> Lattice::growth_violations() const {
    std::vector<std::string> out;
    for (int i = 1; i <= depth(); ++i) {
        for (int j = 0; j < rank(); ++j) {
            const Int p = modulus(i)[j];
            const Int a = q1(i)[j], b = q2(i)[j];
            if (p <= 2 * i + 1)
                out.push_back("p^" + std::to_string(i) + "_" + std::to_string(j + 1) + " = " + std::to_string(p) +
                              " must exceed 2i+1 = " + std::to_string(2 * i + 1));
            if (a <= i || b <= i)
                out.push_back("offsets q^" + std::to_string(i) + "_" + std::to_string(j + 1) + " = (" + std::to_string(a) +
                              ", " + std::to_string(b) + ") must both exceed " + std::to_string(i));
        }
    }
    return out;
}

void Lattice::check_level(int i) const {
    if (i < 1 || i > depth())
        throw DepthExhausted("level " + std::to_string(i) + " outside configured chain 1.." + std::to_string(depth()));
}

const Vec& Lattice::modulus(int i) const {
    check_level(i);
    return moduli_[i - 1];
}

const Vec& Lattice::q1(int i) const {
    check_level(i);
    return q1_[i - 1];
}

Vec Lattice::q2(int i) const {
    check_level(i);
    Vec out{};
    for (int j = 0; j < rank(); ++j) out[j] = moduli_[i - 1][j] - q1_[i - 1][j];
    return out;
}

bool Lattice::member_gamma(const GroupElement& g, int i) const {
    group_.check(g);
    const Vec& p = modulus(i);
    if (g.f != 0) return false;
    for (int j = 0; j < rank(); ++j)
        if (floor_mod(g.v[j], p[j]) != 0) return false;
    return true;
}

RightDecomposition Lattice::decompose_right(const GroupElement& g, int i) const {
    group_.check(g);
    const Vec& p = modulus(i);
    const Vec& a = q1_[i - 1];
    RightDecomposition out;
    out.gamma.rank = rank();
    for (int j = 0; j < rank(); ++j) {
        out.d[j] = floor_mod(g.v[j] + a[j], p[j]) - a[j];
        out.gamma.v[j] = g.v[j] - out.d[j];
    }
    out.r = g.f;
    return out;
}

GroupElement Lattice::rep(const GroupElement& g, int i) const {
    auto dec = decompose_right(g, i);
    GroupElement out;
    out.rank = rank();
    out.v = dec.d;
    out.f = dec.r;
    return out;
}

bool Lattice::in_domain(const Vec& v, int i) const {
    if (i == 0) {
        for (int j = 0; j < rank(); ++j)
            if (v[j] != 0) return false;
        return true;
    }
    const Vec& p = modulus(i);
    const Vec& a = q1_[i - 1];
    for (int j = 0; j < rank(); ++j)
        if (v[j] < -a[j] || v[j] >= p[j] - a[j]) return false;
    return true;
}

Int Lattice::domain_size(int i) const {
    if (i == 0) return 1;
    Int n = 1;
    for (int j = 0; j < rank(); ++j) n *= modulus(i)[j];
    return n;
}

BoxIndexer Lattice::domain_indexer(int i, bool with_r) const {
    Vec lo{}, ext{};
    if (i == 0) {
        for (int j = 0; j < rank(); ++j) ext[j] = 1;
    } else {
        for (int j = 0; j < rank(); ++j) {
            lo[j] = -q1(i)[j];
            ext[j] = modulus(i)[j];
        }
    }
    return BoxIndexer(rank(), lo, ext, with_r ? group_.order() : 1);
}

std::vector<GroupElement> Lattice::enumerate_domain(int i, bool with_r) const {
    BoxIndexer idx = domain_indexer(i, with_r);
    std::vector<GroupElement> out;
    out.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out.push_back(idx.element(k));
    return out;
}

std::vector<GroupElement> Lattice::gamma_in_domain(int i, int n) const {
    const Vec& p = modulus(i);
    Vec lo{}, ext{};
    for (int j = 0; j < rank(); ++j) {
        // multiples k*p_j with -q1^n_j <= k p_j < q2^n_j
        Int kmin = -floor_div(q1(n)[j], p[j]);
        Int kmax = floor_div(q2(n)[j] - 1, p[j]);
        lo[j] = kmin;
        ext[j] = kmax - kmin + 1;
        if (ext[j] <= 0) return {};
    }
    BoxIndexer idx(rank(), lo, ext, 1);
    std::vector<GroupElement> out;
    out.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        GroupElement g = idx.element(k);
        for (int j = 0; j < rank(); ++j) g.v[j] *= p[j];
        out.push_back(g);
    }
    return out;
}

Rational Lattice::folner_ratio(int i, const GroupElement& g) const {
    group_.check(g);
    BoxIndexer idx = domain_indexer(i, true);
    Int leaked = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        GroupElement y = group_.op(idx.element(k), g);
        if (!in_domain(y.v, i)) ++leaked;
    }
    return Rational(leaked, static_cast<Int>(idx.size()));
}

Int Lattice::index(int i) const {
    Int n = 1;
    for (int j = 0; j < rank(); ++j) n *= modulus(i + 1)[j] / modulus(i)[j];
    return n;
}

long double index_condition_rhs_upper(int i) {
    // 1 - 2^{-x} = -expm1(-x ln 2) avoids cancellation for small x; pad upward by a few ulps.
    const long double x = std::pow(0.5L, static_cast<long double>(i + 1));
    long double denom = -std::expm1(-x * std::log(2.0L));
    long double rhs = 1.0L / denom;
    for (int k = 0; k < 4; ++k) rhs = std::nextafter(rhs, HUGE_VALL);
    return rhs;
}

IndexCondition Lattice::check_index_condition(int i) const {
    IndexCondition out;
    out.index = index(i);
    out.rhs_upper = index_condition_rhs_upper(i);
    out.holds = static_cast<long double>(out.index) > out.rhs_upper;
    return out;
}

bool Lattice::gamma_normal(int i) const {
    const Vec& p = modulus(i);
    for (int f = 0; f < group_.order(); ++f) {
        const Matrix& m = group_.action(f);
        // image of each generator p_j e_j must lie in the lattice prod p_k Z
        for (int j = 0; j < rank(); ++j)
            for (int k = 0; k < rank(); ++k)
                if (floor_mod(m.a[k][j] * p[j], p[k]) != 0) return false;
    }
    return true;
}

Int box_size(int rank, Int radius) {
    Int n = 1;
    for (int j = 0; j < rank; ++j) n *= 2 * radius + 1;
    return n;
}

bool box_count_bound(int rank, Int m, Int s, const Rational& eps) {
    BigInt big = 1, small = 1;
    for (int j = 0; j < rank; ++j) {
        big *= 2 * (m + s) + 1;
        small *= 2 * m + 1;
    }
    return Rational(big) < (1 + eps) * Rational(small);
}

Int box_count_threshold(int rank, Int s, const Rational& eps, Int limit) {
    for (Int m = 1; m <= limit; ++m)
        if (box_count_bound(rank, m, s, eps)) return m;
    return -1;
}

CornerCheck corner_lemma_check(const Lattice& lat, int n, Int s, const GroupElement& d) {
    if (!lat.group().finite_part_trivial()) throw SpecError("corner lemma check needs an abelian deck");
    if (!lat.in_domain(d.v, n)) throw SpecError("corner lemma check: d is not in D_n");
    const int level = n + static_cast<int>(s);
    CornerCheck out;
    out.gamma = lat.decompose_right(d, level).gamma;
    BoxIndexer box = box_indexer(lat.group(), s, false);
    for (std::size_t k = 0; k < box.size(); ++k) {
        GroupElement z = box.element(k);
        Vec w{};
        for (int j = 0; j < lat.rank(); ++j) w[j] = d.v[j] + z.v[j] - out.gamma.v[j];
        if (lat.in_domain(w, level)) ++out.count;
    }
    out.bound = Rational(box_size(lat.rank(), s), Int{1} << lat.rank());
    out.ok = Rational(out.count) >= out.bound;
    return out;
}

}  // namespace toeplitz
