#pragma once

#include "toeplitz/errors.hpp"
#include "toeplitz/rational.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace toeplitz {

using Int = std::int64_t;

inline constexpr int kMaxRank = 4;
using Vec = std::array<Int, kMaxRank>;

inline Int floor_mod(Int a, Int p) {
    Int r = a % p;
    return r < 0 ? r + p : r;
}

inline Int floor_div(Int a, Int p) {
    Int q = a / p;
    return (a % p != 0 && ((a < 0) != (p < 0))) ? q - 1 : q;
}

// (v, f) in Z^r x| F. Coordinates past `rank` stay zero.
struct GroupElement {
    Vec v{};
    int f = 0;
    int rank = 1;

    bool operator==(const GroupElement&) const = default;
};

// Lexicographic on (f, v_1, ..., v_r).
bool canonical_less(const GroupElement& a, const GroupElement& b);
// (f, max-norm, lexicographic): the order used to enumerate search candidates.
bool search_less(const GroupElement& a, const GroupElement& b);
Int max_norm(const GroupElement& g);
std::string to_string(const GroupElement& g);

struct ElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept;
};

struct Matrix {
    std::array<Vec, kMaxRank> a{};
    int rank = 1;

    static Matrix identity(int rank);
    Matrix operator*(const Matrix& o) const;
    Vec apply(const Vec& v) const;
    Int determinant() const;
    bool operator==(const Matrix&) const = default;
};

class GroupSpec {
public:
    GroupSpec() : GroupSpec(1) {}
    // Z^rank with trivial finite part.
    explicit GroupSpec(int rank);
    // table[a][b] = index of a*b; action[f] = M_f. Throws SpecError unless the data is a group
    // and f -> M_f a homomorphism into GL_r(Z).
    GroupSpec(int rank, std::vector<std::vector<int>> table, std::vector<Matrix> action);

    int rank() const { return rank_; }
    int order() const { return static_cast<int>(table_.size()); }
    bool finite_part_trivial() const { return order() == 1; }
    int mul_f(int a, int b) const { return table_[a][b]; }
    int inv_f(int a) const { return inverse_[a]; }
    const Matrix& action(int f) const { return action_[f]; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    GroupElement identity() const;
    GroupElement element(const std::vector<Int>& v, int f = 0) const;
    GroupElement lattice_element(const Vec& v) const;
    GroupElement op(const GroupElement& a, const GroupElement& b) const;
    GroupElement inv(const GroupElement& a) const;
    void check(const GroupElement& g) const;

private:
    int rank_ = 1;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    std::vector<Matrix> action_;
};

// Dense indexing of a box  lo_j <= v_j < lo_j + extent_j  times the finite part, in canonical order.
class BoxIndexer {
public:
    BoxIndexer() = default;
    BoxIndexer(int rank, Vec lo, Vec extent, int finite_count);

    std::size_t size() const { return size_; }
    std::size_t lattice_size() const { return lattice_size_; }
    bool contains(const GroupElement& g) const;
    // Caller guarantees contains(g).
    std::size_t index(const GroupElement& g) const;
    // Returns size() when g is outside.
    std::size_t find(const GroupElement& g) const;
    GroupElement element(std::size_t idx) const;
    const Vec& lo() const { return lo_; }
    const Vec& extent() const { return extent_; }
    int rank() const { return rank_; }
    int finite_count() const { return finite_count_; }

private:
    int rank_ = 1;
    Vec lo_{};
    Vec extent_{};
    int finite_count_ = 1;
    std::size_t lattice_size_ = 0;
    std::size_t size_ = 0;
};

BoxIndexer box_indexer(const GroupSpec& g, Int radius, bool with_r);
std::vector<GroupElement> box_elements(const GroupSpec& g, Int radius, bool with_r);

struct RightDecomposition {
    GroupElement gamma;  // in Gamma_i
    Vec d{};             // in D_i
    int r = 0;           // finite-part index of the representative (0, r)
};

struct IndexCondition {
    Int index = 0;
    long double rhs_upper = 0;
    bool holds = false;
};

// Group, subgroup chain Gamma_i = prod p^i_j Z and box domains D_i = prod [-q1, q2).
class Lattice {
public:
    Lattice() = default;
    // moduli[i-1] = p^i, q1[i-1] = q1^i. Structural checks only (divisibility, strict growth,
    // offsets in range, alignment, nesting); see growth_violations() for the size constraints.
    Lattice(GroupSpec group, std::vector<Vec> moduli, std::vector<Vec> q1);
    static Lattice with_default_offsets(GroupSpec group, std::vector<Vec> moduli);
    static std::vector<Vec> default_offsets(int rank, const std::vector<Vec>& moduli);

    // Human-readable violations of p^i_j > 2i+1 and q^i_{t,j} > i; empty when the chain is valid.
    std::vector<std::string> growth_violations() const;

    const GroupSpec& group() const { return group_; }
    int rank() const { return group_.rank(); }
    int depth() const { return static_cast<int>(moduli_.size()); }
    const Vec& modulus(int i) const;
    const Vec& q1(int i) const;
    Vec q2(int i) const;

    bool member_gamma(const GroupElement& g, int i) const;
    RightDecomposition decompose_right(const GroupElement& g, int i) const;
    // Representative (d, r) in D_iR of the right coset Gamma_i g.
    GroupElement rep(const GroupElement& g, int i) const;
    // v in D_i; level 0 means D_0 = {0}.
    bool in_domain(const Vec& v, int i) const;
    bool in_domain_r(const GroupElement& g, int i) const { return in_domain(g.v, i); }

    Int domain_size(int i) const;
    Int domain_r_size(int i) const { return domain_size(i) * group_.order(); }
    BoxIndexer domain_indexer(int i, bool with_r) const;
    std::vector<GroupElement> enumerate_domain(int i, bool with_r) const;
    // Elements of Gamma_i inside D_n (n >= i), canonical order.
    std::vector<GroupElement> gamma_in_domain(int i, int n) const;

    Rational folner_ratio(int i, const GroupElement& g) const;
    Int index(int i) const;  // [Gamma_i : Gamma_{i+1}]
    IndexCondition check_index_condition(int i) const;

    // Gamma_i is normal when every M_f maps p^i Z^r onto itself.
    bool gamma_normal(int i) const;

private:
    void check_level(int i) const;

    GroupSpec group_;
    std::vector<Vec> moduli_;
    std::vector<Vec> q1_;
};

// Certified upper bound of 1 / (1 - 2^{-(1/2)^{i+1}}).
long double index_condition_rhs_upper(int i);

// (2(m+s)+1)^r < (1+eps)(2m+1)^r, exactly.
bool box_count_bound(int rank, Int m, Int s, const Rational& eps);
// Smallest m >= 1 with box_count_bound true (scan up to limit; returns -1 if not found).
Int box_count_threshold(int rank, Int s, const Rational& eps, Int limit = 1000000);
Int box_size(int rank, Int radius);

struct CornerCheck {
    bool ok = false;
    Int count = 0;
    Rational bound;
    GroupElement gamma;
};

// |B(d,s) ∩ (gamma + D_{n+s})| >= b(s)/2^r for the gamma in Gamma_{n+s} with d in gamma + D_{n+s}.
CornerCheck corner_lemma_check(const Lattice& lat, int n, Int s, const GroupElement& d);

}  // namespace toeplitz
