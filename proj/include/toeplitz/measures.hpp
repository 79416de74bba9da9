#pragma once

#include "toeplitz/kernels.hpp"
#include "toeplitz/rational.hpp"
#include "toeplitz/toeplitz_g.hpp"

#include <vector>

namespace toeplitz {

// Indexed by symbol; slot 0 is the extra symbol in the group constructions and symbol 0 in the
// Z construction.
using MeasureVector = std::vector<Rational>;
using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
MeasureVector mat_apply(const RatMatrix& a, const MeasureVector& v);
Rational determinant(RatMatrix a);

// a_{n,alpha} = |D_n R ∩ Per(eta, Gamma_n, alpha)|, i.e. cells of level <= n with symbol alpha.
struct CountTable {
    int n = 0;
    std::vector<Int> per;  // by symbol slot
    Int fresh = 0;         // |D_n R| minus the periodic part; |J(n) R| for the group arrays
    Int domain = 0;        // |D_n R|
    Rational d;            // sum of per / domain
    std::vector<Rational> d_alpha;
};
CountTable count_table(const ToeplitzSystem& sys, int n);

// Symbol frequencies of eta over D_n R (the measure mu_n), counted.
MeasureVector mu_n_freq(const ToeplitzSystem& sys, int n);
// (1/|D_1|)(1 - 1/|R|)
Rational beta_mass_closed_form(const GroupToeplitz& sys);

// 1 - d_{n+1} in closed form: (1 - 1/|D_1|) prod (1 - |D_j|/|D_{j+1}|) for the group arrays and
// (1 - 2/p_1) prod (1 - 2 p_j/p_{j+1}) for the two-block Z array.
Rational undefined_closed_form(const ToeplitzSystem& sys, int n);

struct DProductCheck {
    int n = 0;
    Rational counted;      // d_{n+1}
    Rational closed_form;  // 1 - undefined_closed_form(n)
    bool equal = false;
    bool below_half = false;  // d_{n+1} < 1 - d_{n+1}
};
DProductCheck d_product_check(const ToeplitzSystem& sys, int n);

// t_i = (t_1, ..., 1 - d + t_i, ..., t_m, t_beta) with depth-N frequencies; returned in the
// symbol-slot layout (slot 0 = t_beta).
std::vector<MeasureVector> simplex_vertices(const GroupToeplitz& sys, int N);

// m x m, indices 0..m-1 for symbols 1..m.
RatMatrix matrix_An(const GroupToeplitz& sys, int n);
// (m+1) x m; rows 0..m-1 for symbols 1..m, row m for the extra symbol.
RatMatrix matrix_A0(const GroupToeplitz& sys);

// mu^{(n)}_i: the mu_N mass of the classes E_{n,i}, i = 1..m (index i-1), counted over the
// cells gamma J(n) R, gamma in Gamma_n ∩ D_N.
struct CellMeasure {
    MeasureVector mu;
    Int nonconstant = 0;
};
CellMeasure cell_measure(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n);

struct AnCheck {
    int n = 0, N = 0;
    MeasureVector lhs;  // A_n mu^{(n+1)}
    MeasureVector rhs;  // mu^{(n)}
    Rational det;
    bool holds = false;
};
AnCheck verify_An_recursion(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n);

struct A0Check {
    int N = 0;
    MeasureVector p_mu;  // (mu[1], ..., mu[m], mu[beta]) counted
    MeasureVector a0_mu;
    std::size_t rank = 0;
    bool holds = false;
};
A0Check matrix_A0_check(const GroupToeplitz& sys, const PeriodicApproximant& eta_N);

// mu^{(1)} rebuilt from mu^{(n)} through A_1 ... A_{n-1}.
struct ChainCheck {
    int n = 0;
    MeasureVector rebuilt, counted;
    bool holds = false;
};
ChainCheck chain_reconstruction(const GroupToeplitz& sys, const PeriodicApproximant& eta_N, int n);

struct NuEstimate {
    int i = 0;
    std::vector<int> levels;               // i + s m - 1
    std::vector<MeasureVector> vectors;    // mu at each level
    std::vector<Rational> step_distance;   // L1 distance between successive vectors
    std::vector<Rational> margin;          // mu[i] - max_{j != i} mu[j]
    std::vector<Rational> margin_bound;    // (1 - d_n) - d_n
    bool dominant = false;                 // margin >= bound at every level
};
NuEstimate estimate_nu(const GroupToeplitz& sys, int i, const std::vector<int>& s_list);

struct ZMass {
    int i = 0, k = 0, s = 0;
    int L = 0, M = 0;
    Rational mass;      // classified over every u in D_M R
    Rational shortcut;  // |D_L R| mu_M^{(L)}_i
    Rational bound;     // 1 / |D_L R|
    bool agrees = false;
    bool above_bound = false;
};
ZMass z_mass(const GroupToeplitz& sys, int i, int k, int s);

struct ComplexityPoint {
    Int radius = 0;
    std::size_t width = 0;
    std::size_t count = 0;
    double ratio = 0;  // log(count) / width
};
std::vector<ComplexityPoint> complexity_profile(const std::vector<Symbol>& seq, const std::vector<Int>& radii);
bool strictly_decreasing(const std::vector<ComplexityPoint>& profile);

// Frequencies of eta_N over D_N R against those over D_N R g.
struct ShiftInvariance {
    GroupElement g;
    Int max_count_diff = 0;
    Rational normalized_diff;  // sum |diff| / |D_N R|
    Rational bound;            // 2 * folner_ratio(N, g)
    bool within = false;
};
ShiftInvariance shift_invariance(const ToeplitzSystem& sys, const PeriodicApproximant& eta_N, const GroupElement& g);

}  // namespace toeplitz
