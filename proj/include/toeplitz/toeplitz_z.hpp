#pragma once

#include "toeplitz/rational.hpp"
#include "toeplitz/system.hpp"

#include <vector>

namespace toeplitz {

struct WilliamsParams {
    int m = 2;
    std::vector<Int> periods;

    // Throws SpecError: p_1 >= 3, p_{i+1}/p_i >= 3 integral, m >= 2.
    void validate() const;
};

inline Symbol williams_alpha(int i, int m) { return static_cast<Symbol>(i % m); }

// A window [-N, N] of the array with per-position symbol and level.
struct LevelPatchZ {
    Int radius = 0;
    std::vector<Cell> cells;

    const Cell& at(Int n) const { return cells.at(static_cast<std::size_t>(n + radius)); }
    Cell& at(Int n) { return cells.at(static_cast<std::size_t>(n + radius)); }
    std::size_t undefined_count() const;
};

// Two-block construction over Z: step 1 fills n = 0, -1 mod p_1; step i+1 fills the blocks
// J(i,k) = [k p_i + 1, (k+1) p_i - 1) with k = 0, -1 mod p_{i+1}/p_i.
// Modeled on the chain Gamma_i = p_i Z with domains [0, p_i).
class WilliamsToeplitz : public ToeplitzSystem {
public:
    explicit WilliamsToeplitz(WilliamsParams params);

    const WilliamsParams& params() const { return params_; }
    const Lattice& lattice() const override { return lattice_; }
    Cell cell(const GroupElement& g) const override { return at(g.v[0]); }
    Cell at(Int n) const;
    int steps() const override { return static_cast<int>(params_.periods.size()); }
    int m() const override { return params_.m; }
    Symbol alpha(int i) const override { return williams_alpha(i, params_.m); }
    std::vector<Symbol> alphabet() const override;
    Int fiber_bound() const override { return params_.m; }
    Int piece_bound() const override { return 2; }
    std::string kind() const override { return "williams"; }

    // Half-width of the window on which every position is defined: [-p_{K-1}, p_{K-1}).
    Int defined_radius() const;

private:
    WilliamsParams params_;
    Lattice lattice_;
};

// Literal step-by-step fill of [-N, N].
LevelPatchZ williams_generate(const WilliamsParams& params, Int radius);

// Partial sums of p_i / p_{i+1}.
std::vector<Rational> convergence_diag(const WilliamsParams& params);

// Closed form for the undefined fraction after n+1 steps: (1 - 2/p_1) prod_{j<=n} (1 - 2 p_j / p_{j+1}).
Rational williams_undefined_closed_form(const WilliamsParams& params, int n);

// Upper bound on undefined positions in [-N, N] after K steps, as in the density property.
Rational williams_undefined_bound(const WilliamsParams& params, Int radius);

// Smallest 0 < t <= N/2 with the window fixed by shifting by t; 0 when none.
Int smallest_window_period(const LevelPatchZ& patch);

}  // namespace toeplitz
