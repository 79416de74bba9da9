#pragma once

#include "toeplitz/patch.hpp"
#include "toeplitz/system.hpp"

#include <cstdint>
#include <vector>

namespace toeplitz {

// Gamma_N-periodization of the array: its restriction to D_N R repeated along Gamma_N.
struct PeriodicApproximant {
    const Lattice* lattice = nullptr;
    int level = 0;
    WindowPatch base;  // on D_N R

    Symbol at(const GroupElement& g) const { return base.symbol(lattice->rep(g, level)); }
};

// Per-(level, symbol) tallies over a window. Symbols are indexed from 0; undefined cells are
// counted separately.
struct Census {
    int max_level = 0;
    int symbol_slots = 0;
    std::vector<std::int64_t> counts;  // [level * symbol_slots + symbol]
    std::int64_t undefined = 0;

    std::int64_t at(int level, int symbol) const { return counts[static_cast<std::size_t>(level * symbol_slots + symbol)]; }
    std::int64_t symbol_total(int symbol) const;
    std::int64_t level_total(int level) const;
    bool operator==(const Census&) const = default;
};

// Symbol read on each classified cell; `nonconstant` counts cells whose read-off block was not
// constant.
struct CellTally {
    std::vector<std::int64_t> by_symbol;
    std::int64_t nonconstant = 0;
    bool operator==(const CellTally&) const = default;
};

// Two implementations of every scan: `serial` is the reference used by tests, `parallel`
// splits the outer loop across OpenMP threads and merges per-thread tallies.
namespace kernels {

namespace serial {
WindowPatch materialize(const ToeplitzSystem& sys, const BoxIndexer& window);
Census census(const WindowPatch& patch, int max_level, int symbol_slots);
// cells gamma J(n) R for gamma in Gamma_n ∩ D_N, read off the approximant
CellTally cell_tally(const PeriodicApproximant& eta_n, int n, const std::vector<GroupElement>& j_set, int symbol_slots);
// every u in D_M R: the block gamma J(L) R of u = gamma d r
CellTally z_mass_tally(const PeriodicApproximant& eta_m, int L, const std::vector<GroupElement>& j_set, int symbol_slots);
std::size_t distinct_words(const std::vector<Symbol>& seq, std::size_t width);
}  // namespace serial

namespace parallel {
WindowPatch materialize(const ToeplitzSystem& sys, const BoxIndexer& window);
Census census(const WindowPatch& patch, int max_level, int symbol_slots);
// cells gamma J(n) R for gamma in Gamma_n ∩ D_N, read off the approximant
CellTally cell_tally(const PeriodicApproximant& eta_n, int n, const std::vector<GroupElement>& j_set, int symbol_slots);
// every u in D_M R: the block gamma J(L) R of u = gamma d r
CellTally z_mass_tally(const PeriodicApproximant& eta_m, int L, const std::vector<GroupElement>& j_set, int symbol_slots);
std::size_t distinct_words(const std::vector<Symbol>& seq, std::size_t width);
}  // namespace parallel

}  // namespace kernels

PeriodicApproximant make_approximant(const ToeplitzSystem& sys, int N);

// Sets the worker count used by kernels::parallel (0 keeps the OpenMP default).
void set_threads(int n);
int threads();

}  // namespace toeplitz
