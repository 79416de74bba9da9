#pragma once

#include "toeplitz/kernels.hpp"
#include "toeplitz/patch.hpp"
#include "toeplitz/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace toeplitz {

using ArrayFn = std::function<Symbol(const GroupElement&)>;

// ---- Per sets ---------------------------------------------------------------------------

// Membership flags over the patch window. A class H g ∩ window is in Per(x,H,alpha) when x reads
// alpha everywhere on it; only translates inside the window are tested, so the result contains
// the true Per set restricted to the window.
std::vector<char> per_set_empirical(const WindowPatch& x, const SubgroupRef& h, Symbol alpha);

// Per(eta, Gamma_i, alpha) on the window from the level map: level <= i and symbol alpha.
std::vector<char> per_set_exact(const ToeplitzSystem& sys, const BoxIndexer& window, int i, Symbol alpha);

// Exact Per(x, c^{-1} Gamma_i c, alpha) for x left-periodic under Gamma_N (N >= i, Gamma_N
// invariant under the action): c^{-1} gamma c runs over gamma in Gamma_i ∩ D_N.
std::vector<char> per_set_periodic(const ArrayFn& x, const Lattice& lat, int N, int i, const GroupElement& c,
                                   const BoxIndexer& window, Symbol alpha);

SubgroupRef gamma_subgroup(const Lattice& lat, int i);
// t^{-1} Gamma_i t; the coset H g is keyed by the Gamma_i coset of t g.
SubgroupRef conjugated_gamma(const Lattice& lat, int i, const GroupElement& t);

struct ConjugationCheck {
    bool holds = false;
    std::size_t core_size = 0;
    std::size_t lhs_count = 0;
    std::size_t rhs_count = 0;
    std::size_t mismatches = 0;
};

// Per(sigma^g x, Gamma_i, alpha) = g Per(x, g^{-1} Gamma_i g, alpha) on the core window, for x
// periodic under Gamma_N. Shift convention: (sigma^g x)(h) = x(g^{-1} h).
ConjugationCheck conjugation_identity_check(const ArrayFn& x, const Lattice& lat, int N, const GroupElement& g, int i,
                                            Symbol alpha, const BoxIndexer& core);

// ---- odometer ----------------------------------------------------------------------------

// Truncated point of the right-coset odometer: reps[i-1] = t_i in D_i R.
struct OdometerCoords {
    std::vector<GroupElement> reps;

    int depth() const { return static_cast<int>(reps.size()); }
    const GroupElement& t(int i) const { return reps.at(static_cast<std::size_t>(i - 1)); }
    bool operator==(const OdometerCoords&) const = default;
};

// Coding of x = sigma^{g^{-1}} eta, i.e. x(h) = eta(g h): t_i = representative of Gamma_i g.
OdometerCoords code_orbit_point(const Lattice& lat, const GroupElement& g, int depth);
bool coords_compatible(const Lattice& lat, const OdometerCoords& c);
// Every compatible coords at the given depth, in canonical order of t_depth.
std::vector<OdometerCoords> all_coords(const Lattice& lat, int depth);

// ---- period classes ----------------------------------------------------------------------

struct Classification {
    bool found = false;
    GroupElement v;
    Symbol symbol = kUndefined;
    std::size_t matches = 0;  // number of v in D_n R matching the level-n period pattern
    std::string failure;
};

// Finds v in D_n R with sigma^v x in the class E_n (its Gamma_n period pattern equals the
// array's, tested on translates by Gamma_n ∩ D_T) and reads the constant value on J(n) R.
// T defaults to n+1, which separates the classes of eta and its D_n R shifts; for x periodic
// under Gamma_N pass T = N to make the pattern test exact.
Classification classify_cell(const ToeplitzSystem& sys, const ArrayFn& x, int n, const std::vector<GroupElement>& j_set,
                             int translate_level = 0);

// ---- T_zeta pieces, Aper, fibers -----------------------------------------------------------

struct TZetaPiece {
    int base_level = 0;
    GroupElement zeta;                  // Gamma_{base} tile label of the piece's smallest member
    std::vector<GroupElement> chain;    // tile labels at base_level .. depth
    std::vector<std::size_t> members;   // window indices in the piece
};

struct TZetaResult {
    std::vector<TZetaPiece> pieces;
    bool disjoint = false;
    bool covers = false;
    bool nested = false;
    bool within_bound = false;
};

TZetaResult tzeta_decompose(const ToeplitzSystem& sys, const OdometerCoords& coords, int base_level,
                            const BoxIndexer& window);

// Aper at depth K: window positions outside Per(x, t_i^{-1} Gamma_i t_i) for every i <= K.
std::vector<char> aper_set(const ToeplitzSystem& sys, const OdometerCoords& coords, const BoxIndexer& window);

// Fully defined array patch used to realize fiber patches and independence witnesses.
struct LanguageOracle {
    WindowPatch patch;
    std::string source;

    bool covers(const GroupElement& g) const { return patch.contains(g); }
    Symbol at(const GroupElement& g) const { return patch.symbol(g); }
};

LanguageOracle make_oracle(const ToeplitzSystem& sys, const BoxIndexer& window);
// Largest window on which the system is fully defined: D_{steps-1} R for the group
// constructions, [-p_{K-1}, p_{K-1}) for the Z construction.
LanguageOracle default_oracle(const ToeplitzSystem& sys);

struct FiberResult {
    OdometerCoords coords;
    std::size_t pieces = 0;
    std::size_t aper_pieces = 0;  // pieces meeting the aperiodic part
    std::size_t aper_size = 0;
    std::size_t candidates = 0;
    std::size_t approximants = 0;
    std::vector<std::vector<Symbol>> patches;  // distinct realized patches, canonical order
    std::vector<std::vector<Symbol>> aper_symbols;  // per patch, the symbol on each aperiodic piece
    bool realized_are_candidates = false;
    bool pieces_ok = false;
    bool within_bound = false;
    bool ok() const { return realized_are_candidates && pieces_ok && within_bound; }
};

// Candidates (forced periodic part times one non-extra symbol per piece meeting Aper) filtered
// by occurrence at approximants h in Gamma_K t_K with h W inside the oracle window.
FiberResult fiber_enumerate(const ToeplitzSystem& sys, const OdometerCoords& coords, const BoxIndexer& window,
                            const LanguageOracle& oracle);

struct FiberScanSummary {
    int depth = 0;
    std::size_t coords_scanned = 0;
    std::size_t max_fiber = 0;
    std::size_t max_pieces = 0;
    std::vector<std::size_t> fiber_histogram;  // [count] -> number of coords
    std::vector<std::size_t> piece_histogram;
    std::size_t violations = 0;
    std::optional<OdometerCoords> first_nontrivial;
    bool operator==(const FiberScanSummary&) const = default;
};

namespace kernels::serial {
FiberScanSummary fiber_scan(const ToeplitzSystem& sys, int depth, const BoxIndexer& window, const LanguageOracle& oracle);
}
namespace kernels::parallel {
FiberScanSummary fiber_scan(const ToeplitzSystem& sys, int depth, const BoxIndexer& window, const LanguageOracle& oracle);
}

// ---- window-scale lemmas on the group construction ----------------------------------------

class GroupToeplitz;

struct PerLemmaReport {
    int n = 0, N = 0;
    bool empirical_matches_levels = false;  // Per(eta,Gamma_n) ∩ D_N R == {level <= n}
    std::size_t per_size = 0;
    std::size_t stated_union_size = 0;      // union from i = 1, as literally stated
    std::size_t stated_union_missing = 0;   // Per points missed by that union (the level-1 strata)
};
PerLemmaReport lemma_per_check(const GroupToeplitz& sys, int n, int N);

struct LemmaRReport {
    int n = 0;
    std::size_t literal_mismatches = 0;     // over all alpha in 1..m
    std::size_t mismatches_above_level1 = 0;
    bool holds_above_level1() const { return mismatches_above_level1 == 0; }
};
LemmaRReport lemma_r_check(const GroupToeplitz& sys, int n);

// For every g in D_2 R outside Gamma_1, a witness that Per(eta,Gamma_1,alpha) is not contained in
// Per(sigma^g eta, Gamma_1, alpha). Returns the number of g without a witness.
std::size_t essentiality_failures(const GroupToeplitz& sys);

// Lemma Per_m: Per(eta_M, Gamma_n, alpha) == Per(eta, Gamma_n, alpha) on D_M R for all alpha.
bool approximant_in_class(const ToeplitzSystem& sys, const PeriodicApproximant& eta_m, int n);

}  // namespace toeplitz
