#pragma once

#include "toeplitz/system.hpp"

#include <string>
#include <vector>

namespace toeplitz {

enum class Variant { Normal41, Virtually43 };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct ConstructionParams {
    Lattice lattice;
    int m = 2;
    Variant variant = Variant::Virtually43;
};

struct JComparison {
    std::vector<GroupElement> by_subtraction;
    std::vector<GroupElement> by_recursion;
    bool equal = false;
};

struct TranslateConstancy {
    bool constant = false;
    Symbol symbol = kUndefined;
    GroupElement witness_a, witness_b;  // two positions with different symbols when not constant
};

struct StrataReport {
    int level = 0;                   // N
    std::size_t window_size = 0;     // |D_N R|
    std::size_t undefined = 0;
    std::size_t uncovered = 0;       // elements in no literal stratum
    std::size_t overlapping = 0;     // elements in more than one
    std::size_t level_mismatch = 0;  // literal stratum disagrees with the level map
    std::vector<std::size_t> stratum_sizes;  // index 0: beta stratum, k >= 1: level k
    bool ok() const { return undefined == 0 && uncovered == 0 && overlapping == 0 && level_mismatch == 0; }
};

// The array on G = Z^r x| F built over the chain: step 1 writes alpha_1 on Gamma_1 and the extra
// symbol on Gamma_1 (R \ {1}); step n+1 writes alpha_{n+1} on Gamma_{n+1} J(n) R.
class GroupToeplitz : public ToeplitzSystem {
public:
    // Throws SpecError on chains violating the growth constraints, m < 2, or Normal41 with |F| > 1.
    explicit GroupToeplitz(ConstructionParams params);

    const ConstructionParams& params() const { return params_; }
    const Lattice& lattice() const override { return params_.lattice; }
    // Defining step of g, or 0 when it lies beyond the configured chain.
    int level_of(const GroupElement& g) const;
    Cell cell(const GroupElement& g) const override;
    // Like cell() but raises DepthExhausted instead of returning an undefined cell.
    Cell eta_value(const GroupElement& g) const;
    // Level-n periodization: the value at the D_nR representative of Gamma_n g.
    Symbol eta_n_value(int n, const GroupElement& g) const;

    int steps() const override { return lattice().depth(); }
    int m() const override { return params_.m; }
    Symbol alpha(int i) const override { return static_cast<Symbol>((i - 1) % params_.m + 1); }
    std::vector<Symbol> alphabet() const override;
    bool has_beta() const { return params_.variant == Variant::Virtually43 && group().order() > 1; }
    Int fiber_bound() const override;
    Int piece_bound() const override;
    std::string kind() const override { return to_string(params_.variant); }

    // Largest N with the array fully defined on D_N R.
    int max_window_level() const { return steps() - 1; }

    // J(n) from D_n minus the earlier strata, and from the translate recursion.
    std::vector<GroupElement> compute_J(int n) const;
    std::vector<GroupElement> compute_J_recursion(int n) const;
    JComparison compare_J(int n) const;

    // Every element of D_N R classified by literal stratum membership (independent of level_of).
    StrataReport check_strata(int N) const;

    TranslateConstancy verify_translate_constancy(int i, const GroupElement& gamma) const;

private:
    ConstructionParams params_;
};

}  // namespace toeplitz
