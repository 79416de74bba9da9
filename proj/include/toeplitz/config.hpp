#pragma once

#include "toeplitz/homomorphism.hpp"
#include "toeplitz/independence.hpp"
#include "toeplitz/toeplitz_g.hpp"
#include "toeplitz/toeplitz_z.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace toeplitz {

using json = nlohmann::json;

// Symbol cylinders searched at one |J|.
struct SymbolSearch {
    std::vector<Symbol> symbols;
    std::size_t L = 2;
    bool required = true;  // exhaustion of a required search is exit 3
};

// Fiber points of one coords tested as an IN-tuple candidate.
struct TupleSearch {
    int depth = 2;
    Int window_radius = 2;
    std::vector<Int> radii;
    std::size_t L = 2;
    int oracle_level = 0;   // 0: deepest fully defined window
    int gamma_level = 2;    // candidates in Gamma_gamma_level
    Int candidate_radius = 0;
};

struct IndependenceConfig {
    Int candidate_radius = 0;
    std::vector<SymbolSearch> searches;
    std::vector<SymbolSearch> negatives;  // expected "none"
    std::optional<TupleSearch> tuple;
};

struct HomConfig {
    HomSpec spec;
    bool expect_valid = true;
    std::filesystem::path source_deck;  // a Z deck whose array is pulled back
    Int window_radius = 10;
    int samples = 100;
    std::uint64_t seed = 1;
    std::size_t transport_L = 2;
    Int candidate_radius = 300;
};

struct ChecksConfig {
    int j_levels = 0;        // compare both J(n) computations for n <= j_levels
    int strata_level = 0;
    int d_levels = 3;        // d_{n+1} product formula for n <= d_levels
    int matrix_level = 0;    // N for the A_n / A_0 identities; 0 skips
    std::vector<std::array<int, 3>> z_mass;  // (i, k, s)
    int conjugation_samples = 100;
    int conjugation_level = 3;
    std::uint64_t seed = 1;
    int fiber_depth = 2;
    Int fiber_radius = 2;
    Int generate_radius = 200;  // Z decks: [-N, N]; group decks use generate_level
    int generate_level = 3;
    std::vector<Int> complexity_radii;
    std::uint64_t control_seed = 1234;
    std::size_t control_length = 1u << 20;
};

struct ExperimentConfig {
    std::string deck;
    std::filesystem::path path;  // file the config was read from, if any
    std::string construction;    // "williams" or "group"
    std::optional<WilliamsParams> williams;
    std::optional<ConstructionParams> group;
    ChecksConfig checks;
    IndependenceConfig independence;
    std::optional<HomConfig> hom;
    SearchBudget budget;
    std::string out_dir;

    int m() const;
    bool is_williams() const { return construction == "williams"; }
    std::unique_ptr<ToeplitzSystem> make_system() const;
};

// Throws SpecError naming the offending field; chains are validated before returning.
ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

json element_to_json(const GroupElement& g);
GroupElement element_from_json(const GroupSpec& G, const json& j);

}  // namespace toeplitz
