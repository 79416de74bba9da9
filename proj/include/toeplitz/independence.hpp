#pragma once

#include "toeplitz/periods.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toeplitz {

// Shift convention used throughout: x in sigma^{g^{-1}} A iff x(g^{-1} f) = pattern(f) on the
// shape; for the orbit point x = sigma^{h^{-1}} eta this reads eta(h g^{-1} f) = pattern(f).
inline constexpr const char* kIntersectionConvention = "x in sigma^{g^-1}A <=> eta(h g^-1 f) = pattern(f)";

struct Cylinder {
    std::vector<GroupElement> shape;
    std::vector<Symbol> pattern;

    // Throws SpecError on an empty shape or a pattern of the wrong length.
    void validate() const;
    bool operator==(const Cylinder&) const = default;
};

Cylinder symbol_cylinder(const GroupSpec& g, Symbol s);
// Restriction of a window patch to the elements with max-norm <= radius.
Cylinder restrict_patch(const WindowPatch& patch, Int radius);

// A witness position lies outside the oracle window; distinct from a failed check.
struct WitnessOutsideWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// witnesses[c] realizes the assignment whose base-k digits (least significant first) give
// s(J[0]), s(J[1]), ...
struct Certificate {
    std::vector<Cylinder> cylinders;
    std::vector<GroupElement> J;
    std::vector<GroupElement> witnesses;

    std::size_t k() const { return cylinders.size(); }
    std::size_t assignments() const;
    // digit j of assignment code c
    std::size_t digit(std::size_t c, std::size_t j) const;
};

bool occurs_at(const GroupSpec& G, const LanguageOracle& oracle, const Cylinder& a, const GroupElement& h,
               const GroupElement& g);

// Re-verifies every witness; throws WitnessOutsideWindow when a read leaves the oracle.
bool check_certificate(const GroupSpec& G, const Certificate& cert, const LanguageOracle& oracle);

// Restriction to the J entries `keep_j` and the cylinders `keep_cyl`.
Certificate restrict_certificate(const Certificate& cert, const std::vector<std::size_t>& keep_j,
                                 const std::vector<std::size_t>& keep_cyl);
// (A_1, A_1, A_2, ..., A_k) from (A_1, ..., A_k).
Certificate pad_certificate(const Certificate& cert);

enum class SearchOutcome { Found, None, Exhausted };
std::string to_string(SearchOutcome o);

struct SearchBudget {
    double seconds = 0;        // 0: unlimited
    std::uint64_t nodes = 0;   // 0: unlimited
};

struct SearchSpace {
    std::vector<GroupElement> candidates;  // sorted by search_less
};
// Elements of max-norm <= radius (all finite parts), in search order.
SearchSpace candidate_box(const GroupSpec& G, Int radius);
// Gamma_K elements of max-norm <= radius: the return times to a level-K clopen class.
SearchSpace gamma_candidates(const Lattice& lat, int K, Int radius);

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::None;
    std::optional<Certificate> certificate;
    std::uint64_t nodes = 0;  // up to and including the successful branch
    double seconds = 0;
};

namespace kernels::serial {
SearchResult find_independence_set(const GroupSpec& G, const std::vector<Cylinder>& cylinders, std::size_t L,
                                   const LanguageOracle& oracle, const SearchSpace& space, const SearchBudget& budget);
}
namespace kernels::parallel {
SearchResult find_independence_set(const GroupSpec& G, const std::vector<Cylinder>& cylinders, std::size_t L,
                                   const LanguageOracle& oracle, const SearchSpace& space, const SearchBudget& budget);
}

struct RadiusAttempt {
    Int radius = 0;
    SearchResult result;
};

struct InTupleReport {
    bool filter_ok = false;
    std::string filter_reason;  // empty when the tuple passes
    std::vector<RadiusAttempt> attempts;
    std::optional<Int> failure_radius;
    bool certified() const { return filter_ok && !failure_radius && !attempts.empty(); }
};

// Points are patches on a common window; radii must be decreasing and fit the window. The
// tuple is rejected when two points agree on the largest radius or k exceeds `fiber_bound`.
InTupleReport in_tuple_search(const GroupSpec& G, const std::vector<WindowPatch>& points, const std::vector<Int>& radii,
                              std::size_t L, const LanguageOracle& oracle, const SearchSpace& space,
                              const SearchBudget& budget, Int fiber_bound);

// x'_i = sigma^{h_i^{-1}} eta agrees with point i on the shape and sigma^g x'_i all agree there.
struct ProximalWitness {
    GroupElement g;
    std::vector<GroupElement> h;
};

struct ProximalResult {
    bool holds = false;
    std::optional<ProximalWitness> witness;
    std::size_t shifts_tried = 0;
};

bool verify_proximal(const GroupSpec& G, const std::vector<Cylinder>& balls, const ProximalWitness& w,
                     const LanguageOracle& oracle);
// All balls must share one shape.
ProximalResult regional_proximality_check(const GroupSpec& G, const std::vector<Cylinder>& balls,
                                          const LanguageOracle& oracle, const SearchSpace& shifts);
// From a certificate with |J| >= 2: x'_i = sigma^g y_i with y_i realizing s(J[0]) = i,
// s(J[1]) = 1, and shift J[1] J[0]^{-1}.
ProximalWitness proximal_from_certificate(const GroupSpec& G, const Certificate& cert);

struct EntropyBounds {
    std::size_t certified_k = 0;
    Int fiber_bound = 0;
    double lower = 0;  // log(certified_k)
    double upper = 0;  // log(fiber_bound)
    std::string lower_provenance = "search";
    std::string upper_provenance = "closed-form";
};
// Throws InvariantViolation when the certified size exceeds the fiber bound.
EntropyBounds entropy_bounds(std::size_t certified_k, Int fiber_bound);

}  // namespace toeplitz
