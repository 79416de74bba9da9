#pragma once

#include "toeplitz/independence.hpp"
#include "toeplitz/toeplitz_z.hpp"

#include <string>
#include <vector>

namespace toeplitz {

// phi(v, f) = <w, v> onto Z.
struct HomSpec {
    std::vector<Int> w;
};

struct HomValidation {
    bool compatible = false;  // w M_f = w for every f
    bool surjective = false;  // gcd(w) = 1
    bool ok() const { return compatible && surjective; }
    std::string reason;
};

HomValidation check_hom(const HomSpec& spec, const GroupSpec& G);
bool validate_hom(const HomSpec& spec, const GroupSpec& G);

Int phi(const HomSpec& spec, const GroupElement& g);
// (h u, e) with <w, u> = 1.
GroupElement section(const HomSpec& spec, const GroupSpec& G, Int h);
Vec section_vector(const HomSpec& spec);

// (phi* x)(g) = x(phi(g)) on the window; throws SpecError when phi(W) leaves [-N, N].
WindowPatch pullback_patch(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, const BoxIndexer& window);

// A band: one axis (carrying the section line when some |w_j| = 1) up to a reach, the other
// coordinates within 1, times F; phi of every element stays within `source_radius`.
BoxIndexer pullback_band(const HomSpec& spec, const GroupSpec& G, Int source_radius);
LanguageOracle pullback_oracle(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, const BoxIndexer& window);

struct EquivarianceCheck {
    GroupElement g;
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    bool holds() const { return mismatches == 0; }
};

// sigma^g phi*(x) = phi*(sigma^{phi(g)} x) on W, with (sigma^g y)(h) = y(g^{-1} h).
EquivarianceCheck equivariance_check(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x,
                                     const GroupElement& g, const BoxIndexer& window);

// Cylinders and J mapped through the section; throws InvariantViolation when the result does
// not re-verify against the pulled-back oracle.
Certificate transport_certificate(const HomSpec& spec, const GroupSpec& G, const Certificate& cert,
                                  const LanguageOracle& pulled);

// Pairs of source patches that differ on phi(W) but pull back to equal patches on W.
std::size_t injectivity_failures(const HomSpec& spec, const GroupSpec& G, const std::vector<LevelPatchZ>& sources,
                                 const BoxIndexer& window);

// Largest gap between consecutive occurrences of a word (source) or of a pulled-back pattern
// along the section line (pullback), for the shape B(0, radius) R.
struct RecurrenceDiagnostic {
    Int shape_radius = 0;
    Int source_width = 0;
    Int source_gap = 0;
    Int pullback_gap = 0;
    std::size_t source_words = 0;
    std::size_t pullback_patterns = 0;
    bool bounded_by_source() const { return pullback_gap <= source_gap; }
};
RecurrenceDiagnostic recurrence_diagnostic(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, Int radius);

}  // namespace toeplitz
