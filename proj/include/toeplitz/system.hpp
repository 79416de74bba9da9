#pragma once

#include "toeplitz/lattice.hpp"
#include "toeplitz/patch.hpp"

#include <string>
#include <vector>

namespace toeplitz {

// Common view of the Z construction and the group constructions: a Toeplitz array given by a
// level map over a lattice chain, with level-k positions periodic under Gamma_k.
class ToeplitzSystem {
public:
    virtual ~ToeplitzSystem() = default;

    virtual const Lattice& lattice() const = 0;
    const GroupSpec& group() const { return lattice().group(); }

    // Symbol and defining step at g, or an undefined cell when no configured step reaches g.
    virtual Cell cell(const GroupElement& g) const = 0;
    // Deepest step the configured chain can run.
    virtual int steps() const = 0;
    // Number of non-extra symbols.
    virtual int m() const = 0;
    // Symbol written at step i.
    virtual Symbol alpha(int i) const = 0;
    // Every symbol the array can take, including the extra symbol when present.
    virtual std::vector<Symbol> alphabet() const = 0;
    // Largest fiber of the factor map onto the odometer allowed by the structure theory.
    virtual Int fiber_bound() const = 0;
    // Largest number of T_zeta pieces on a window.
    virtual Int piece_bound() const = 0;
    virtual std::string kind() const = 0;
};

}  // namespace toeplitz
