#pragma once

#include "toeplitz/lattice.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace toeplitz {

using Symbol = std::int16_t;
inline constexpr Symbol kUndefined = -1;
// In the virtually-Z^r construction the extra symbol is stored as 0.
inline constexpr Symbol kBeta = 0;

// symbol and defining step; level 0 means not defined by any configured step
struct Cell {
    Symbol symbol = kUndefined;
    std::int16_t level = 0;

    bool defined() const { return symbol != kUndefined; }
    bool operator==(const Cell&) const = default;
};

// A patch on a box window (times the finite part), stored densely in canonical order.
class WindowPatch {
public:
    WindowPatch() = default;
    explicit WindowPatch(BoxIndexer index) : index_(index), cells_(index.size()) {}
    WindowPatch(BoxIndexer index, std::vector<Cell> cells);

    const BoxIndexer& indexer() const { return index_; }
    std::size_t size() const { return cells_.size(); }
    bool contains(const GroupElement& g) const { return index_.contains(g); }
    const Cell& at(const GroupElement& g) const;
    std::optional<Cell> find(const GroupElement& g) const;
    Symbol symbol(const GroupElement& g) const { return at(g).symbol; }
    GroupElement element(std::size_t k) const { return index_.element(k); }
    const std::vector<Cell>& cells() const { return cells_; }
    std::vector<Cell>& cells() { return cells_; }
    Cell& operator[](std::size_t k) { return cells_[k]; }
    const Cell& operator[](std::size_t k) const { return cells_[k]; }

    // Symbols only, for equality of patches irrespective of levels.
    std::vector<Symbol> symbols() const;

private:
    BoxIndexer index_;
    std::vector<Cell> cells_;
};

// A finite-index subgroup H of G known through the right coset map g -> canonical rep of H g.
struct SubgroupRef {
    std::string label;
    std::function<GroupElement(const GroupElement&)> right_coset_rep;
};

}  // namespace toeplitz
