#include "toeplitz/patch.hpp"

namespace toeplitz {

WindowPatch::WindowPatch(BoxIndexer index, std::vector<Cell> cells) : index_(index), cells_(std::move(cells)) {
    if (cells_.size() != index_.size()) throw SpecError("patch size does not match its window");
}

const Cell& WindowPatch::at(const GroupElement& g) const {
    if (!index_.contains(g)) throw SpecError("position " + to_string(g) + " outside patch window");
    return cells_[index_.index(g)];
}

std::optional<Cell> WindowPatch::find(const GroupElement& g) const {
    if (!index_.contains(g)) return std::nullopt;
    return cells_[index_.index(g)];
}

std::vector<Symbol> WindowPatch::symbols() const {
    std::vector<Symbol> out(cells_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k) out[k] = cells_[k].symbol;
    return out;
}

}  // namespace toeplitz
