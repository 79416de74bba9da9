#include "toeplitz/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <string>
#include <unordered_set>

namespace toeplitz {

namespace {

int g_threads = 0;

int worker_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

// Lattice part of gamma + j, finite part f, as an index into the approximant window.
inline std::size_t block_index(const BoxIndexer& idx, const GroupElement& gamma, const GroupElement& j, int f) {
    GroupElement g = gamma;
    for (int k = 0; k < g.rank; ++k) g.v[k] += j.v[k];
    g.f = f;
    return idx.index(g);
}

// Symbol on gamma J R when constant, kUndefined otherwise.
Symbol block_symbol(const PeriodicApproximant& a, const GroupElement& gamma, const std::vector<GroupElement>& j_set) {
    const BoxIndexer& idx = a.base.indexer();
    const int nf = idx.finite_count();
    Symbol s = kUndefined;
    bool first = true;
    for (const auto& j : j_set)
        for (int f = 0; f < nf; ++f) {
            Symbol t = a.base[block_index(idx, gamma, j, f)].symbol;
            if (first) {
                s = t;
                first = false;
            } else if (t != s) {
                return kUndefined;
            }
        }
    return s;
}

void tally_symbol(CellTally& t, Symbol s) {
    if (s == kUndefined || s >= static_cast<Symbol>(t.by_symbol.size()))
        ++t.nonconstant;
    else
        ++t.by_symbol[static_cast<std::size_t>(s)];
}

void merge(CellTally& into, const CellTally& from) {
    for (std::size_t k = 0; k < into.by_symbol.size(); ++k) into.by_symbol[k] += from.by_symbol[k];
    into.nonconstant += from.nonconstant;
}

int bits_for(int slots) {
    int b = 1;
    while ((1 << b) < slots) ++b;
    return b;
}

Symbol max_symbol(const std::vector<Symbol>& seq) {
    Symbol m = 0;
    for (Symbol s : seq) m = std::max(m, s);
    return m;
}

std::uint64_t pack_word(const std::vector<Symbol>& seq, std::size_t start, std::size_t width, int bits) {
    std::uint64_t code = 0;
    for (std::size_t k = 0; k < width; ++k) code = (code << bits) | static_cast<std::uint64_t>(seq[start + k] + 1);
    return code;
}

std::size_t distinct_words_strings(const std::vector<Symbol>& seq, std::size_t width) {
    std::unordered_set<std::string> seen;
    for (std::size_t s = 0; s + width <= seq.size(); ++s) {
        std::string w(width, '\0');
        for (std::size_t k = 0; k < width; ++k) w[k] = static_cast<char>(seq[s + k] + 1);
        seen.insert(std::move(w));
    }
    return seen.size();
}

}  // namespace

void set_threads(int n) {
    g_threads = n;
    if (n > 0) omp_set_num_threads(n);
}

int threads() { return worker_count(); }

std::int64_t Census::symbol_total(int symbol) const {
    std::int64_t t = 0;
    for (int l = 0; l <= max_level; ++l) t += at(l, symbol);
    return t;
}

std::int64_t Census::level_total(int level) const {
    std::int64_t t = 0;
    for (int s = 0; s < symbol_slots; ++s) t += at(level, s);
    return t;
}

PeriodicApproximant make_approximant(const ToeplitzSystem& sys, int N) {
    PeriodicApproximant a;
    a.lattice = &sys.lattice();
    a.level = N;
    a.base = kernels::parallel::materialize(sys, sys.lattice().domain_indexer(N, true));
    for (const auto& c : a.base.cells())
        if (!c.defined()) throw DepthExhausted("array not fully defined on D_" + std::to_string(N) + "R");
    return a;
}

namespace kernels {

namespace serial {

WindowPatch materialize(const ToeplitzSystem& sys, const BoxIndexer& window) {
    WindowPatch p(window);
    for (std::size_t k = 0; k < window.size(); ++k) p[k] = sys.cell(window.element(k));
    return p;
}

Census census(const WindowPatch& patch, int max_level, int symbol_slots) {
    Census c;
    c.max_level = max_level;
    c.symbol_slots = symbol_slots;
    c.counts.assign(static_cast<std::size_t>((max_level + 1) * symbol_slots), 0);
    for (const auto& cell : patch.cells()) {
        if (!cell.defined() || cell.level > max_level || cell.symbol >= symbol_slots) {
            ++c.undefined;
            continue;
        }
        ++c.counts[static_cast<std::size_t>(cell.level * symbol_slots + cell.symbol)];
    }
    return c;
}

CellTally cell_tally(const PeriodicApproximant& eta_n, int n, const std::vector<GroupElement>& j_set, int symbol_slots) {
    CellTally t;
    t.by_symbol.assign(static_cast<std::size_t>(symbol_slots), 0);
    for (const auto& gamma : eta_n.lattice->gamma_in_domain(n, eta_n.level)) tally_symbol(t, block_symbol(eta_n, gamma, j_set));
    return t;
}

CellTally z_mass_tally(const PeriodicApproximant& eta_m, int L, const std::vector<GroupElement>& j_set, int symbol_slots) {
    CellTally t;
    t.by_symbol.assign(static_cast<std::size_t>(symbol_slots), 0);
    const BoxIndexer& idx = eta_m.base.indexer();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        auto dec = eta_m.lattice->decompose_right(idx.element(k), L);
        tally_symbol(t, block_symbol(eta_m, dec.gamma, j_set));
    }
    return t;
}

std::size_t distinct_words(const std::vector<Symbol>& seq, std::size_t width) {
    if (width == 0 || seq.size() < width) return 0;
    const int bits = bits_for(max_symbol(seq) + 2);
    if (static_cast<std::size_t>(bits) * width > 64) return distinct_words_strings(seq, width);
    std::vector<std::uint64_t> codes;
    codes.reserve(seq.size() - width + 1);
    for (std::size_t s = 0; s + width <= seq.size(); ++s) codes.push_back(pack_word(seq, s, width, bits));
    std::sort(codes.begin(), codes.end());
    return static_cast<std::size_t>(std::unique(codes.begin(), codes.end()) - codes.begin());
}

}  // namespace serial

namespace parallel {

WindowPatch materialize(const ToeplitzSystem& sys, const BoxIndexer& window) {
    WindowPatch p(window);
    const auto n = static_cast<std::int64_t>(window.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = sys.cell(window.element(static_cast<std::size_t>(k)));
    return p;
}

Census census(const WindowPatch& patch, int max_level, int symbol_slots) {
    const int workers = worker_count();
    std::vector<Census> part(static_cast<std::size_t>(workers));
    const auto n = static_cast<std::int64_t>(patch.size());
#pragma omp parallel num_threads(workers)
    {
        Census& c = part[static_cast<std::size_t>(omp_get_thread_num())];
        c.max_level = max_level;
        c.symbol_slots = symbol_slots;
        c.counts.assign(static_cast<std::size_t>((max_level + 1) * symbol_slots), 0);
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < n; ++k) {
            const Cell& cell = patch[static_cast<std::size_t>(k)];
            if (!cell.defined() || cell.level > max_level || cell.symbol >= symbol_slots) {
                ++c.undefined;
                continue;
            }
            ++c.counts[static_cast<std::size_t>(cell.level * symbol_slots + cell.symbol)];
        }
    }
    Census out = part[0];
    for (std::size_t w = 1; w < part.size(); ++w) {
        if (part[w].counts.empty()) continue;
        for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += part[w].counts[k];
        out.undefined += part[w].undefined;
    }
    return out;
}

CellTally cell_tally(const PeriodicApproximant& eta_n, int n, const std::vector<GroupElement>& j_set, int symbol_slots) {
    const auto gammas = eta_n.lattice->gamma_in_domain(n, eta_n.level);
    const int workers = worker_count();
    std::vector<CellTally> part(static_cast<std::size_t>(workers));
    for (auto& t : part) t.by_symbol.assign(static_cast<std::size_t>(symbol_slots), 0);
    const auto count = static_cast<std::int64_t>(gammas.size());
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t k = 0; k < count; ++k)
        tally_symbol(part[static_cast<std::size_t>(omp_get_thread_num())], block_symbol(eta_n, gammas[static_cast<std::size_t>(k)], j_set));
    CellTally out = part[0];
    for (std::size_t w = 1; w < part.size(); ++w) merge(out, part[w]);
    return out;
}

CellTally z_mass_tally(const PeriodicApproximant& eta_m, int L, const std::vector<GroupElement>& j_set, int symbol_slots) {
    const BoxIndexer& idx = eta_m.base.indexer();
    const int workers = worker_count();
    std::vector<CellTally> part(static_cast<std::size_t>(workers));
    for (auto& t : part) t.by_symbol.assign(static_cast<std::size_t>(symbol_slots), 0);
    const auto count = static_cast<std::int64_t>(idx.size());
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t k = 0; k < count; ++k) {
        auto dec = eta_m.lattice->decompose_right(idx.element(static_cast<std::size_t>(k)), L);
        tally_symbol(part[static_cast<std::size_t>(omp_get_thread_num())], block_symbol(eta_m, dec.gamma, j_set));
    }
    CellTally out = part[0];
    for (std::size_t w = 1; w < part.size(); ++w) merge(out, part[w]);
    return out;
}

std::size_t distinct_words(const std::vector<Symbol>& seq, std::size_t width) {
    if (width == 0 || seq.size() < width) return 0;
    const int bits = bits_for(max_symbol(seq) + 2);
    if (static_cast<std::size_t>(bits) * width > 64) return distinct_words_strings(seq, width);
    const auto count = static_cast<std::int64_t>(seq.size() - width + 1);
    std::vector<std::uint64_t> codes(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t s = 0; s < count; ++s) codes[static_cast<std::size_t>(s)] = pack_word(seq, static_cast<std::size_t>(s), width, bits);
    std::sort(codes.begin(), codes.end());
    return static_cast<std::size_t>(std::unique(codes.begin(), codes.end()) - codes.begin());
}

}  // namespace parallel

}  // namespace kernels

}  // namespace toeplitz
