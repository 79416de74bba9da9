// Serial reference vs OpenMP kernels on the bundled decks.
// Arg 0 runs kernels::serial, arg 1 kernels::parallel.
#include "toeplitz/config.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

using namespace toeplitz;

namespace {

struct Decks {
    std::unique_ptr<ToeplitzSystem> z2, dihedral, williams;
    GroupToeplitz* z2g = nullptr;
    std::unique_ptr<PeriodicApproximant> eta3;
    std::vector<GroupElement> j2;
    WindowPatch patch;
    std::vector<Symbol> seq;
    LanguageOracle williams_oracle;

    Decks() {
        auto load = [](const char* name) { return load_config(std::string(DECK_DIR) + "/" + name + ".json").make_system(); };
        z2 = load("z2-m2");
        dihedral = load("dihedral-m2");
        williams = load("williams-m2");
        z2g = dynamic_cast<GroupToeplitz*>(z2.get());
        eta3 = std::make_unique<PeriodicApproximant>(make_approximant(*z2, 3));
        j2 = z2g->compute_J(2);
        patch = kernels::serial::materialize(*z2, z2->lattice().domain_indexer(3, true));
        std::mt19937_64 rng(7);
        seq.resize(std::size_t{1} << 18);
        for (auto& s : seq) s = static_cast<Symbol>(rng() & 1);
        williams_oracle = default_oracle(*williams);
    }
};

const Decks& decks() {
    static const Decks d;
    return d;
}

bool parallel(const benchmark::State& st) { return st.range(0) == 1; }

void BM_materialize(benchmark::State& st) {
    const auto& d = decks();
    const auto win = d.z2->lattice().domain_indexer(4, true);
    for (auto _ : st) {
        auto p = parallel(st) ? kernels::parallel::materialize(*d.z2, win) : kernels::serial::materialize(*d.z2, win);
        benchmark::DoNotOptimize(p);
    }
}

void BM_census(benchmark::State& st) {
    const auto& d = decks();
    for (auto _ : st) {
        auto c = parallel(st) ? kernels::parallel::census(d.patch, 3, 3) : kernels::serial::census(d.patch, 3, 3);
        benchmark::DoNotOptimize(c);
    }
}

void BM_cell_tally(benchmark::State& st) {
    const auto& d = decks();
    for (auto _ : st) {
        auto t = parallel(st) ? kernels::parallel::cell_tally(*d.eta3, 2, d.j2, 3) : kernels::serial::cell_tally(*d.eta3, 2, d.j2, 3);
        benchmark::DoNotOptimize(t);
    }
}

void BM_z_mass_tally(benchmark::State& st) {
    const auto& d = decks();
    for (auto _ : st) {
        auto t = parallel(st) ? kernels::parallel::z_mass_tally(*d.eta3, 2, d.j2, 3)
                              : kernels::serial::z_mass_tally(*d.eta3, 2, d.j2, 3);
        benchmark::DoNotOptimize(t);
    }
}

void BM_distinct_words(benchmark::State& st) {
    const auto& d = decks();
    for (auto _ : st) {
        auto n = parallel(st) ? kernels::parallel::distinct_words(d.seq, 12) : kernels::serial::distinct_words(d.seq, 12);
        benchmark::DoNotOptimize(n);
    }
}

void BM_fiber_scan(benchmark::State& st) {
    const auto& d = decks();
    const auto win = box_indexer(d.dihedral->group(), 2, true);
    const auto oracle = default_oracle(*d.dihedral);
    for (auto _ : st) {
        auto s = parallel(st) ? kernels::parallel::fiber_scan(*d.dihedral, 2, win, oracle)
                              : kernels::serial::fiber_scan(*d.dihedral, 2, win, oracle);
        benchmark::DoNotOptimize(s);
    }
}

void BM_find_independence_set(benchmark::State& st) {
    const auto& d = decks();
    const auto& G = d.williams->group();
    const std::vector<Cylinder> cyl{symbol_cylinder(G, 0), symbol_cylinder(G, 1)};
    const auto space = candidate_box(G, 300);
    for (auto _ : st) {
        auto r = parallel(st) ? kernels::parallel::find_independence_set(G, cyl, 3, d.williams_oracle, space, {})
                              : kernels::serial::find_independence_set(G, cyl, 3, d.williams_oracle, space, {});
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(BM_materialize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_census)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cell_tally)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_z_mass_tally)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distinct_words)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fiber_scan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_find_independence_set)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
