#pragma once

#include "toeplitz/lattice.hpp"
#include "toeplitz/toeplitz_g.hpp"
#include "toeplitz/toeplitz_z.hpp"

#include <cstdint>
#include <vector>

namespace fixtures {

using namespace toeplitz;

inline Vec vec1(Int a) {
    Vec v{};
    v[0] = a;
    return v;
}

inline Vec vec2(Int a, Int b) {
    Vec v{};
    v[0] = a;
    v[1] = b;
    return v;
}

// Z x| Z/2 with the generator acting by -1.
inline GroupSpec dihedral_group() {
    Matrix neg = Matrix::identity(1);
    neg.a[0][0] = -1;
    return GroupSpec(1, {{0, 1}, {1, 0}}, {Matrix::identity(1), neg});
}

// Z^2 x| Z/2 with the coordinate swap.
inline GroupSpec swap_group() {
    Matrix sw;
    sw.rank = 2;
    sw.a[0][1] = 1;
    sw.a[1][0] = 1;
    return GroupSpec(2, {{0, 1}, {1, 0}}, {Matrix::identity(2), sw});
}

inline std::vector<Vec> powers1(Int base, int levels) {
    std::vector<Vec> out;
    Int p = base;
    for (int i = 0; i < levels; ++i, p *= base) out.push_back(vec1(p));
    return out;
}

inline std::vector<Vec> powers2(Int base, int levels) {
    std::vector<Vec> out;
    Int p = base;
    for (int i = 0; i < levels; ++i, p *= base) out.push_back(vec2(p, p));
    return out;
}

inline GroupToeplitz dihedral(int levels = 5, int m = 2) {
    return GroupToeplitz({Lattice::with_default_offsets(dihedral_group(), powers1(5, levels)), m, Variant::Virtually43});
}

inline GroupToeplitz z2(int levels = 5, int m = 2) {
    return GroupToeplitz({Lattice::with_default_offsets(GroupSpec(2), powers2(5, levels)), m, Variant::Normal41});
}

inline GroupToeplitz zline(int levels = 5, int m = 2) {
    return GroupToeplitz({Lattice::with_default_offsets(GroupSpec(1), powers1(5, levels)), m, Variant::Normal41});
}

inline GroupToeplitz swapdeck(int levels = 5, int m = 2) {
    return GroupToeplitz({Lattice::with_default_offsets(swap_group(), powers2(5, levels)), m, Variant::Virtually43});
}

inline WilliamsParams williams_small(int m = 2) { return {m, {3, 18, 216}}; }
inline WilliamsParams williams_deck(int m = 2) { return {m, {9, 90, 1800, 54000}}; }

// Small deterministic generator for property tests.
struct SplitMix {
    std::uint64_t s;
    explicit SplitMix(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    Int range(Int lo, Int hi) { return lo + static_cast<Int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

inline GroupElement random_element(const GroupSpec& g, SplitMix& rng, Int radius) {
    GroupElement e = g.identity();
    for (int j = 0; j < g.rank(); ++j) e.v[j] = rng.range(-radius, radius);
    e.f = static_cast<int>(rng.range(0, g.order() - 1));
    return e;
}

}  // namespace fixtures
