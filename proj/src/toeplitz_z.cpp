#include "toeplitz/toeplitz_z.hpp"

#include <algorithm>

namespace toeplitz {

void WilliamsParams::validate() const {
    if (m < 2) throw SpecError("alphabet size m must be at least 2");
    if (periods.empty()) throw SpecError("need at least one period");
    if (periods[0] < 3) throw SpecError("p_1 = " + std::to_string(periods[0]) + " must be at least 3");
    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i] % periods[i - 1] != 0)
            throw SpecError("p_" + std::to_string(i) + " does not divide p_" + std::to_string(i + 1));
        if (periods[i] / periods[i - 1] < 3)
            throw SpecError("p_" + std::to_string(i + 1) + "/p_" + std::to_string(i) + " must be at least 3");
    }
}

std::size_t LevelPatchZ::undefined_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return !c.defined(); }));
}

namespace {

Lattice williams_lattice(const WilliamsParams& p) {
    p.validate();
    std::vector<Vec> moduli, q1;
    for (Int period : p.periods) {
        Vec v{};
        v[0] = period;
        moduli.push_back(v);
        q1.push_back(Vec{});
    }
    return Lattice(GroupSpec(1), moduli, q1);
}

}  // namespace

WilliamsToeplitz::WilliamsToeplitz(WilliamsParams params)
    : params_(std::move(params)), lattice_(williams_lattice(params_)) {}

Cell WilliamsToeplitz::at(Int n) const {
    const auto& p = params_.periods;
    const Int r1 = floor_mod(n, p[0]);
    if (r1 == 0 || r1 == p[0] - 1) return {alpha(1), 1};
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Int ratio = p[i + 1] / p[i];
        const Int k = floor_mod(floor_div(n, p[i]), ratio);
        if (k == 0 || k == ratio - 1) {
            const int level = static_cast<int>(i) + 2;
            return {alpha(level), static_cast<std::int16_t>(level)};
        }
    }
    return {};
}

std::vector<Symbol> WilliamsToeplitz::alphabet() const {
    std::vector<Symbol> out;
    for (int s = 0; s < params_.m; ++s) out.push_back(static_cast<Symbol>(s));
    return out;
}

Int WilliamsToeplitz::defined_radius() const {
    const auto& p = params_.periods;
    return p.size() >= 2 ? p[p.size() - 2] : 0;
}

LevelPatchZ williams_generate(const WilliamsParams& params, Int radius) {
    params.validate();
    const auto& p = params.periods;
    if (radius < p[0]) throw SpecError("window radius must be at least p_1");
    LevelPatchZ patch;
    patch.radius = radius;
    patch.cells.assign(static_cast<std::size_t>(2 * radius + 1), Cell{});
    for (Int n = -radius; n <= radius; ++n) {
        Int r = floor_mod(n, p[0]);
        if (r == 0 || r == p[0] - 1) patch.at(n) = {williams_alpha(1, params.m), 1};
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Int ratio = p[i + 1] / p[i];
        const int level = static_cast<int>(i) + 2;
        const Symbol a = williams_alpha(level, params.m);
        for (Int k = floor_div(-radius, p[i]) - 1; k * p[i] <= radius; ++k) {
            Int km = floor_mod(k, ratio);
            if (km != 0 && km != ratio - 1) continue;
            // J(i,k) = [k p_i + 1, (k+1) p_i - 1)
            for (Int n = std::max(k * p[i] + 1, -radius); n < std::min((k + 1) * p[i] - 1, radius + 1); ++n) {
                Cell& c = patch.at(n);
                if (!c.defined()) c = {a, static_cast<std::int16_t>(level)};
            }
        }
    }
    return patch;
}

std::vector<Rational> convergence_diag(const WilliamsParams& params) {
    std::vector<Rational> out;
    Rational s = 0;
    for (std::size_t i = 0; i + 1 < params.periods.size(); ++i) {
        s += Rational(params.periods[i], params.periods[i + 1]);
        out.push_back(s);
    }
    return out;
}

Rational williams_undefined_closed_form(const WilliamsParams& params, int n) {
    const auto& p = params.periods;
    if (n < 0 || n + 1 > static_cast<int>(p.size())) throw DepthExhausted("closed form needs p_1..p_{n+1}");
    Rational q = 1 - Rational(2, p[0]);
    for (int j = 1; j <= n; ++j) q *= 1 - Rational(2 * p[j - 1], p[j]);
    return q;
}

Rational williams_undefined_bound(const WilliamsParams& params, Int radius) {
    const Int pk = params.periods.back();
    const Int blocks = floor_div(radius, pk) - floor_div(-radius, pk) + 1;
    return Rational(2 * blocks * (pk - 2), 2 * radius + 1);
}

Int smallest_window_period(const LevelPatchZ& patch) {
    const Int n = patch.radius;
    for (Int t = 1; 2 * t <= n; ++t) {
        bool fixed = true;
        for (Int x = -n; x + t <= n && fixed; ++x) {
            const Cell& a = patch.at(x);
            const Cell& b = patch.at(x + t);
            // undefined never matches, not even another undefined cell
            if (!a.defined() || !b.defined() || a.symbol != b.symbol) fixed = false;
        }
        if (fixed) return t;
    }
    return 0;
}

}  // namespace toeplitz
