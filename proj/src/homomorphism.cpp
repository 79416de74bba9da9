#include "toeplitz/homomorphism.hpp"

#include <cstdlib>
#include <map>
#include <numeric>
#include <tuple>

namespace toeplitz {

HomValidation check_hom(const HomSpec& spec, const GroupSpec& G) {
    HomValidation v;
    if (static_cast<int>(spec.w.size()) != G.rank()) {
        v.reason = "w has length " + std::to_string(spec.w.size()) + ", rank is " + std::to_string(G.rank());
        return v;
    }
    v.compatible = true;
    for (int f = 0; f < G.order() && v.compatible; ++f) {
        const Matrix& M = G.action(f);
        for (int j = 0; j < G.rank(); ++j) {
            Int s = 0;
            for (int i = 0; i < G.rank(); ++i) s += spec.w[i] * M.a[i][j];
            if (s != spec.w[j]) {
                v.compatible = false;
                v.reason = "w (M_f - I) != 0 for f = " + std::to_string(f);
                break;
            }
        }
    }
    Int g = 0;
    for (Int x : spec.w) g = std::gcd(g, x);
    v.surjective = g == 1;
    if (!v.surjective && v.reason.empty()) v.reason = "gcd(w) = " + std::to_string(g);
    return v;
}

bool validate_hom(const HomSpec& spec, const GroupSpec& G) { return check_hom(spec, G).ok(); }

Int phi(const HomSpec& spec, const GroupElement& g) {
    Int s = 0;
    for (std::size_t j = 0; j < spec.w.size(); ++j) s += spec.w[j] * g.v[j];
    return s;
}

namespace {

// (g, a, b) with a x + b y = g
std::tuple<Int, Int, Int> ext_gcd(Int x, Int y) {
    Int a0 = 1, b0 = 0, a1 = 0, b1 = 1;
    while (y != 0) {
        const Int q = x / y;
        std::tie(x, y) = std::make_tuple(y, x - q * y);
        std::tie(a0, a1) = std::make_tuple(a1, a0 - q * a1);
        std::tie(b0, b1) = std::make_tuple(b1, b0 - q * b1);
    }
    return {x, a0, b0};
}

const LevelPatchZ& check_reach(const LevelPatchZ& x, Int n) {
    if (std::abs(n) > x.radius)
        throw SpecError("phi value " + std::to_string(n) + " is beyond the source patch radius " + std::to_string(x.radius));
    return x;
}

}  // namespace

Vec section_vector(const HomSpec& spec) {
    if (spec.w.empty() || spec.w.size() > static_cast<std::size_t>(kMaxRank)) throw SpecError("bad homomorphism vector");
    Vec u{};
    for (std::size_t j = 0; j < spec.w.size(); ++j)
        if (std::abs(spec.w[j]) == 1) {
            u[j] = spec.w[j];
            return u;
        }
    Int g = spec.w[0];
    u[0] = 1;
    for (std::size_t i = 1; i < spec.w.size(); ++i) {
        auto [d, a, b] = ext_gcd(g, spec.w[i]);
        for (std::size_t j = 0; j < i; ++j) u[j] *= a;
        u[i] = b;
        g = d;
    }
    if (g == -1) {
        for (auto& c : u) c = -c;
        g = 1;
    }
    if (g != 1) throw SpecError("phi is not surjective: gcd(w) = " + std::to_string(g));
    return u;
}

GroupElement section(const HomSpec& spec, const GroupSpec& G, Int h) {
    Vec u = section_vector(spec);
    for (auto& c : u) c *= h;
    return G.lattice_element(u);
}

WindowPatch pullback_patch(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, const BoxIndexer& window) {
    if (static_cast<int>(spec.w.size()) != G.rank()) throw SpecError("w length does not match the rank");
    WindowPatch out(window);
    for (std::size_t k = 0; k < window.size(); ++k) {
        const Int n = phi(spec, window.element(k));
        out[k] = check_reach(x, n).at(n);
    }
    return out;
}

BoxIndexer pullback_band(const HomSpec& spec, const GroupSpec& G, Int source_radius) {
    if (static_cast<int>(spec.w.size()) != G.rank()) throw SpecError("w length does not match the rank");
    // the axis carries the section line when some |w_j| = 1
    int axis = -1;
    for (int j = 0; j < G.rank() && axis < 0; ++j)
        if (std::abs(spec.w[j]) == 1) axis = j;
    for (int j = 0; j < G.rank() && axis < 0; ++j)
        if (spec.w[j] != 0) axis = j;
    if (axis < 0) throw SpecError("w = 0");
    Int rest = 0;
    for (int j = 0; j < G.rank(); ++j)
        if (j != axis) rest += std::abs(spec.w[j]);
    const Int reach = (source_radius - rest) / std::abs(spec.w[axis]);
    if (reach < 0) throw SpecError("source patch too small for a band");
    Vec lo{}, ext{};
    for (int j = 0; j < G.rank(); ++j) {
        lo[j] = j == axis ? -reach : -1;
        ext[j] = j == axis ? 2 * reach + 1 : 3;
    }
    return BoxIndexer(G.rank(), lo, ext, G.order());
}

LanguageOracle pullback_oracle(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, const BoxIndexer& window) {
    LanguageOracle o{pullback_patch(spec, G, x, window), "pullback"};
    for (const auto& c : o.patch.cells())
        if (!c.defined()) throw DepthExhausted("source patch has undefined cells inside the pullback window");
    return o;
}

EquivarianceCheck equivariance_check(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x,
                                     const GroupElement& g, const BoxIndexer& window) {
    EquivarianceCheck r;
    r.g = g;
    const GroupElement gi = G.inv(g);
    const Int pg = phi(spec, g);
    for (std::size_t k = 0; k < window.size(); ++k) {
        const GroupElement h = window.element(k);
        const Int a = phi(spec, G.op(gi, h));
        const Int b = phi(spec, h) - pg;
        ++r.checked;
        if (check_reach(x, a).at(a).symbol != check_reach(x, b).at(b).symbol) ++r.mismatches;
    }
    return r;
}

Certificate transport_certificate(const HomSpec& spec, const GroupSpec& G, const Certificate& cert,
                                  const LanguageOracle& pulled) {
    if (!validate_hom(spec, G)) throw SpecError("transport needs a valid surjective homomorphism: " + check_hom(spec, G).reason);
    auto lift = [&](const GroupElement& z) { return section(spec, G, z.v[0]); };
    Certificate out;
    for (const auto& c : cert.cylinders) {
        Cylinder t;
        for (const auto& f : c.shape) t.shape.push_back(lift(f));
        t.pattern = c.pattern;
        out.cylinders.push_back(std::move(t));
    }
    for (const auto& g : cert.J) out.J.push_back(lift(g));
    for (const auto& h : cert.witnesses) out.witnesses.push_back(lift(h));
    bool ok = false;
    try {
        ok = check_certificate(G, out, pulled);
    } catch (const WitnessOutsideWindow& e) {
        throw InvariantViolation(std::string("transported certificate leaves the pulled-back window: ") + e.what());
    }
    if (!ok) throw InvariantViolation("transported certificate does not re-verify");
    return out;
}

std::size_t injectivity_failures(const HomSpec& spec, const GroupSpec& G, const std::vector<LevelPatchZ>& sources,
                                 const BoxIndexer& window) {
    std::vector<std::vector<Symbol>> pulled;
    for (const auto& s : sources) pulled.push_back(pullback_patch(spec, G, s, window).symbols());
    std::size_t failures = 0;
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            bool differ = false;
            for (std::size_t k = 0; k < window.size() && !differ; ++k) {
                const Int n = phi(spec, window.element(k));
                differ = sources[i].at(n).symbol != sources[j].at(n).symbol;
            }
            if (differ && pulled[i] == pulled[j]) ++failures;
        }
    return failures;
}

namespace {

template <class Key>
Int max_gap(const std::map<Key, std::vector<Int>>& occ) {
    Int gap = 0;
    for (const auto& [k, pos] : occ)
        for (std::size_t i = 1; i < pos.size(); ++i) gap = std::max(gap, pos[i] - pos[i - 1]);
    return gap;
}

}  // namespace

RecurrenceDiagnostic recurrence_diagnostic(const HomSpec& spec, const GroupSpec& G, const LevelPatchZ& x, Int radius) {
    RecurrenceDiagnostic d;
    d.shape_radius = radius;
    const auto shape = box_elements(G, radius, true);
    Int reach = 0;
    for (const auto& f : shape) reach = std::max(reach, std::abs(phi(spec, f)));
    d.source_width = 2 * reach + 1;
    if (x.radius <= reach) throw SpecError("source patch too small for the shape");

    std::map<std::vector<Symbol>, std::vector<Int>> words, patterns;
    for (Int t = -x.radius + reach; t <= x.radius - reach; ++t) {
        std::vector<Symbol> w;
        for (Int n = t - reach; n <= t + reach; ++n) w.push_back(x.at(n).symbol);
        words[w].push_back(t);
        const GroupElement h = section(spec, G, t);
        std::vector<Symbol> p;
        for (const auto& f : shape) {
            const Int n = phi(spec, G.op(h, f));
            p.push_back(check_reach(x, n).at(n).symbol);
        }
        patterns[p].push_back(t);
    }
    d.source_words = words.size();
    d.pullback_patterns = patterns.size();
    d.source_gap = max_gap(words);
    d.pullback_gap = max_gap(patterns);
    return d;
}

}  // namespace toeplitz
