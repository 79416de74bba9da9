#include "toeplitz/config.hpp"

#include <fstream>
#include <set>

namespace toeplitz {

namespace {

const std::set<std::string> kTopLevel = {"deck", "construction", "m", "periods", "variant", "group", "moduli", "offsets",
                                         "checks", "independence", "hom", "budget", "out"};

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw SpecError(where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SpecError(where + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

Vec to_vec(const std::vector<Int>& xs, int rank, const std::string& where) {
    if (static_cast<int>(xs.size()) != rank)
        throw SpecError(where + ": expected " + std::to_string(rank) + " entries, got " + std::to_string(xs.size()));
    Vec v{};
    for (int j = 0; j < rank; ++j) v[j] = xs[j];
    return v;
}

std::vector<Vec> vec_list(const json& j, const std::string& key, int rank, const std::string& where) {
    auto rows = get<std::vector<std::vector<Int>>>(j, key, where);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.push_back(to_vec(rows[i], rank, where + "." + key + "[" + std::to_string(i) + "]"));
    return out;
}

GroupSpec parse_group(const json& g) {
    const int rank = get<int>(g, "rank", "group");
    if (rank < 1 || rank > kMaxRank) throw SpecError("group.rank must lie in 1.." + std::to_string(kMaxRank));
    if (!g.contains("table") && !g.contains("action")) return GroupSpec(rank);
    auto table = get<std::vector<std::vector<int>>>(g, "table", "group");
    auto mats = get<std::vector<std::vector<std::vector<Int>>>>(g, "action", "group");
    std::vector<Matrix> action;
    for (std::size_t f = 0; f < mats.size(); ++f) {
        const std::string where = "group.action[" + std::to_string(f) + "]";
        if (static_cast<int>(mats[f].size()) != rank) throw SpecError(where + ": expected a " + std::to_string(rank) + "x" + std::to_string(rank) + " matrix");
        Matrix M;
        M.rank = rank;
        for (int i = 0; i < rank; ++i) M.a[i] = to_vec(mats[f][i], rank, where);
        action.push_back(M);
    }
    return GroupSpec(rank, std::move(table), std::move(action));
}

SymbolSearch parse_search(const json& j, const std::string& where) {
    SymbolSearch s;
    for (int x : get<std::vector<int>>(j, "symbols", where)) s.symbols.push_back(static_cast<Symbol>(x));
    if (s.symbols.empty()) throw SpecError(where + ".symbols is empty");
    s.L = get<std::size_t>(j, "L", where);
    if (s.L == 0) throw SpecError(where + ".L must be positive");
    s.required = get_or<bool>(j, "required", true, where);
    return s;
}

ChecksConfig parse_checks(const json& j) {
    ChecksConfig c;
    const std::string w = "checks";
    c.j_levels = get_or<int>(j, "j_levels", c.j_levels, w);
    c.strata_level = get_or<int>(j, "strata_level", c.strata_level, w);
    c.d_levels = get_or<int>(j, "d_levels", c.d_levels, w);
    c.matrix_level = get_or<int>(j, "matrix_level", c.matrix_level, w);
    for (const auto& t : get_or<std::vector<std::vector<int>>>(j, "z_mass", {}, w)) {
        if (t.size() != 3) throw SpecError("checks.z_mass entries are (i, k, s) triples");
        c.z_mass.push_back({t[0], t[1], t[2]});
    }
    c.conjugation_samples = get_or<int>(j, "conjugation_samples", c.conjugation_samples, w);
    c.conjugation_level = get_or<int>(j, "conjugation_level", c.conjugation_level, w);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, w);
    c.fiber_depth = get_or<int>(j, "fiber_depth", c.fiber_depth, w);
    c.fiber_radius = get_or<Int>(j, "fiber_radius", c.fiber_radius, w);
    c.generate_radius = get_or<Int>(j, "generate_radius", c.generate_radius, w);
    c.generate_level = get_or<int>(j, "generate_level", c.generate_level, w);
    c.complexity_radii = get_or<std::vector<Int>>(j, "complexity_radii", {}, w);
    c.control_seed = get_or<std::uint64_t>(j, "control_seed", c.control_seed, w);
    c.control_length = get_or<std::size_t>(j, "control_length", c.control_length, w);
    if (c.fiber_depth < 1) throw SpecError("checks.fiber_depth must be positive");
    if (c.fiber_radius < 0 || c.generate_radius < 0) throw SpecError("checks: radii must be nonnegative");
    for (std::size_t i = 1; i < c.complexity_radii.size(); ++i)
        if (c.complexity_radii[i] <= c.complexity_radii[i - 1]) throw SpecError("checks.complexity_radii must increase");
    return c;
}

IndependenceConfig parse_independence(const json& j) {
    IndependenceConfig c;
    const std::string w = "independence";
    c.candidate_radius = get<Int>(j, "candidate_radius", w);
    if (c.candidate_radius < 0) throw SpecError("independence.candidate_radius must be nonnegative");
    const auto searches = get_or<json>(j, "searches", json::array(), w);
    for (std::size_t i = 0; i < searches.size(); ++i)
        c.searches.push_back(parse_search(searches[i], w + ".searches[" + std::to_string(i) + "]"));
    const auto negatives = get_or<json>(j, "negatives", json::array(), w);
    for (std::size_t i = 0; i < negatives.size(); ++i)
        c.negatives.push_back(parse_search(negatives[i], w + ".negatives[" + std::to_string(i) + "]"));
    if (j.contains("tuple")) {
        const json& t = j.at("tuple");
        const std::string tw = w + ".tuple";
        TupleSearch ts;
        ts.depth = get_or<int>(t, "depth", ts.depth, tw);
        ts.window_radius = get<Int>(t, "window_radius", tw);
        ts.radii = get<std::vector<Int>>(t, "radii", tw);
        ts.L = get<std::size_t>(t, "L", tw);
        ts.oracle_level = get_or<int>(t, "oracle_level", 0, tw);
        ts.gamma_level = get_or<int>(t, "gamma_level", ts.depth, tw);
        ts.candidate_radius = get<Int>(t, "candidate_radius", tw);
        if (ts.radii.empty() || ts.radii.front() > ts.window_radius)
            throw SpecError(tw + ".radii must be nonempty and fit the window");
        c.tuple = ts;
    }
    return c;
}

HomConfig parse_hom(const json& j, const std::filesystem::path& base_dir) {
    HomConfig h;
    const std::string w = "hom";
    h.spec.w = get<std::vector<Int>>(j, "w", w);
    h.expect_valid = get_or<bool>(j, "expect_valid", true, w);
    if (j.contains("source_deck")) h.source_deck = base_dir / get<std::string>(j, "source_deck", w);
    h.window_radius = get_or<Int>(j, "window_radius", h.window_radius, w);
    h.samples = get_or<int>(j, "samples", h.samples, w);
    h.seed = get_or<std::uint64_t>(j, "seed", h.seed, w);
    h.transport_L = get_or<std::size_t>(j, "transport_L", h.transport_L, w);
    h.candidate_radius = get_or<Int>(j, "candidate_radius", h.candidate_radius, w);
    return h;
}

}  // namespace

int ExperimentConfig::m() const { return williams ? williams->m : group->m; }

std::unique_ptr<ToeplitzSystem> ExperimentConfig::make_system() const {
    if (williams) return std::make_unique<WilliamsToeplitz>(*williams);
    return std::make_unique<GroupToeplitz>(*group);
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw SpecError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kTopLevel.count(key)) throw SpecError("unknown config field '" + key + "'");

    ExperimentConfig c;
    c.deck = get<std::string>(j, "deck", "config");
    c.construction = get<std::string>(j, "construction", "config");
    const int m = get<int>(j, "m", "config");
    if (m < 2) throw SpecError("m must be at least 2");

    if (c.construction == "williams") {
        WilliamsParams p{m, get<std::vector<Int>>(j, "periods", "config")};
        p.validate();
        c.williams = p;
    } else if (c.construction == "group") {
        GroupSpec G = parse_group(get<json>(j, "group", "config"));
        auto moduli = vec_list(j, "moduli", G.rank(), "config");
        if (moduli.empty()) throw SpecError("moduli: the chain needs at least one level");
        std::vector<Vec> q1;
        const json offsets = j.contains("offsets") ? j.at("offsets") : json("auto");
        if (offsets.is_string()) {
            if (offsets.get<std::string>() != "auto") throw SpecError("offsets must be \"auto\" or a list of vectors");
            q1 = Lattice::default_offsets(G.rank(), moduli);
        } else {
            q1 = vec_list(j, "offsets", G.rank(), "config");
        }
        Lattice lat(std::move(G), std::move(moduli), std::move(q1));
        auto bad = lat.growth_violations();
        if (!bad.empty()) throw SpecError("chain violates the growth constraint: " + bad.front());
        const Variant v = parse_variant(get_or<std::string>(j, "variant", "virtually", "config"));
        if (v == Variant::Virtually43 && !lat.group().finite_part_trivial())
            for (int i = 1; i <= lat.depth(); ++i)
                if (!lat.gamma_normal(i)) throw SpecError("Gamma_" + std::to_string(i) + " is not invariant under the action");
        c.group = ConstructionParams{std::move(lat), m, v};
        GroupToeplitz probe(*c.group);  // remaining construction checks
    } else {
        throw SpecError("construction must be \"williams\" or \"group\", got \"" + c.construction + "\"");
    }

    c.checks = parse_checks(get_or<json>(j, "checks", json::object(), "config"));
    if (c.group) {
        const int depth = c.group->lattice.depth();
        auto need = [&](int level, const char* field) {
            if (level > depth)
                throw SpecError(std::string("checks.") + field + " = " + std::to_string(level) + " exceeds the chain depth " +
                                std::to_string(depth));
        };
        need(c.checks.j_levels, "j_levels");
        // windows D_N R are fully defined for N < depth
        need(c.checks.strata_level + 1, "strata_level");
        need(c.checks.d_levels + 1, "d_levels");
        need(c.checks.matrix_level + (c.checks.matrix_level > 0), "matrix_level");
        need(c.checks.generate_level + 1, "generate_level");
        need(c.checks.fiber_depth, "fiber_depth");
        for (const auto& [i, k, s] : c.checks.z_mass) {
            if (i < 1 || i > m || k < 1 || s <= k) throw SpecError("checks.z_mass needs 1 <= i <= m and 1 <= k < s");
            need(i + s * m, "z_mass");
        }
    } else {
        if (c.checks.fiber_depth > static_cast<int>(c.williams->periods.size()))
            throw SpecError("checks.fiber_depth exceeds the number of periods");
    }
    c.independence = parse_independence(get_or<json>(j, "independence", json{{"candidate_radius", 0}}, "config"));
    if (j.contains("hom")) c.hom = parse_hom(j.at("hom"), base_dir);

    const json budget = get_or<json>(j, "budget", json::object(), "config");
    c.budget.seconds = get_or<double>(budget, "seconds", 0.0, "budget");
    c.budget.nodes = get_or<std::uint64_t>(budget, "nodes", 0, "budget");
    if (c.budget.seconds < 0) throw SpecError("budget.seconds must be nonnegative");
    c.out_dir = get_or<std::string>(j, "out", "", "config");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw SpecError("cannot open config " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("config " + file.string() + " is not valid JSON: " + e.what());
    }
    auto c = parse_config(j, file.parent_path());
    c.path = file;
    return c;
}

json element_to_json(const GroupElement& g) {
    return json{{"v", std::vector<Int>(g.v.begin(), g.v.begin() + g.rank)}, {"f", g.f}};
}

GroupElement element_from_json(const GroupSpec& G, const json& j) {
    try {
        auto v = j.at("v").get<std::vector<Int>>();
        if (static_cast<int>(v.size()) != G.rank()) throw SpecError("element has the wrong rank");
        return G.element(v, j.at("f").get<int>());
    } catch (const json::exception& e) {
        throw SpecError(std::string("bad group element: ") + e.what());
    }
}

}  // namespace toeplitz
