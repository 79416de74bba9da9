#include "toeplitz/report.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace toeplitz {

json quantity(const Rational& q, const char* provenance) { return json{{"value", to_string(q)}, {"provenance", provenance}}; }
json quantity(Int v, const char* provenance) { return json{{"value", v}, {"provenance", provenance}}; }
json quantity(double v, const char* provenance) { return json{{"value", v}, {"provenance", provenance}}; }

namespace {

json elements(const std::vector<GroupElement>& xs) {
    json a = json::array();
    for (const auto& g : xs) a.push_back(element_to_json(g));
    return a;
}

std::vector<GroupElement> elements_from(const GroupSpec& G, const json& a) {
    if (!a.is_array()) throw SpecError("expected an array of group elements");
    std::vector<GroupElement> out;
    for (const auto& e : a) out.push_back(element_from_json(G, e));
    return out;
}

}  // namespace

json certificate_to_json(const Certificate& cert) {
    json cyl = json::array();
    for (const auto& c : cert.cylinders) cyl.push_back(json{{"shape", elements(c.shape)}, {"pattern", c.pattern}});
    return json{{"cylinders", cyl},
                {"J", elements(cert.J)},
                {"witnesses", elements(cert.witnesses)},
                {"assignment_order", "base-k digits, least significant for J[0]"},
                {"convention", kIntersectionConvention}};
}

Certificate certificate_from_json(const GroupSpec& G, const json& j) {
    Certificate c;
    try {
        for (const auto& cj : j.at("cylinders")) {
            Cylinder cyl{elements_from(G, cj.at("shape")), cj.at("pattern").get<std::vector<Symbol>>()};
            cyl.validate();
            c.cylinders.push_back(std::move(cyl));
        }
        c.J = elements_from(G, j.at("J"));
        c.witnesses = elements_from(G, j.at("witnesses"));
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed certificate: ") + e.what());
    }
    if (c.cylinders.empty() || c.J.empty() || c.witnesses.size() != c.assignments())
        throw SpecError("malformed certificate: witness table does not match k^|J|");
    return c;
}

json search_to_json(const SearchResult& r, std::size_t L) {
    json j{{"L", L}, {"outcome", to_string(r.outcome)}, {"nodes", quantity(static_cast<Int>(r.nodes), kSearch)}};
    if (r.certificate) j["certificate"] = certificate_to_json(*r.certificate);
    return j;
}

ReportWriter::ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw SpecError("cannot create output directory " + dir_.string() + ": " + ec.message());
    log_.open(dir_ / "run.log", std::ios::app);
}

void ReportWriter::write_json(const std::string& name, const json& j) const {
    std::ofstream out(dir_ / name);
    if (!out) throw SpecError("cannot write " + (dir_ / name).string());
    out << j.dump(2) << "\n";
}

void ReportWriter::write_csv(const std::string& name, const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) const {
    std::ofstream out(dir_ / name);
    if (!out) throw SpecError("cannot write " + (dir_ / name).string());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

void ReportWriter::log(const std::string& line) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    log_ << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << " " << line << std::endl;
}

}  // namespace toeplitz
