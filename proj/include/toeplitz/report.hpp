#pragma once

#include "toeplitz/config.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace toeplitz {

// Provenance tags carried by every reported number.
inline constexpr const char* kCounted = "counted";
inline constexpr const char* kClosedForm = "closed-form";
inline constexpr const char* kSearch = "search";

// {"value": ..., "provenance": ...}; rationals are written as "a/b" strings.
json quantity(const Rational& q, const char* provenance);
json quantity(Int v, const char* provenance);
json quantity(double v, const char* provenance);

json certificate_to_json(const Certificate& cert);
// Throws SpecError on malformed input.
Certificate certificate_from_json(const GroupSpec& G, const json& j);

json search_to_json(const SearchResult& r, std::size_t L);

// Data files go to the output directory; wall-clock times and timestamps only to run.log.
class ReportWriter {
public:
    explicit ReportWriter(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    void write_json(const std::string& name, const json& j) const;
    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) const;
    void log(const std::string& line);

private:
    std::filesystem::path dir_;
    std::ofstream log_;
};

}  // namespace toeplitz
