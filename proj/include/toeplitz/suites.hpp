#pragma once

#include "toeplitz/config.hpp"
#include "toeplitz/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace toeplitz {

struct SuiteResult {
    std::string name;
    json report = json::object();
    std::vector<std::string> failures;  // violated hard assertions
    bool exhausted = false;             // a required search ran out of budget

    void expect(bool cond, const std::string& what);
    bool passed() const { return failures.empty() && !exhausted; }
    json verdict() const;
};

struct SuiteContext {
    const ExperimentConfig& cfg;
    const ToeplitzSystem& sys;
    SearchBudget budget;
    ReportWriter* writer = nullptr;  // when set, suites also write their data files
};

// Williams decks: literal generation against the closed-form density; group decks: both J(n)
// computations and the strata partition.
SuiteResult construction_suite(const SuiteContext& ctx);
// d_n product formula, extra-symbol mass, A_n / A_0 identities, Z-mass bounds, mu_n tables.
SuiteResult measures_suite(const SuiteContext& ctx);
// Exhaustive coords scan: fiber counts and T_zeta piece counts against their bounds.
SuiteResult fiber_suite(const SuiteContext& ctx);
// Symbol-cylinder certificates, expected negatives, fiber tuples and entropy bounds.
SuiteResult independence_suite(const SuiteContext& ctx);
// Per(sigma^g x, Gamma_i, alpha) = g Per(x, g^{-1} Gamma_i g, alpha) on sampled instances.
SuiteResult conjugation_suite(const SuiteContext& ctx);
// log(pattern count) / width across radii, with a seeded random control.
SuiteResult complexity_suite(const SuiteContext& ctx);
// Homomorphism validation, equivariance, and transport of a certificate from the source deck.
SuiteResult pullback_suite(const SuiteContext& ctx);

// Exit status for a set of suites: 1 on any failure, else 3 on exhaustion, else 0.
int exit_status(const std::vector<SuiteResult>& results);

// Subcommands of the command-line tool. Returns the exit status; config errors are 2.
struct RunOptions {
    std::string command;
    std::string config;
    std::string out;
    int threads = 0;
    std::optional<double> budget_seconds;
};
int run_command(const RunOptions& opts);

}  // namespace toeplitz
