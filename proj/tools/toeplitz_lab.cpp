#include "toeplitz/suites.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz subshift laboratory: construction, measures, fibers, independence certificates"};
    app.require_subcommand(1);

    toeplitz::RunOptions opts;
    double budget = 0;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"gen-z", "generate the Z array on [-N, N] with its density summary"},
        {"gen-group", "generate the group array on D_N R with J(n) and strata checks"},
        {"measures", "exact mu_n frequencies, product formula, matrix identities, Z-mass bounds"},
        {"fibers", "exhaustive coords scan of fiber and piece counts"},
        {"independence", "independence-set certificates and entropy bounds"},
        {"pullback", "homomorphism validation, equivariance and certificate transport"},
        {"verify-all", "run every suite and write verdict.json"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "deck file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--threads", opts.threads, "worker threads for the parallel kernels (0: OpenMP default)");
        sub->add_option("--budget", budget, "wall-clock seconds per search, overriding the deck");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* sub : subs)
        if (sub->parsed()) {
            opts.command = sub->get_name();
            if (sub->count("--budget")) opts.budget_seconds = budget;
        }
    return toeplitz::run_command(opts);
}
