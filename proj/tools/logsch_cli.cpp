// logsch: solve -Lap u + V u = u log u^2 on a box, verify fields, inspect field files.
//
//   logsch solve <config> [--output-dir DIR] [--quiet]
//   logsch verify <field-file> <config> [--quiet]
//   logsch info <field-file>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "logsch/config.hpp"
#include "logsch/field_io.hpp"
#include "logsch/numfmt.hpp"
#include "logsch/run.hpp"

using namespace logsch;

namespace {

int cmd_verify(const std::string& field_path, const std::string& config_path, bool quiet) {
    RunSpec spec;
    try {
        spec = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "FAIL config " << e.what() << '\n';
        return 2;
    }
    std::optional<std::pair<Grid, Field>> loaded;
    try {
        loaded.emplace(read_field(field_path));
    } catch (const std::exception& e) {
        std::cerr << "FAIL io " << e.what() << '\n';
        return 2;
    }
    const auto& [grid, u] = *loaded;
    if (!(grid == spec.grid())) {
        std::cerr << "FAIL io field grid does not match the config grid\n";
        return 2;
    }
    try {
        const PotentialField pot = bind_potential(grid, spec.potential());
        const auto checks = run_registry_checks(grid, pot, u, spec);
        std::cout << checks_csv({checks});
        if (!gating_checks_pass(checks)) {
            std::cerr << "FAIL checks nehari/energy_identity/linf did not all pass\n";
            return 4;
        }
        if (!quiet) std::cerr << "all gating checks passed\n";
    } catch (const std::exception& e) {
        std::cerr << "FAIL verify " << e.what() << '\n';
        return 3;
    }
    return 0;
}

int cmd_info(const std::string& field_path) {
    try {
        const auto [grid, u] = read_field(field_path);
        double lo = u[0], hi = u[0];
        for (double v : u.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        std::cout << "format LSEF1\n"
                  << "dim " << grid.dim() << '\n'
                  << "points " << grid.points_per_dim() << '\n'
                  << "half_width " << format_double(grid.half_width()) << '\n'
                  << "spacing " << format_double(grid.spacing()) << '\n'
                  << "values " << grid.size() << '\n'
                  << "min " << format_double(lo) << '\n'
                  << "max " << format_double(hi) << '\n'
                  << "l2 " << format_double(std::sqrt(inner(grid, u, u))) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "FAIL io " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational solver for the logarithmic Schroedinger equation"};
    app.require_subcommand(1);

    std::string config_path, field_path, output_dir;
    bool quiet = false;

    auto* solve = app.add_subcommand("solve", "run the continuation solver from a config file");
    solve->add_option("config", config_path, "key=value config file")->required();
    solve->add_option("--output-dir", output_dir, "override output_dir from the config");
    solve->add_flag("--quiet", quiet, "suppress the per-solution summary");

    auto* verify = app.add_subcommand("verify", "run the check registry on an existing field");
    verify->add_option("field", field_path, "LSEF1 field file")->required();
    verify->add_option("config", config_path, "config supplying potential, p and tolerances")->required();
    verify->add_flag("--quiet", quiet, "suppress the summary line");

    auto* info = app.add_subcommand("info", "print the header of a field file");
    info->add_option("field", field_path, "LSEF1 field file")->required();

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) {
        RunSpec spec;
        try {
            spec = load_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "FAIL config " << e.what() << '\n';
            return 2;
        }
        if (!output_dir.empty()) spec.output_dir = output_dir;
        return run(spec, std::cout, std::cerr, quiet);
    }
    if (verify->parsed()) return cmd_verify(field_path, config_path, quiet);
    return cmd_info(field_path);
}
