#include "logsch/run.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

#include "logsch/field_io.hpp"
#include "logsch/numfmt.hpp"

namespace logsch {

namespace {

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<CheckResult> run_registry_checks(const Grid& g, const PotentialField& v, const Field& u,
                                             const RunSpec& spec) {
    PerturbationParams unperturbed = spec.params();
    unperturbed.lambda = 0.0;
    const double h1 = norm_h1v(g, v.values, u);
    std::vector<CheckResult> out;
    out.push_back(check_nehari(g, v, u, 20.0 * spec.tol_grad * h1));
    out.push_back(check_energy_identity(g, v, u, unperturbed));
    out.push_back(check_scaling(g, v.values, u, 0.3));
    out.push_back(check_log_sobolev(g, u, 1.0));
    out.push_back(check_linf(u));
    out.push_back(check_gradient_fd(g, v, unperturbed, 5, spec.rng_seed));
    return out;
}

bool gating_checks_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        if ((c.name == "nehari" || c.name == "energy_identity" || c.name == "linf") && !c.pass) return false;
    }
    return true;
}

std::string diagnostics_csv(const MultiplicityResult& result) {
    std::string s = "j,lambda,energy,resid_precond,resid_raw,iters,mass,lambda_w1p_p,linf\n";
    for (std::size_t j = 0; j < result.solutions.size(); ++j) {
        for (const auto& r : result.solutions[j].report.records) {
            s += std::to_string(j + 1) + ',' + fmt(r.lambda) + ',' + fmt(r.energy) + ',' + fmt(r.resid_precond) + ',' +
                 fmt(r.resid_raw) + ',' + std::to_string(r.iterations) + ',' + fmt(r.mass) + ',' +
                 fmt(r.lambda_w1p_p) + ',' + fmt(r.linf) + '\n';
        }
    }
    return s;
}

std::string checks_csv(const std::vector<std::vector<CheckResult>>& per_solution) {
    std::string s = "j,check_name,margin,tolerance,pass\n";
    for (std::size_t j = 0; j < per_solution.size(); ++j) {
        for (const auto& c : per_solution[j]) {
            s += std::to_string(j + 1) + ',' + c.name + ',' + fmt(c.margin) + ',' + fmt(c.tolerance) + ',' +
                 (c.pass ? "1" : "0") + '\n';
        }
    }
    return s;
}

std::string energy_vs_lambda_dat(const MultiplicityResult& result) {
    std::string s = "# lambda energy\n";
    for (std::size_t j = 0; j < result.solutions.size(); ++j) {
        if (j > 0) s += "\n\n";
        s += "# solution " + std::to_string(j + 1) + '\n';
        for (const auto& r : result.solutions[j].report.records) s += fmt(r.lambda) + ' ' + fmt(r.energy) + '\n';
    }
    return s;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err, bool quiet) {
    const std::filesystem::path dir(spec.output_dir);
    try {
        std::filesystem::create_directories(dir);
        write_text_atomic(dir / ".write_probe", "");
        std::filesystem::remove(dir / ".write_probe");
    } catch (const std::exception& e) {
        err << "FAIL io cannot write output directory '" << spec.output_dir << "': " << e.what() << '\n';
        return 2;
    }

    MultiplicityResult result;
    std::optional<Grid> grid;
    std::optional<PotentialField> pot;
    try {
        grid.emplace(spec.grid());
        pot.emplace(bind_potential(*grid, spec.potential()));
        result = find_k_solutions(*grid, *pot, spec.schedule, spec.params(), spec.solver_config(), spec.k_solutions);
    } catch (const std::exception& e) {
        err << "FAIL solve " << e.what() << '\n';
        return 3;
    }

    std::vector<std::vector<CheckResult>> checks;
    for (const auto& sol : result.solutions) checks.push_back(run_registry_checks(*grid, *pot, sol.u, spec));

    try {
        if (spec.emits("fields")) {
            for (std::size_t j = 0; j < result.solutions.size(); ++j) {
                write_field(dir / ("u_" + std::to_string(j + 1) + ".lsef"), *grid, result.solutions[j].u);
            }
        }
        if (spec.emits("diagnostics")) write_text_atomic(dir / "diagnostics.csv", diagnostics_csv(result));
        if (spec.emits("checks")) write_text_atomic(dir / "checks.csv", checks_csv(checks));
        if (spec.emits("plotdata")) write_text_atomic(dir / "energy_vs_lambda.dat", energy_vs_lambda_dat(result));
    } catch (const std::exception& e) {
        err << "FAIL io " << e.what() << '\n';
        return 2;
    }

    if (!quiet) {
        for (std::size_t j = 0; j < result.solutions.size(); ++j) {
            const auto& s = result.solutions[j];
            out << "solution " << j + 1 << ": energy " << fmt(s.energy) << ", residual "
                << fmt(s.report.records.back().resid_precond) << ", mass " << fmt(s.report.records.back().mass)
                << ", linf " << fmt(s.report.linf) << ", " << fmt(s.report.wall_seconds) << " s\n";
        }
        for (const auto& d : result.diagnostics) out << "note: " << d << '\n';
    }

    for (std::size_t j = 0; j < checks.size(); ++j) {
        for (const auto& c : checks[j]) {
            if ((c.name == "nehari" || c.name == "energy_identity" || c.name == "linf") && !c.pass) {
                err << "FAIL checks solution " << j + 1 << ' ' << c.name << " margin " << fmt(c.margin) << '\n';
                return 4;
            }
        }
    }
    if (!result.complete) {
        err << "FAIL multiplicity found " << result.solutions.size() << " of " << spec.k_solutions << " solutions\n";
        return 5;
    }
    return 0;
}

}  // namespace logsch
