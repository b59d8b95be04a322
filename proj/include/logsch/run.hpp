#pragma once

// Orchestration behind `logsch solve` and `logsch verify`.
//
// Output files (in RunSpec::output_dir):
//   u_<j>.lsef            converged field of solution j (emit=fields)
//   diagnostics.csv       j,lambda,energy,resid_precond,resid_raw,iters,mass,lambda_w1p_p,linf
//   checks.csv            j,check_name,margin,tolerance,pass
//   energy_vs_lambda.dat  "lambda energy" rows, one blank-line separated block per solution (emit=plotdata)

#include <iosfwd>
#include <string>
#include <vector>

#include "logsch/config.hpp"
#include "logsch/multiplicity.hpp"
#include "logsch/verify.hpp"

namespace logsch {

/// Runs every registry check on a lambda = 0 field.
std::vector<CheckResult> run_registry_checks(const Grid& g, const PotentialField& v, const Field& u,
                                             const RunSpec& spec);

/// Checks that decide the exit status.
bool gating_checks_pass(const std::vector<CheckResult>& checks);

std::string diagnostics_csv(const MultiplicityResult& result);
std::string checks_csv(const std::vector<std::vector<CheckResult>>& per_solution);
std::string energy_vs_lambda_dat(const MultiplicityResult& result);

/// Returns the process exit status. On failure the last line written to
/// `err` is "FAIL <stage> <detail>".
int run(const RunSpec& spec, std::ostream& out, std::ostream& err, bool quiet = false);

}  // namespace logsch
