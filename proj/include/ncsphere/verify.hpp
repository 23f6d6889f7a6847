#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncsphere/psi.hpp"

namespace ncsphere {

/**
 * One verified property: a named check with the parameter range it ran over,
 * a pass flag, and a residual (exact coefficient string, float, or a short
 * description of the first failure; "0" when clean).
 */
struct VerifyCheck {
    std::string suite;
    std::string property;
    std::string params;
    bool pass = false;
    std::string residual = "0";
};

struct VerifyOptions {
    // Suites to run (see verify_suite_names()); empty means all.
    std::vector<std::string> suites;
    // Seed for the randomized property checks; fixed seed, fixed report.
    unsigned seed = 12345;
    // Optional eps override: identities are re-checked after substituting
    // this value for eps.  eps = 0 switches the basis suite to the eps-free
    // derivative form of the adjoint action.
    std::optional<Rational> eps;
    // Optional extra evaluation point for the point-parameterized suites.
    std::optional<ParamPoint> point;
};

struct VerifyReport {
    unsigned seed = 0;
    std::vector<std::string> suites_run;
    std::vector<VerifyCheck> checks;

    int passed() const;
    int failed() const;
    bool all_pass() const { return failed() == 0; }

    // Machine-readable report: {"seed", "suites", "checks": [...], "passed",
    // "failed", "all_pass"}.
    std::string to_json() const;
    // One console line per suite plus a final verdict line.
    std::string summary() const;
};

// The canonical suite order: ring, weil, basis, orthogonality, norms, assoc,
// hahn, matrix, geometry, spinor, classical, structure.
const std::vector<std::string>& verify_suite_names();

// Run the selected suites and collect the report.  Unknown suite names throw
// InvalidLabel.
VerifyReport run_verify(const VerifyOptions& opt = {});

}  // namespace ncsphere
