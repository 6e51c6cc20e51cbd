#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tpdicke/fss.hpp"
#include "tpdicke/params.hpp"
#include "tpdicke/solver.hpp"

namespace tpdicke {

/// Outcome of one acceptance check.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;   // numbers behind the verdict
    double seconds = 0.0;
};

/// Registered check names, in canonical run order:
///   parity, decoupled, dense_oracle, phase_diagram, critical_couplings,
///   gap_exponent, critical_limits, critical_exponents, collapse,
///   universal_solver
const std::vector<std::string>& check_names();

/// Expensive intermediate results shared across checks (the N=100 coupling
/// sweep feeds both the analytic/numeric comparison and the critical-point
/// location; the critical-size series feeds both limits and exponents).
class VerifyContext {
public:
    const std::vector<SweepRow>& reference_sweep();
    const std::vector<std::pair<int, GroundStateSolution>>& critical_series();

private:
    std::unique_ptr<std::vector<SweepRow>> sweep_;
    std::unique_ptr<std::vector<std::pair<int, GroundStateSolution>>> series_;
};

/// Runs one named check; throws DomainError for unknown names.
CheckResult run_check(const std::string& name, VerifyContext& ctx);

/// Runs the named checks (all when `only` is empty) sharing one context.
std::vector<CheckResult> run_checks(const std::vector<std::string>& only = {});

}  // namespace tpdicke
