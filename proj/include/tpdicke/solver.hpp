#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tpdicke/operators.hpp"
#include "tpdicke/params.hpp"

namespace tpdicke {

struct EigenOptions {
    int k = 4;                  // number of eigenpairs
    double tol = 1e-12;         // residual tolerance (relative to max(1,|E|))
    int max_subspace = 700;     // Lanczos subspace cap
    Eigen::Index dense_threshold = 2000;  // dense fallback below this dim
};

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
};

/// k smallest eigenpairs of a real symmetric sparse matrix.  Dense solve
/// for small dimensions, otherwise Lanczos with full reorthogonalization
/// and a fixed all-ones start vector (deterministic).  Throws SolverError
/// on non-convergence, with the worst residual attached.
EigenPairs lowest_eigenpairs(const SparseReal& h, const EigenOptions& opts = {});

/// Ground-state data at a certified photon cutoff.
struct GroundStateSolution {
    std::vector<double> energy_levels;  // lowest k, ascending, both parity blocks merged
    Eigen::VectorXd ground_vector;      // on the full spin (x) Fock basis
    double jz_per_atom = 0.0;
    double jy2_per_atom2 = 0.0;
    double photon_number = 0.0;
    double gap = 0.0;  // E1 - E0
    int n_max_used = 0;
    bool converged = false;
    double residual = 0.0;  // ||H v - E0 v||
};

/// Doubles n_max from trunc.n_max until the ground energy moves by less
/// than rel_tol * |E0| between cutoffs, or the ceiling is reached (result
/// flagged unconverged).  Refuses g >= g_collapse = omega/2.
GroundStateSolution converge_cutoff(const ModelParams& params, const TruncationSpec& trunc,
                                    const EigenOptions& eig = {});

/// <v|O|v> for a hermitian operator on the full space.
double expectation(const Eigen::VectorXd& v, const SparseReal& op);

/// One sweep row; `error` is set (and solution empty) when the solve failed.
struct SweepRow {
    ModelParams params;
    std::optional<GroundStateSolution> solution;
    std::string error;
};

/// Maps converge_cutoff over a parameter grid; per-row failures are
/// recorded and the sweep continues.  Row order follows the input grid.
std::vector<SweepRow> sweep(const std::vector<ModelParams>& grid, const TruncationSpec& trunc,
                            const EigenOptions& eig = {});

}  // namespace tpdicke
