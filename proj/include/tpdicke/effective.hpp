#pragma once

#include "tpdicke/params.hpp"

namespace tpdicke {

/// Closed-form results of the low-energy effective theory obtained from the
/// Holstein-Primakoff expansion plus Schrieffer-Wolff elimination of the
/// block-off-diagonal couplings, for both phases of the model.

/// Normal phase (g < g_c): excitation energy, ground energy including the
/// 1/N and 1/N^2 corrections, and the squeezing parameter of the atomic
/// b-mode.
struct NormalPhaseResult {
    double epsilon1;  // excitation energy, (omega1/N) sqrt(1 - g'^2)
    double eg1;       // ground energy
    double zeta;      // b-mode squeezing parameter, 0 at g = 0
};

NormalPhaseResult normal_phase(const ModelParams& params);

/// Displacement of the atomic mode in the super-radiant phase,
/// beta in (0, 1/sqrt(2)] for g_c < g < g_collapse (positive root; the
/// -beta solution gives an identical effective Hamiltonian, so the
/// spectrum is doubly degenerate).
double displacement_beta(const ModelParams& params);

/// Derived constants of the super-radiant effective Hamiltonian, computed
/// in dependency order beta -> beta1, beta2, beta0, lambda_beta -> r ->
/// lambda1..3 -> r1.
struct SuperradiantConstants {
    double beta;
    double beta1;        // sqrt(1 - beta^2)
    double beta2;        // 1 - beta^2/(1 - beta^2)
    double beta0;        // omega1 beta^2 - (omega1 + omega)/2
    double lambda_beta;  // 4 g beta beta1, < omega
    double r;            // field squeezing, (1/4) ln((w - lb)/(w + lb)) <= 0
    double lambda1;      // 2 g beta1 beta2 cosh 2r
    double lambda2;      // g beta cosh(2r) / beta1
    double lambda3;      // 2 g beta sinh(2r) / beta1
    double r1;           // d-mode squeezing
    bool doubly_degenerate = true;  // +-beta give the same spectrum
};

SuperradiantConstants superradiant_constants(const ModelParams& params);

/// Super-radiant phase (g_c < g < g_collapse).  When drop_1overN_in_root
/// is set, the lambda3/N piece inside the radical's denominator is dropped
/// (thermodynamic-limit variant); default keeps it.
struct SuperradiantResult {
    double epsilon2;  // excitation energy, -> 0 as g -> g_c+
    double eg2;       // ground energy
};

SuperradiantResult superradiant_phase(const ModelParams& params,
                                      bool drop_1overN_in_root = false);

/// Thermodynamic-limit pseudospin per atom: -1/2 for g <= g_c,
/// beta^2 - 1/2 above.
double jz_thermo(const ModelParams& params);

/// Leading gap asymptote near the critical point,
/// (omega1/N) sqrt(2/g_c) (g_c - g)^{1/2}.
double gap_asymptote(const ModelParams& params, double g);

}  // namespace tpdicke
