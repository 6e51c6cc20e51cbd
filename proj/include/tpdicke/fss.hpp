#pragma once

#include <string>
#include <vector>

#include "tpdicke/params.hpp"
#include "tpdicke/solver.hpp"

namespace tpdicke {

/// eta = (omega1^2/2)(1 - g'^2) N^{2/3}; positive in the normal phase,
/// negative in the super-radiant one, zero at g_c.
double scaling_variable(const ModelParams& params);

/// Coupling g >= 0 such that scaling_variable == eta at the given size,
/// or a DomainError when eta is not reachable below the collapse point.
double coupling_for_eta(const ModelParams& params, double eta);

/// Schroedinger problem for the universal scaling functions:
///   [-(1/2) d^2/dx^2 + eta x^2 - k x^4] phi = E0(eta) phi
/// on [-L, L] with hard walls.  The quartic coefficient is frozen at
/// g' = 1, k = omega1^4/(4 omega), so the functions depend on eta alone.
struct QuarticWellSpec {
    double quartic_coeff = 0.015625;  // omega1^4/(4 omega) at omega1 = 0.5
    double box_half_width = 0.0;      // > 0 forces a wall position; 0 = automatic
    int grid_points = 1000;           // initial interior grid size, doubled to convergence
    int max_grid_points = 64000;
    double grid_tol = 2.5e-7;         // |dE0| per grid doubling, relative to max(1,|E0|)
    double eta_floor = 0.5;           // wall-placement floor for eta <= 0
    double edge_tol = 1e-8;           // boundary amplitude^2 / max amplitude^2
    double virial_tol = 1e-5;         // |P - (2 eta X - 4k <x^4>)|, relative to max(1,|E0|)

    static QuarticWellSpec for_params(const ModelParams& params);

    void validate() const {
        if (grid_points < 500) throw DomainError("QuarticWellSpec: grid_points must be >= 500");
        if (grid_tol <= 0.0 || edge_tol <= 0.0) throw DomainError("QuarticWellSpec: tolerances must be positive");
    }
};

/// One sample of the universal functions.  Unresolved points (no certified
/// metastable state inside the configured limits) carry resolved = false
/// and are never reported silently as numbers.
struct ScalingPoint {
    double eta = 0.0;
    double e0 = 0.0;  // E0(eta)
    double x2 = 0.0;  // X(eta) = <x~^2>
    double p2 = 0.0;  // P(eta) = <p~^2>
    double x4 = 0.0;  // <x~^4>, used by the virial identity
    bool resolved = false;
    double box_half_width = 0.0;
    int grid_points = 0;
    double edge_ratio = 1.0;       // boundary amplitude^2 / max amplitude^2
    double virial_residual = 0.0;  // P - (2 eta X - 4 k <x^4>)
};

ScalingPoint universal_point(const QuarticWellSpec& spec, double eta);
std::vector<ScalingPoint> universal_functions(const QuarticWellSpec& spec,
                                              const std::vector<double>& eta_grid);

/// Analytic finite-N predictions built from a resolved ScalingPoint:
///   E_g      = -w1/2 - w1/(2N) + N^{-4/3} E0
///   <Jz>/N   = -1/2 + (w1/2) N^{-2/3} X + (1/(2 w1)) N^{-4/3} P
///   <Jy^2>/N^2 = (1/(2 w1)) N^{-4/3} P
struct AnalyticObservables {
    double eg;
    double jz_per_atom;
    double jy2_per_atom2;
};

AnalyticObservables analytic_finite_size(const ModelParams& params, const ScalingPoint& point);

enum class Quantity { energy, jz, jy2 };

Quantity quantity_from_name(const std::string& name);
std::string quantity_name(Quantity q);

/// Which regular part to subtract from the ground-state energy.  The
/// default keeps the full constant including the g-dependent 1/N^2 term;
/// the alternative uses the shorter g-independent expression quoted with
/// the collapse figures.
enum class EnergyRegularConvention { full_constant, figure_caption };

/// Singular (collapsing) part of a finite-N observable:
///   energy -> N^{4/3} (E_g - regular part)
///   jz     -> N^{2/3} (<Jz>/N + 1/2)
///   jy2    -> N^{4/3} <Jy^2>/N^2
double singular_part(Quantity quantity, double value, const ModelParams& params,
                     EnergyRegularConvention conv = EnergyRegularConvention::full_constant);

enum class CollapseSource { exact_diag, analytic };

struct CollapseCurve {
    int n_atoms = 0;
    Quantity quantity = Quantity::energy;
    std::vector<std::pair<double, double>> points;  // (eta, rescaled), eta ascending
    double exponent_used = 0.0;
};

struct CollapseResult {
    std::vector<CollapseCurve> curves;
    double spread = 0.0;       // max bin range across sizes / data range
    double window_lo = -2.0;   // eta window over which the spread is measured
    double window_hi = 2.0;
    int bins = 41;
};

struct CollapseOptions {
    CollapseSource source = CollapseSource::exact_diag;
    double window_lo = -2.0;
    double window_hi = 2.0;
    int bins = 41;
    TruncationSpec trunc{};                 // ED source
    EnergyRegularConvention energy_conv = EnergyRegularConvention::full_constant;
};

/// Builds one rescaled curve per size over the coupling grid and measures
/// the collapse spread on a fixed eta binning (linear interpolation within
/// each curve; bins covered by fewer than two curves are skipped).
CollapseResult build_collapse(const std::vector<int>& n_list, const std::vector<double>& g_grid,
                              Quantity quantity, const ModelParams& base,
                              const CollapseOptions& opts = {});

/// Same, for several quantities at once; the underlying (N, g) solves are
/// shared, so this costs one sweep instead of one per quantity.
std::vector<CollapseResult> build_collapse_multi(const std::vector<int>& n_list,
                                                 const std::vector<double>& g_grid,
                                                 const std::vector<Quantity>& quantities,
                                                 const ModelParams& base,
                                                 const CollapseOptions& opts = {});

struct ExponentFit {
    double slope = 0.0;
    double stderr = 0.0;
    int points_used = 0;
    std::vector<std::string> warnings;
};

/// Least-squares slope of log|raw| vs log N at g = g_c, where raw is the
/// observable minus its thermodynamic limit and known regular 1/N terms:
///   energy: E_g + w1/2 + w1/(2N) + w1 g^2/(2 N^2 w^2)
///   jz:     <Jz>/N + 1/2 + 1/(2N)   (the -1/(2N) comes from normal-ordering
///           b^dag b in the Holstein-Primakoff map; leaving it in biases the
///           fitted slope well outside the expected -2/3 at these sizes)
///   jy2:    <Jy^2>/N^2
double exponent_raw_value(Quantity quantity, const GroundStateSolution& sol,
                          const ModelParams& params);

ExponentFit fit_exponent(const std::vector<int>& n_list, const ModelParams& params_at_gc,
                         Quantity quantity, const TruncationSpec& trunc = {});

}  // namespace tpdicke
