#include "tpdicke/fss.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace tpdicke {

double scaling_variable(const ModelParams& params) {
    params.validate();
    const double gp = params.g_prime();
    return params.omega1 * params.omega1 / 2.0 * (1.0 - gp * gp) *
           std::pow(static_cast<double>(params.n_atoms), 2.0 / 3.0);
}

double coupling_for_eta(const ModelParams& params, double eta) {
    params.validate();
    const double n23 = std::pow(static_cast<double>(params.n_atoms), 2.0 / 3.0);
    const double gp2 = 1.0 - 2.0 * eta / (params.omega1 * params.omega1 * n23);
    if (gp2 < 0.0)
        throw DomainError("coupling_for_eta: eta not reachable at this size (g'^2 < 0)");
    const double g = params.g_critical() * std::sqrt(gp2);
    if (g >= params.g_collapse())
        throw DomainError("coupling_for_eta: eta requires g beyond the collapse point");
    return g;
}

QuarticWellSpec QuarticWellSpec::for_params(const ModelParams& params) {
    QuarticWellSpec spec;
    spec.quartic_coeff = std::pow(params.omega1, 4) / (4.0 * params.omega);
    return spec;
}

namespace {

struct BoxState {
    double e0, x2, p2, x4;
    double edge_ratio;
    int state_index;
};

/// Lowest hard-wall eigenstate with boundary amplitude below edge_tol,
/// searching the six lowest states (wall-localized states can undercut the
/// metastable one when the wall sits in the downhill region).
bool solve_box(double eta, double k, double half_width, int m, double edge_tol, BoxState& out) {
    const int n_low = std::min(6, m);
    const double h = 2.0 * half_width / (m + 1);
    std::vector<double> diag(m), off(std::max(0, m - 1), -0.5 / (h * h));
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) {
        x[i] = -half_width + (i + 1) * h;
        diag[i] = 1.0 / (h * h) + eta * x[i] * x[i] - k * std::pow(x[i], 4);
    }

    std::vector<double> w(m), z(static_cast<size_t>(m) * n_low);
    std::vector<lapack_int> isuppz(2 * std::max(1, n_low));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', m, diag.data(), off.data(),
                                           0.0, 0.0, 1, n_low, 0.0, &found, w.data(), z.data(), m,
                                           isuppz.data());
    if (info != 0 || found < 1) return false;

    for (int i = 0; i < found; ++i) {
        const double* psi = z.data() + static_cast<size_t>(i) * m;
        double maxsq = 0.0;
        for (int r = 0; r < m; ++r) maxsq = std::max(maxsq, psi[r] * psi[r]);
        const double edge = std::max(psi[0] * psi[0], psi[m - 1] * psi[m - 1]) / maxsq;
        if (edge > edge_tol) continue;

        double norm = 0.0, x2 = 0.0, x4 = 0.0, p2 = 0.0;
        for (int r = 0; r < m; ++r) {
            const double p = psi[r] * psi[r];
            norm += p;
            x2 += x[r] * x[r] * p;
            x4 += std::pow(x[r], 4) * p;
        }
        for (int r = 0; r + 1 < m; ++r) {
            const double d = (psi[r + 1] - psi[r]) / h;
            p2 += d * d;
        }
        // walls contribute (psi[0]/h)^2 and (psi[m-1]/h)^2 derivative cells
        p2 += (psi[0] / h) * (psi[0] / h) + (psi[m - 1] / h) * (psi[m - 1] / h);
        out = {w[i], x2 / norm, p2 / norm, x4 / norm, edge, i};
        return true;
    }
    return false;
}

std::vector<double> candidate_walls(double eta, const QuarticWellSpec& spec) {
    if (spec.box_half_width > 0.0) return {spec.box_half_width};
    const double k = spec.quartic_coeff;
    if (k == 0.0) {
        // harmonic: a few oscillator widths suffice
        return {12.0 / std::pow(2.0 * std::max(eta, 0.05), 0.25)};
    }
    const double x_barrier = std::sqrt(std::max(eta, spec.eta_floor) / (2.0 * k));
    const double cap = 14.0 / std::pow(2.0 * std::max(eta, 0.25), 0.25);
    std::set<double> walls;
    for (double mult : {0.9, 1.1, 1.3, 1.5, 1.8, 2.2}) walls.insert(std::min(mult * x_barrier, cap));
    return {walls.begin(), walls.end()};
}

}  // namespace

ScalingPoint universal_point(const QuarticWellSpec& spec, double eta) {
    spec.validate();
    const double k = spec.quartic_coeff;

    ScalingPoint best;
    best.eta = eta;
    for (double half_width : candidate_walls(eta, spec)) {
        BoxState state{};
        bool have_prev = false;
        double prev_e0 = 0.0;
        bool converged = false;
        int m = spec.grid_points;
        for (; m <= spec.max_grid_points; m *= 2) {
            if (!solve_box(eta, k, half_width, m, spec.edge_tol, state)) break;
            if (have_prev &&
                std::abs(state.e0 - prev_e0) <= spec.grid_tol * std::max(1.0, std::abs(state.e0))) {
                converged = true;
                break;
            }
            have_prev = true;
            prev_e0 = state.e0;
        }
        if (!converged) continue;

        const double virial = state.p2 - (2.0 * eta * state.x2 - 4.0 * k * state.x4);
        if (std::abs(virial) > spec.virial_tol * std::max(1.0, std::abs(state.e0))) continue;

        if (!best.resolved || state.edge_ratio < best.edge_ratio) {
            best.resolved = true;
            best.e0 = state.e0;
            best.x2 = state.x2;
            best.p2 = state.p2;
            best.x4 = state.x4;
            best.edge_ratio = state.edge_ratio;
            best.virial_residual = virial;
            best.box_half_width = half_width;
            best.grid_points = m;
        }
    }
    return best;
}

std::vector<ScalingPoint> universal_functions(const QuarticWellSpec& spec,
                                              const std::vector<double>& eta_grid) {
    std::vector<ScalingPoint> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) out.push_back(universal_point(spec, eta));
    return out;
}

AnalyticObservables analytic_finite_size(const ModelParams& params, const ScalingPoint& point) {
    params.validate();
    if (!point.resolved)
        throw DomainError("analytic_finite_size: unresolved scaling point (metastability breakdown)");
    if (std::abs(point.eta - scaling_variable(params)) > 1e-9)
        throw DomainError("analytic_finite_size: point.eta does not match scaling_variable(params)");
    const double n = params.n_atoms;
    const double w1 = params.omega1;
    const double n23 = std::pow(n, 2.0 / 3.0);
    const double n43 = std::pow(n, 4.0 / 3.0);
    AnalyticObservables out;
    out.eg = -w1 / 2.0 - w1 / (2.0 * n) + point.e0 / n43;
    out.jz_per_atom = -0.5 + w1 / 2.0 * point.x2 / n23 + point.p2 / (2.0 * w1) / n43;
    out.jy2_per_atom2 = point.p2 / (2.0 * w1) / n43;
    return out;
}

Quantity quantity_from_name(const std::string& name) {
    if (name == "energy") return Quantity::energy;
    if (name == "jz") return Quantity::jz;
    if (name == "jy2") return Quantity::jy2;
    throw DomainError("unknown quantity '" + name + "' (expected energy, jz or jy2)");
}

std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::energy: return "energy";
        case Quantity::jz: return "jz";
        case Quantity::jy2: return "jy2";
    }
    return "?";
}

double singular_part(Quantity quantity, double value, const ModelParams& params,
                     EnergyRegularConvention conv) {
    params.validate();
    const double n = params.n_atoms;
    const double w1 = params.omega1;
    const double n23 = std::pow(n, 2.0 / 3.0);
    const double n43 = std::pow(n, 4.0 / 3.0);
    switch (quantity) {
        case Quantity::energy: {
            double regular;
            if (conv == EnergyRegularConvention::full_constant)
                regular = -w1 / 2.0 - w1 / (2.0 * n) -
                          w1 * params.g * params.g / (2.0 * n * n * params.omega * params.omega);
            else
                regular = -w1 / (2.0 * n) - w1 / (2.0 * n * n);
            return n43 * (value - regular);
        }
        case Quantity::jz:
            return n23 * (value + 0.5);
        case Quantity::jy2:
            return n43 * value;
    }
    throw DomainError("singular_part: unknown quantity tag");
}

namespace {

double pick_value(Quantity quantity, double eg, double jz, double jy2) {
    switch (quantity) {
        case Quantity::energy: return eg;
        case Quantity::jz: return jz;
        case Quantity::jy2: return jy2;
    }
    throw DomainError("unknown quantity tag");
}

void finish_collapse(CollapseResult& result, const CollapseOptions& opts) {
    // spread: fixed eta bins, linear interpolation within each covering curve
    double max_range = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    int bins_covered = 0;
    for (int b = 0; b < opts.bins; ++b) {
        const double eta = opts.window_lo + (opts.window_hi - opts.window_lo) * b / (opts.bins - 1);
        std::vector<double> vals;
        for (const CollapseCurve& c : result.curves) {
            if (c.points.size() < 2) continue;
            if (eta < c.points.front().first || eta > c.points.back().first) continue;
            auto it = std::lower_bound(c.points.begin(), c.points.end(), std::make_pair(eta, -1e300));
            if (it == c.points.begin()) {
                vals.push_back(it->second);
            } else {
                const auto& [e1, v1] = *(it - 1);
                const auto& [e2, v2] = *it;
                vals.push_back(e2 == e1 ? v1 : v1 + (v2 - v1) * (eta - e1) / (e2 - e1));
            }
        }
        if (vals.size() < 2) continue;
        ++bins_covered;
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        max_range = std::max(max_range, *mx - *mn);
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
    }
    if (bins_covered < 2)
        throw DomainError("build_collapse: fewer than 2 eta bins covered by >= 2 curves");
    result.spread = (hi > lo) ? max_range / (hi - lo) : 0.0;
}

}  // namespace

std::vector<CollapseResult> build_collapse_multi(const std::vector<int>& n_list,
                                                 const std::vector<double>& g_grid,
                                                 const std::vector<Quantity>& quantities,
                                                 const ModelParams& base,
                                                 const CollapseOptions& opts) {
    if (n_list.size() < 2) throw DomainError("build_collapse: need at least 2 sizes");
    if (g_grid.empty()) throw DomainError("build_collapse: empty coupling grid");
    if (quantities.empty()) throw DomainError("build_collapse: no quantities requested");

    std::vector<CollapseResult> results(quantities.size());
    for (auto& r : results) {
        r.window_lo = opts.window_lo;
        r.window_hi = opts.window_hi;
        r.bins = opts.bins;
    }

    QuarticWellSpec well = QuarticWellSpec::for_params(base);
    for (int n : n_list) {
        std::vector<CollapseCurve> curves(quantities.size());
        for (size_t q = 0; q < quantities.size(); ++q) {
            curves[q].n_atoms = n;
            curves[q].quantity = quantities[q];
            curves[q].exponent_used = quantities[q] == Quantity::jz ? 2.0 / 3.0 : 4.0 / 3.0;
        }
        for (double g : g_grid) {
            ModelParams p = base;
            p.n_atoms = n;
            p.g = g;
            if (g >= p.g_collapse()) continue;
            const double eta = scaling_variable(p);
            double eg, jz, jy2;
            if (opts.source == CollapseSource::exact_diag) {
                try {
                    const GroundStateSolution sol = converge_cutoff(p, opts.trunc);
                    if (!sol.converged) continue;
                    eg = sol.energy_levels[0];
                    jz = sol.jz_per_atom;
                    jy2 = sol.jy2_per_atom2;
                } catch (const std::exception&) {
                    continue;  // failed cells are skipped, not fatal
                }
            } else {
                const ScalingPoint pt = universal_point(well, eta);
                if (!pt.resolved) continue;
                const AnalyticObservables obs = analytic_finite_size(p, pt);
                eg = obs.eg;
                jz = obs.jz_per_atom;
                jy2 = obs.jy2_per_atom2;
            }
            for (size_t q = 0; q < quantities.size(); ++q) {
                const double value = pick_value(quantities[q], eg, jz, jy2);
                curves[q].points.push_back(
                    {eta, singular_part(quantities[q], value, p, opts.energy_conv)});
            }
        }
        for (size_t q = 0; q < quantities.size(); ++q) {
            std::sort(curves[q].points.begin(), curves[q].points.end());
            results[q].curves.push_back(std::move(curves[q]));
        }
    }
    for (auto& r : results) finish_collapse(r, opts);
    return results;
}

CollapseResult build_collapse(const std::vector<int>& n_list, const std::vector<double>& g_grid,
                              Quantity quantity, const ModelParams& base,
                              const CollapseOptions& opts) {
    return build_collapse_multi(n_list, g_grid, {quantity}, base, opts).front();
}

double exponent_raw_value(Quantity quantity, const GroundStateSolution& sol,
                          const ModelParams& params) {
    const double n = params.n_atoms;
    const double w1 = params.omega1;
    switch (quantity) {
        case Quantity::energy:
            return sol.energy_levels[0] + w1 / 2.0 + w1 / (2.0 * n) +
                   w1 * params.g * params.g / (2.0 * n * n * params.omega * params.omega);
        case Quantity::jz:
            return sol.jz_per_atom + 0.5 + 1.0 / (2.0 * n);
        case Quantity::jy2:
            return sol.jy2_per_atom2;
    }
    throw DomainError("exponent_raw_value: unknown quantity tag");
}

ExponentFit fit_exponent(const std::vector<int>& n_list, const ModelParams& params_at_gc,
                         Quantity quantity, const TruncationSpec& trunc) {
    params_at_gc.validate();
    if (std::abs(params_at_gc.g - params_at_gc.g_critical()) >
        1e-12 * params_at_gc.g_critical())
        throw DomainError("fit_exponent: params must sit exactly at g = g_c");
    if (n_list.size() < 4) throw DomainError("fit_exponent: need at least 4 sizes");

    ExponentFit fit;
    std::vector<double> lx, ly;
    for (int n : n_list) {
        ModelParams p = params_at_gc;
        p.n_atoms = n;
        p.g = p.g_critical();  // keep g' = 1 exactly as N varies
        const GroundStateSolution sol = converge_cutoff(p, trunc);
        const double raw = exponent_raw_value(quantity, sol, p);
        if (!(std::abs(raw) > 0.0)) {
            fit.warnings.push_back("N=" + std::to_string(n) + ": non-positive |raw|, point dropped");
            continue;
        }
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(std::abs(raw)));
    }
    const int m = static_cast<int>(lx.size());
    if (m < 3) throw DomainError("fit_exponent: fewer than 3 usable points survive");
    fit.points_used = m;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = ly[i] - (intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.stderr = (m > 2) ? std::sqrt(ss / (m - 2) * m / denom) : 0.0;
    return fit;
}

}  // namespace tpdicke
