#include "tpdicke/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "tpdicke/effective.hpp"
#include "tpdicke/operators.hpp"

namespace tpdicke {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

double max_abs(const SparseComplex& m) {
    double out = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseComplex::InnerIterator it(m, k); it; ++it)
            out = std::max(out, std::abs(it.value()));
    return out;
}

/// slope of the least-squares line through (x, y)
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int m = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

CheckResult check_parity(VerifyContext&) {
    CheckResult res{"parity"};
    double worst_comm = 0.0, worst_z4 = 0.0, worst_spec = 0.0;
    for (int n_atoms : {1, 2, 5, 20}) {
        for (int n_max : {4, 64}) {
            for (double g : {0.0, 0.3}) {
                ModelParams p{1.0, 0.5, g, n_atoms};
                TruncationSpec t;
                t.n_max = n_max;
                const SpinPhotonOperator h = assemble_hamiltonian(p, t);
                const SpinPhotonOperator pi = parity_operator(n_atoms, n_max);
                const SparseComplex comm = h.matrix() * pi.matrix() - pi.matrix() * h.matrix();
                worst_comm = std::max(worst_comm, max_abs(comm));

                SparseComplex pi4 = pi.matrix() * pi.matrix();
                pi4 = SparseComplex(pi4 * pi4);
                SparseComplex ident(pi.dim(), pi.dim());
                ident.setIdentity();
                worst_z4 = std::max(worst_z4, max_abs(SparseComplex(pi4 - ident)));

                // diagonal operator: its spectrum is its diagonal
                for (Eigen::Index i = 0; i < pi.dim(); ++i) {
                    const std::complex<double> v = pi.matrix().coeff(i, i);
                    double best = 1e300;
                    for (const std::complex<double> target :
                         {std::complex<double>(1, 0), std::complex<double>(-1, 0),
                          std::complex<double>(0, 1), std::complex<double>(0, -1)})
                        best = std::min(best, std::abs(v - target));
                    worst_spec = std::max(worst_spec, best);
                }
            }
        }
    }
    res.passed = worst_comm <= 1e-12 && worst_z4 <= 1e-12 && worst_spec <= 1e-12;
    res.detail = "max |[H,Pi]| = " + fmt(worst_comm) + ", max |Pi^4 - I| = " + fmt(worst_z4) +
                 ", spectrum defect = " + fmt(worst_spec);
    return res;
}

CheckResult check_decoupled(VerifyContext&) {
    CheckResult res{"decoupled"};
    ModelParams p{1.0, 0.4, 0.0, 4};  // delta = 0.1
    const GroundStateSolution sol = converge_cutoff(p, TruncationSpec{});
    const double zeta = normal_phase(p).zeta;
    const double e_err = std::abs(sol.energy_levels[0] - (-0.2));
    const double jz_err = std::abs(sol.jz_per_atom - (-0.5));
    const double gap_err = std::abs(sol.gap - std::min(p.delta(), p.omega));
    res.passed = e_err <= 1e-12 && jz_err <= 1e-12 && gap_err <= 1e-10 && zeta == 0.0;
    res.detail = "|E0 + N*delta/2| = " + fmt(e_err) + ", |<Jz>/N + 1/2| = " + fmt(jz_err) +
                 ", |gap - min(delta,omega)| = " + fmt(gap_err) + ", zeta = " + fmt(zeta);
    return res;
}

CheckResult check_dense_oracle(VerifyContext&) {
    CheckResult res{"dense_oracle"};
    std::mt19937 rng(20260823u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n_atoms = 1 + static_cast<int>(rng() % 8);
        int n_max = 500 / (n_atoms + 1) - 1;
        n_max -= n_max % 2;  // even cutoff keeps both photon parities balanced
        n_max = std::min(n_max, 120);
        ModelParams p{1.0, 0.1 + 0.8 * u01(rng), 0.05 + 0.4 * u01(rng), n_atoms};
        TruncationSpec t;
        t.n_max = n_max;
        const SparseReal h = assemble_hamiltonian(p, t).real();

        EigenOptions iterative;
        iterative.dense_threshold = 0;  // force the Krylov path
        EigenOptions dense;
        dense.dense_threshold = h.rows();
        const EigenPairs a = lowest_eigenpairs(h, iterative);
        const EigenPairs b = lowest_eigenpairs(h, dense);
        worst = std::max(worst, (a.values - b.values).cwiseAbs().maxCoeff());
    }
    res.passed = worst <= 1e-10;
    res.detail = "max |E_krylov - E_dense| over 20 instances = " + fmt(worst);
    return res;
}

CheckResult check_phase_diagram(VerifyContext& ctx) {
    CheckResult res{"phase_diagram"};
    const std::vector<SweepRow>& rows = ctx.reference_sweep();
    double worst_eg = 0.0, worst_jz = 0.0;
    int compared = 0, failed_rows = 0;
    for (const SweepRow& row : rows) {
        if (!row.solution || !row.solution->converged) {
            ++failed_rows;
            continue;
        }
        const ModelParams& p = row.params;
        const double gc = p.g_critical();
        if (std::abs(p.g - gc) < 0.05 * gc) continue;  // transition window excluded
        const double eg_an = p.g < gc ? normal_phase(p).eg1 : superradiant_phase(p).eg2;
        const double jz_an = jz_thermo(p);
        worst_eg = std::max(worst_eg,
                            std::abs(row.solution->energy_levels[0] - eg_an) / p.omega1);
        worst_jz = std::max(worst_jz, std::abs(row.solution->jz_per_atom - jz_an));
        ++compared;
    }
    res.passed = failed_rows == 0 && compared >= 30 && worst_eg <= 0.01 && worst_jz <= 0.02;
    res.detail = "max |Eg/omega1| gap = " + fmt(worst_eg) + " (<= 0.01), max |<Jz>/N| gap = " +
                 fmt(worst_jz) + " (<= 0.02), " + std::to_string(compared) + " couplings compared";
    return res;
}

CheckResult check_critical_couplings(VerifyContext& ctx) {
    CheckResult res{"critical_couplings"};
    const CriticalPoints cp = critical_couplings(1.0, 0.5);
    const double gc_err = std::abs(cp.g_c - std::sqrt(0.5) / 2.0);
    const double gcol_err = std::abs(cp.g_collapse - 0.5);

    // locate the transition from the numerical order parameter: first
    // crossing of <Jz>/N + 1/2 through 0.01, linearly interpolated
    const std::vector<SweepRow>& rows = ctx.reference_sweep();
    double g_cross = -1.0;
    double prev_g = 0.0, prev_dev = 0.0;
    bool have_prev = false;
    for (const SweepRow& row : rows) {
        if (!row.solution) continue;
        const double dev = row.solution->jz_per_atom + 0.5;
        if (have_prev && prev_dev < 0.01 && dev >= 0.01) {
            g_cross = prev_g + (row.params.g - prev_g) * (0.01 - prev_dev) / (dev - prev_dev);
            break;
        }
        prev_g = row.params.g;
        prev_dev = dev;
        have_prev = true;
    }
    const double loc_err = g_cross > 0.0 ? std::abs(g_cross - cp.g_c) : 1e300;
    res.passed = gc_err <= 1e-15 && gcol_err <= 1e-15 && loc_err <= 0.02 * cp.g_c;
    res.detail = "g_c = " + fmt(cp.g_c) + ", numerical crossing at g = " + fmt(g_cross) +
                 ", |offset| = " + fmt(loc_err) + " (<= " + fmt(0.02 * cp.g_c) + ")";
    return res;
}

CheckResult check_gap_exponent(VerifyContext&) {
    CheckResult res{"gap_exponent"};
    ModelParams base{1.0, 0.5, 0.0, 100};
    const double gc = base.g_critical();

    std::vector<double> lx1, ly1, lx2, ly2;
    for (int i = 0; i < 10; ++i) {
        const double delta = gc * std::pow(10.0, -6.0 + 2.0 * i / 9.0);
        ModelParams below = base;
        below.g = gc - delta;
        lx1.push_back(std::log(delta));
        ly1.push_back(std::log(normal_phase(below).epsilon1));
        ModelParams above = base;
        above.g = gc + delta;
        lx2.push_back(std::log(delta));
        ly2.push_back(std::log(superradiant_phase(above).epsilon2));
    }
    const double s1 = lsq_slope(lx1, ly1);
    const double s2 = lsq_slope(lx2, ly2);
    res.passed = std::abs(s1 - 0.5) <= 0.005 && std::abs(s2 - 0.5) <= 0.05;
    res.detail = "normal-side slope = " + fmt(s1) + " (0.5 +- 0.005), super-radiant-side slope = " +
                 fmt(s2) + " (0.5 +- 0.05)";
    return res;
}

/// constant of a least-squares fit a + b n^{-2/3} + c n^{-4/3}
double extrapolate_23(const std::vector<std::pair<int, double>>& data) {
    const int m = static_cast<int>(data.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        const double n = data[i].first;
        a(i, 0) = 1.0;
        a(i, 1) = std::pow(n, -2.0 / 3.0);
        a(i, 2) = std::pow(n, -4.0 / 3.0);
        y[i] = data[i].second;
    }
    return a.colPivHouseholderQr().solve(y)[0];
}

CheckResult check_critical_limits(VerifyContext& ctx) {
    CheckResult res{"critical_limits"};
    std::vector<std::pair<int, double>> eg, jz, jy2;
    for (const auto& [n, sol] : ctx.critical_series()) {
        eg.push_back({n, sol.energy_levels[0] / 0.5});
        jz.push_back({n, sol.jz_per_atom});
        jy2.push_back({n, sol.jy2_per_atom2});
    }
    const double eg_inf = extrapolate_23(eg);
    const double jz_inf = extrapolate_23(jz);
    const double jy2_inf = extrapolate_23(jy2);
    res.passed = std::abs(eg_inf + 0.5) <= 0.01 && std::abs(jz_inf + 0.5) <= 0.01 &&
                 std::abs(jy2_inf) <= 0.01;
    res.detail = "Eg/omega1 -> " + fmt(eg_inf) + ", <Jz>/N -> " + fmt(jz_inf) +
                 ", <Jy^2>/N^2 -> " + fmt(jy2_inf) + " (targets -1/2, -1/2, 0, each +- 0.01)";
    return res;
}

CheckResult check_critical_exponents(VerifyContext& ctx) {
    CheckResult res{"critical_exponents"};
    double slopes[3];
    const Quantity quantities[3] = {Quantity::energy, Quantity::jz, Quantity::jy2};
    for (int q = 0; q < 3; ++q) {
        std::vector<double> lx, ly;
        for (const auto& [n, sol] : ctx.critical_series()) {
            ModelParams p{1.0, 0.5, 0.0, n};
            p.g = p.g_critical();
            const double raw = exponent_raw_value(quantities[q], sol, p);
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(std::abs(raw)));
        }
        slopes[q] = lsq_slope(lx, ly);
    }
    res.passed = std::abs(slopes[0] + 4.0 / 3.0) <= 0.1 && std::abs(slopes[1] + 2.0 / 3.0) <= 0.05 &&
                 std::abs(slopes[2] + 4.0 / 3.0) <= 0.1;
    res.detail = "energy slope = " + fmt(slopes[0]) + " (-4/3 +- 0.1), jz slope = " +
                 fmt(slopes[1]) + " (-2/3 +- 0.05), jy2 slope = " + fmt(slopes[2]) +
                 " (-4/3 +- 0.1)";
    return res;
}

CheckResult check_collapse(VerifyContext&) {
    CheckResult res{"collapse"};
    ModelParams base{1.0, 0.5, 0.0, 1};
    std::vector<double> grid;
    for (int i = 0; i < 60; ++i) grid.push_back(0.02 + (0.48 - 0.02) * i / 59.0);
    const std::vector<Quantity> qs = {Quantity::energy, Quantity::jz, Quantity::jy2};
    const std::vector<CollapseResult> results =
        build_collapse_multi({5, 10, 30, 50, 100}, grid, qs, base);
    res.passed = true;
    for (size_t q = 0; q < qs.size(); ++q) {
        if (q) res.detail += ", ";
        res.detail += quantity_name(qs[q]) + " spread = " + fmt(results[q].spread);
        if (results[q].spread > 0.1) res.passed = false;
    }
    res.detail += " (each <= 0.1 over eta in [-2, 2])";
    return res;
}

CheckResult check_universal_solver(VerifyContext&) {
    CheckResult res{"universal_solver"};
    // harmonic limit: k = 0 has closed forms E0 = sqrt(2 eta)/2,
    // X = 1/(2 sqrt(2 eta)), P = sqrt(2 eta)/2
    QuarticWellSpec harmonic;
    harmonic.quartic_coeff = 0.0;
    double worst_harm = 0.0;
    for (double eta : {0.5, 2.0}) {
        const ScalingPoint pt = universal_point(harmonic, eta);
        if (!pt.resolved) {
            res.detail = "harmonic point eta = " + fmt(eta) + " unresolved";
            return res;
        }
        const double w = std::sqrt(2.0 * eta);
        worst_harm = std::max({worst_harm, std::abs(pt.e0 - w / 2.0) / (w / 2.0),
                               std::abs(pt.x2 - 0.5 / w) / (0.5 / w),
                               std::abs(pt.p2 - w / 2.0) / (w / 2.0)});
    }

    const QuarticWellSpec spec = QuarticWellSpec::for_params(ModelParams{1.0, 0.5, 0.0, 1});
    double worst_virial = 0.0;
    int resolved = 0;
    bool all_certified = true;
    for (double eta : {0.45, 0.5, 0.7, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const ScalingPoint pt = universal_point(spec, eta);
        if (!pt.resolved) {
            all_certified = false;
            continue;
        }
        ++resolved;
        const double virial =
            std::abs(pt.p2 - (2.0 * eta * pt.x2 - 4.0 * spec.quartic_coeff * pt.x4));
        worst_virial = std::max(worst_virial, virial / std::max(1.0, std::abs(pt.e0)));
        if (pt.grid_points > spec.max_grid_points) all_certified = false;
    }
    res.passed = worst_harm <= 1e-6 && worst_virial <= 1e-5 && all_certified && resolved == 9;
    res.detail = "harmonic max rel err = " + fmt(worst_harm) + " (<= 1e-6), virial residual = " +
                 fmt(worst_virial) + " (<= 1e-5), " + std::to_string(resolved) +
                 "/9 points resolved with certified grids";
    return res;
}

using CheckFn = CheckResult (*)(VerifyContext&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
    static const std::vector<std::pair<std::string, CheckFn>> r = {
        {"parity", check_parity},
        {"decoupled", check_decoupled},
        {"dense_oracle", check_dense_oracle},
        {"phase_diagram", check_phase_diagram},
        {"critical_couplings", check_critical_couplings},
        {"gap_exponent", check_gap_exponent},
        {"critical_limits", check_critical_limits},
        {"critical_exponents", check_critical_exponents},
        {"collapse", check_collapse},
        {"universal_solver", check_universal_solver},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

const std::vector<SweepRow>& VerifyContext::reference_sweep() {
    if (!sweep_) {
        std::vector<ModelParams> grid;
        for (int i = 1; i <= 40; ++i) grid.push_back({1.0, 0.5, (i - 0.5) * 0.5 / 40.0, 100});
        sweep_ = std::make_unique<std::vector<SweepRow>>(sweep(grid, TruncationSpec{}));
    }
    return *sweep_;
}

const std::vector<std::pair<int, GroundStateSolution>>& VerifyContext::critical_series() {
    if (!series_) {
        auto built = std::make_unique<std::vector<std::pair<int, GroundStateSolution>>>();
        TruncationSpec t;
        t.n_max = 32;
        t.rel_tol = 1e-10;
        for (int n : {20, 40, 80, 160}) {
            ModelParams p{1.0, 0.5, 0.0, n};
            p.g = p.g_critical();
            built->push_back({n, converge_cutoff(p, t)});
        }
        series_ = std::move(built);  // cache only a complete series
    }
    return *series_;
}

CheckResult run_check(const std::string& name, VerifyContext& ctx) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) {
            const auto t0 = std::chrono::steady_clock::now();
            CheckResult res = fn(ctx);
            res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return res;
        }
    }
    throw DomainError("unknown check '" + name + "'; known: parity, decoupled, dense_oracle, "
                      "phase_diagram, critical_couplings, gap_exponent, critical_limits, critical_exponents, "
                      "collapse, universal_solver");
}

std::vector<CheckResult> run_checks(const std::vector<std::string>& only) {
    VerifyContext ctx;
    std::vector<CheckResult> out;
    if (only.empty()) {
        for (const std::string& name : check_names()) out.push_back(run_check(name, ctx));
    } else {
        for (const std::string& name : only) out.push_back(run_check(name, ctx));
    }
    return out;
}

}  // namespace tpdicke
