#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpdicke/effective.hpp"
#include "tpdicke/fss.hpp"
#include "tpdicke/io.hpp"
#include "tpdicke/solver.hpp"
#include "tpdicke/verify.hpp"

namespace {

using namespace tpdicke;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;  // non-convergence, failed check, spread gate
constexpr int kExitDomain = 2;     // usage errors, invalid parameter regions

struct CommonFlags {
    double omega = 1.0;
    double omega1 = 0.5;
    double delta = 0.0;  // alternative to omega1; omega1 = N*delta when set
    double g = 0.0;
    int n_atoms = 100;
    int n_max = 16;
    double rel_tol = 1e-9;
    int n_max_ceiling = 4096;
    std::string out_dir = ".";
    std::string units = "omega";

    void add_to(CLI::App& cmd, bool with_g = true) {
        cmd.add_option("--omega", omega, "field frequency (energy unit)");
        cmd.add_option("--omega1", omega1, "scaled atom frequency N*delta");
        cmd.add_option("--delta", delta, "atomic frequency (overrides --omega1 as N*delta)");
        if (with_g) cmd.add_option("--g", g, "two-photon coupling");
        cmd.add_option("--N,--n-atoms", n_atoms, "atom count");
        cmd.add_option("--n-max", n_max, "initial photon cutoff");
        cmd.add_option("--rel-tol", rel_tol, "cutoff convergence tolerance on E0");
        cmd.add_option("--n-max-ceiling", n_max_ceiling, "hard cutoff bound");
        cmd.add_option("--out-dir", out_dir, "output directory");
        cmd.add_option("--units", units, "omega (default: energies / omega) or raw")
            ->check(CLI::IsMember({"omega", "raw"}));
    }

    ModelParams params() const {
        ModelParams p{omega, delta > 0.0 ? n_atoms * delta : omega1, g, n_atoms};
        p.validate();
        return p;
    }

    TruncationSpec trunc() const {
        TruncationSpec t{n_max, rel_tol, n_max_ceiling};
        t.validate();
        return t;
    }

    // energies are reported in units of omega unless --units raw
    double escale() const { return units == "raw" ? 1.0 : 1.0 / omega; }

    std::string path(const std::string& file) const { return out_dir + "/" + file; }
};

std::string nan_str() { return format_number(std::numeric_limits<double>::quiet_NaN()); }

/// analytic ground energy for the phase g sits in; empty when no closed
/// form applies (exactly at g_c)
std::optional<double> analytic_eg(const ModelParams& p) {
    try {
        return p.g < p.g_critical() ? normal_phase(p).eg1 : superradiant_phase(p).eg2;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

std::optional<double> analytic_epsilon(const ModelParams& p) {
    try {
        return p.g < p.g_critical() ? normal_phase(p).epsilon1 : superradiant_phase(p).epsilon2;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

int cmd_ground_state(const CommonFlags& flags) {
    const ModelParams p = flags.params();
    const GroundStateSolution sol = converge_cutoff(p, flags.trunc());
    const double es = flags.escale();

    const std::optional<double> eg_an = analytic_eg(p);
    const std::optional<double> eps_an = analytic_epsilon(p);
    std::optional<double> jz_an;
    try {
        jz_an = jz_thermo(p);
    } catch (const DomainError&) {
    }

    CsvWriter csv("ground_state.v1", {"quantity", "ed", "analytic"});
    csv.add_row({"eg", format_number(sol.energy_levels[0] * es),
                 eg_an ? format_number(*eg_an * es) : nan_str()});
    csv.add_row({"eg_over_omega1", format_number(sol.energy_levels[0] / p.omega1),
                 eg_an ? format_number(*eg_an / p.omega1) : nan_str()});
    csv.add_row({"jz_per_atom", format_number(sol.jz_per_atom),
                 jz_an ? format_number(*jz_an) : nan_str()});
    csv.add_row({"jy2_per_atom2", format_number(sol.jy2_per_atom2), nan_str()});
    csv.add_row({"gap", format_number(sol.gap * es),
                 eps_an ? format_number(*eps_an * es) : nan_str()});
    csv.add_row({"photon_number", format_number(sol.photon_number), nan_str()});
    csv.write(flags.path("ground_state.csv"));

    RunManifest manifest{"ground-state", p, flags.trunc(), {flags.path("ground_state.csv")}};
    manifest.write(flags.path("manifest.json"));

    std::printf("E0 = %s  (n_max = %d, converged = %s)\n",
                format_number(sol.energy_levels[0] * es).c_str(), sol.n_max_used,
                sol.converged ? "yes" : "no");
    if (!sol.converged) {
        std::fprintf(stderr, "cutoff ceiling reached before convergence\n");
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, double g_min, double g_max, int g_count) {
    if (g_count < 1) {
        std::fprintf(stderr, "sweep: empty coupling grid\n");
        return kExitDomain;
    }
    const ModelParams base = flags.params();
    std::vector<ModelParams> grid;
    for (int i = 0; i < g_count; ++i) {
        ModelParams p = base;
        p.g = g_count == 1 ? g_min : g_min + (g_max - g_min) * i / (g_count - 1);
        grid.push_back(p);
    }
    const std::vector<SweepRow> rows = sweep(grid, flags.trunc());
    const double es = flags.escale();

    CsvWriter csv("sweep.v1", {"g", "g_over_omega", "eg_ed", "eg_analytic", "jz_ed", "jz_analytic",
                               "jy2_ed", "gap_ed", "epsilon_analytic", "status"});
    for (const SweepRow& row : rows) {
        const ModelParams& p = row.params;
        const std::optional<double> eg_an = analytic_eg(p);
        const std::optional<double> eps_an = analytic_epsilon(p);
        std::optional<double> jz_an;
        try {
            jz_an = jz_thermo(p);
        } catch (const DomainError&) {
        }
        std::string status = "ok";
        if (!row.solution)
            status = "failed";
        else if (!row.solution->converged)
            status = "unconverged";
        const bool have = row.solution.has_value();
        csv.add_row({format_number(p.g), format_number(p.g / p.omega),
                     have ? format_number(row.solution->energy_levels[0] * es) : nan_str(),
                     eg_an ? format_number(*eg_an * es) : nan_str(),
                     have ? format_number(row.solution->jz_per_atom) : nan_str(),
                     jz_an ? format_number(*jz_an) : nan_str(),
                     have ? format_number(row.solution->jy2_per_atom2) : nan_str(),
                     have ? format_number(row.solution->gap * es) : nan_str(),
                     eps_an ? format_number(*eps_an * es) : nan_str(), status});
    }
    csv.write(flags.path("sweep.csv"));

    RunManifest manifest{"sweep", base, flags.trunc(), {flags.path("sweep.csv")}};
    manifest.write(flags.path("manifest.json"));
    std::printf("wrote %s (%d rows)\n", flags.path("sweep.csv").c_str(), g_count);
    return kExitOk;
}

int cmd_collapse(const CommonFlags& flags, const std::vector<int>& sizes,
                 const std::string& quantity, const std::string& source, double g_min,
                 double g_max, int g_count, double max_spread) {
    if (sizes.size() < 2) {
        std::fprintf(stderr, "collapse: need at least 2 sizes\n");
        return kExitDomain;
    }
    const ModelParams base = flags.params();
    std::vector<double> grid;
    for (int i = 0; i < g_count; ++i)
        grid.push_back(g_count == 1 ? g_min : g_min + (g_max - g_min) * i / (g_count - 1));

    std::vector<Quantity> qs;
    if (quantity == "all")
        qs = {Quantity::energy, Quantity::jz, Quantity::jy2};
    else
        qs = {quantity_from_name(quantity)};

    CollapseOptions opts;
    opts.source = source == "analytic" ? CollapseSource::analytic : CollapseSource::exact_diag;
    opts.trunc = flags.trunc();
    const std::vector<CollapseResult> results = build_collapse_multi(sizes, grid, qs, base, opts);

    std::vector<std::string> files;
    for (size_t q = 0; q < qs.size(); ++q) {
        for (const CollapseCurve& curve : results[q].curves) {
            CsvWriter csv("collapse.v1", {"eta", "rescaled"});
            for (const auto& [eta, val] : curve.points)
                csv.add_row({format_number(eta), format_number(val)});
            const std::string file = flags.path("collapse_" + quantity_name(qs[q]) + "_N" +
                                                std::to_string(curve.n_atoms) + ".csv");
            csv.write(file);
            files.push_back(file);
        }
        std::printf("%s spread = %s\n", quantity_name(qs[q]).c_str(),
                    format_number(results[q].spread).c_str());
    }

    // analytic universal curve over the same eta window, where resolved
    {
        const QuarticWellSpec spec = QuarticWellSpec::for_params(base);
        CsvWriter csv("universal.v1", {"eta", "e0", "x2", "p2", "resolved"});
        const int n_eta = 41;
        for (int i = 0; i < n_eta; ++i) {
            const double eta = -2.0 + 4.0 * i / (n_eta - 1);
            const ScalingPoint pt = universal_point(spec, eta);
            csv.add_row({format_number(eta), pt.resolved ? format_number(pt.e0) : nan_str(),
                         pt.resolved ? format_number(pt.x2) : nan_str(),
                         pt.resolved ? format_number(pt.p2) : nan_str(),
                         pt.resolved ? "1" : "0"});
        }
        const std::string file = flags.path("universal.csv");
        csv.write(file);
        files.push_back(file);
    }

    RunManifest manifest{"collapse", base, flags.trunc(), files};
    manifest.write(flags.path("manifest.json"));

    if (max_spread > 0.0)
        for (const CollapseResult& r : results)
            if (r.spread > max_spread) {
                std::fprintf(stderr, "collapse spread %s exceeds --max-spread %s\n",
                             format_number(r.spread).c_str(), format_number(max_spread).c_str());
                return kExitNumerical;
            }
    return kExitOk;
}

int cmd_verify(const std::vector<std::string>& only) {
    for (const std::string& name : only) {
        const auto& names = check_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            std::fprintf(stderr, "unknown check '%s'\n", name.c_str());
            return kExitDomain;
        }
    }
    const std::vector<CheckResult> results = run_checks(only);
    bool all_ok = true;
    for (const CheckResult& r : results) {
        std::printf("%-18s %s  [%.1fs]  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.seconds, r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-photon Dicke model: exact diagonalization, closed-form effective theory "
                 "and finite-size scaling"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    CommonFlags gs_flags, sw_flags, co_flags;

    CLI::App* gs = app.add_subcommand("ground-state", "ground state at one parameter point");
    gs_flags.add_to(*gs);

    CLI::App* sw = app.add_subcommand("sweep", "coupling sweep with analytic comparison columns");
    sw_flags.add_to(*sw, /*with_g=*/false);
    double g_min = 0.0125, g_max = 0.4875;
    int g_count = 40;
    sw->add_option("--g-min", g_min, "first coupling");
    sw->add_option("--g-max", g_max, "last coupling");
    sw->add_option("--g-count", g_count, "number of grid points");

    CLI::App* co = app.add_subcommand("collapse", "finite-size scaling collapse datasets");
    co_flags.add_to(*co, /*with_g=*/false);
    std::vector<int> sizes = {5, 10, 30, 50, 100};
    std::string quantity = "all", source = "ed";
    double cg_min = 0.02, cg_max = 0.48, max_spread = 0.0;
    int cg_count = 60;
    co->add_option("--sizes", sizes, "atom counts, comma separated")->delimiter(',');
    co->add_option("--quantity", quantity, "energy, jz, jy2 or all")
        ->check(CLI::IsMember({"energy", "jz", "jy2", "all"}));
    co->add_option("--source", source, "ed (exact diagonalization) or analytic")
        ->check(CLI::IsMember({"ed", "analytic"}));
    co->add_option("--g-min", cg_min, "first coupling");
    co->add_option("--g-max", cg_max, "last coupling");
    co->add_option("--g-count", cg_count, "number of grid points");
    co->add_option("--max-spread", max_spread, "fail (exit 1) if any spread exceeds this");

    CLI::App* ve = app.add_subcommand("verify", "run the acceptance checks");
    std::vector<std::string> only;
    ve->add_option("--only", only, "run only the named checks")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        if (gs->parsed()) return cmd_ground_state(gs_flags);
        if (sw->parsed()) return cmd_sweep(sw_flags, g_min, g_max, g_count);
        if (co->parsed())
            return cmd_collapse(co_flags, sizes, quantity, source, cg_min, cg_max, cg_count,
                                max_spread);
        if (ve->parsed()) return cmd_verify(only);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitDomain;
}
