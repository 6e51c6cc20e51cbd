#include "tpdicke/solver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <optional>

namespace tpdicke {

namespace {

struct TridiagEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

TridiagEigen solve_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int m = static_cast<int>(alpha.size());
    std::vector<double> d(alpha), e(beta);
    e.resize(std::max(0, m - 1));
    TridiagEigen out;
    out.values.resize(m);
    out.vectors.resize(m, m);
    std::vector<double> z(static_cast<size_t>(m) * m);
    const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', m, d.data(), e.data(), z.data(), m);
    if (info != 0) throw SolverError("tridiagonal eigensolve failed", 0.0);
    for (int i = 0; i < m; ++i) {
        out.values[i] = d[i];
        for (int r = 0; r < m; ++r) out.vectors(r, i) = z[static_cast<size_t>(i) * m + r];
    }
    return out;
}

EigenPairs dense_lowest(const SparseReal& h, int k) {
    Eigen::MatrixXd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    EigenPairs out;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    return out;
}

/// Plain Lanczos attempt; on failure reports the best ground-energy
/// estimate so the shift-invert fallback can place its shift.
std::optional<EigenPairs> lanczos_try(const SparseReal& h, const EigenOptions& opts,
                                      double& theta0) {
    const Eigen::Index dim = h.rows();
    const int k = opts.k;
    const int mmax = std::min<Eigen::Index>(opts.max_subspace, dim);

    Eigen::MatrixXd basis(dim, mmax);
    std::vector<double> alpha, beta;
    alpha.reserve(mmax);
    beta.reserve(mmax);

    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim);
    v.normalize();
    basis.col(0) = v;

    Eigen::VectorXd w(dim);
    int m = 0;
    TridiagEigen ritz;
    bool have_ritz = false;

    auto converged_count = [&](const TridiagEigen& t, double b_last) {
        int n_ok = 0;
        for (int i = 0; i < std::min<int>(k, static_cast<int>(t.values.size())); ++i) {
            const double est = std::abs(b_last * t.vectors(static_cast<int>(t.values.size()) - 1, i));
            if (est <= opts.tol * std::max(1.0, std::abs(t.values[i]))) ++n_ok;
        }
        return n_ok;
    };

    for (int j = 0; j < mmax; ++j) {
        w.noalias() = h * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        const double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd proj = basis.leftCols(j + 1).transpose() * w;
            w.noalias() -= basis.leftCols(j + 1) * proj;
        }
        const double b = w.norm();
        m = j + 1;

        const bool last_step = (j + 1 == mmax);
        const bool breakdown = (b < 1e-13);
        const bool check = breakdown || last_step || (m >= std::max(2 * k + 2, 20) && m % 10 == 0);
        if (check) {
            ritz = solve_tridiagonal(alpha, beta);
            have_ritz = true;
            if (breakdown || converged_count(ritz, b) >= std::min<int>(k, m)) break;
        }
        if (!last_step) {
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }

    if (!have_ritz) ritz = solve_tridiagonal(alpha, beta);
    const int kk = std::min<int>(k, m);
    EigenPairs out;
    out.values = ritz.values.head(kk);
    out.vectors.noalias() = basis.leftCols(m) * ritz.vectors.leftCols(kk);
    theta0 = ritz.values[0];

    // explicit residual check
    double worst = 0.0;
    for (int i = 0; i < kk; ++i) {
        const double res = (h * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
        worst = std::max(worst, res / std::max(1.0, std::abs(out.values[i])));
    }
    if (worst > std::max(opts.tol * 100.0, 1e-9) || kk < k) return std::nullopt;
    return out;
}

/// Shift-invert Lanczos for clustered low-lying levels: factor H - sigma*I
/// once and iterate on its inverse, which separates eigenvalues near sigma.
EigenPairs shift_invert_lowest(const SparseReal& h, const EigenOptions& opts, double theta0) {
    const Eigen::Index dim = h.rows();
    const int k = opts.k;
    const double scale = std::max(1.0, std::abs(theta0));

    SparseReal ident(dim, dim);
    ident.setIdentity();

    Eigen::SimplicialLDLT<SparseReal> ldlt;
    double sigma = theta0 - std::max(1e-3, 1e-6 * scale);
    bool factored = false;
    for (int attempt = 0; attempt < 5 && !factored; ++attempt) {
        ldlt.compute(SparseReal(h - sigma * ident));
        if (ldlt.info() == Eigen::Success) {
            factored = true;
        } else {
            sigma -= std::max(1e-2, 1e-3 * scale);  // back further off the spectrum
        }
    }
    if (!factored) throw SolverError("shift-invert factorization failed", 0.0);

    const int mmax = std::min<Eigen::Index>(std::max(4 * k + 20, 60), dim);
    Eigen::MatrixXd basis(dim, mmax);
    std::vector<double> alpha, beta;
    alpha.reserve(mmax);
    beta.reserve(mmax);

    Eigen::VectorXd v = Eigen::VectorXd::Ones(dim);
    v.normalize();
    basis.col(0) = v;

    Eigen::VectorXd w(dim);
    int m = 0;
    for (int j = 0; j < mmax; ++j) {
        w = ldlt.solve(basis.col(j));
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        const double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd proj = basis.leftCols(j + 1).transpose() * w;
            w.noalias() -= basis.leftCols(j + 1) * proj;
        }
        const double b = w.norm();
        m = j + 1;
        if (b < 1e-13 || j + 1 == mmax) break;
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }

    const TridiagEigen ritz = solve_tridiagonal(alpha, beta);
    // map mu back to E = sigma + 1/mu and keep the k smallest energies
    std::vector<std::pair<double, int>> mapped;
    for (int i = 0; i < m; ++i) {
        const double mu = ritz.values[i];
        if (std::abs(mu) < 1e-12) continue;
        mapped.push_back({sigma + 1.0 / mu, i});
    }
    std::sort(mapped.begin(), mapped.end());
    if (static_cast<int>(mapped.size()) < k)
        throw SolverError("shift-invert produced too few Ritz values", 0.0);

    EigenPairs out;
    out.values.resize(k);
    out.vectors.resize(dim, k);
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        out.values[i] = mapped[i].first;
        Eigen::VectorXd vec = basis.leftCols(m) * ritz.vectors.col(mapped[i].second);
        vec.normalize();
        out.vectors.col(i) = vec;
        const double res = (h * vec - out.values[i] * vec).norm();
        worst = std::max(worst, res / std::max(1.0, std::abs(out.values[i])));
    }
    if (worst > std::max(opts.tol * 100.0, 1e-9))
        throw SolverError("shift-invert Lanczos failed to converge " + std::to_string(k) +
                              " eigenpairs; worst relative residual " + std::to_string(worst),
                          worst);
    return out;
}

}  // namespace

EigenPairs lowest_eigenpairs(const SparseReal& h, const EigenOptions& opts) {
    if (opts.k < 1) throw DomainError("lowest_eigenpairs: k must be >= 1");
    if (h.rows() != h.cols()) throw DomainError("lowest_eigenpairs: matrix not square");
    if (h.rows() < opts.k) throw DomainError("lowest_eigenpairs: k exceeds dimension");
    if (h.rows() <= opts.dense_threshold) return dense_lowest(h, opts.k);
    double theta0 = 0.0;
    if (std::optional<EigenPairs> direct = lanczos_try(h, opts, theta0)) return *direct;
    return shift_invert_lowest(h, opts, theta0);
}

double expectation(const Eigen::VectorXd& v, const SparseReal& op) {
    if (v.size() != op.rows()) throw DomainError("expectation: dimension mismatch");
    return v.dot(op * v);
}

namespace {

struct MergedSolve {
    std::vector<double> levels;       // ascending, both blocks
    Eigen::VectorXd ground_full;      // embedded in the full space
    double residual = 0.0;
};

MergedSolve solve_blocks(const SpinPhotonOperator& h, const ModelParams& params, int n_max,
                         const EigenOptions& eig) {
    struct BlockResult {
        EigenPairs pairs;
        HamiltonianBlock block;
    };
    std::vector<BlockResult> results;
    for (std::vector<Eigen::Index>& sector : symmetry_sectors(params.n_atoms, n_max)) {
        if (sector.empty()) continue;
        HamiltonianBlock blk = restrict_to_indices(h, std::move(sector));
        EigenOptions o = eig;
        o.k = std::min<int>(eig.k, static_cast<int>(blk.matrix.rows()));
        results.push_back({lowest_eigenpairs(blk.matrix, o), std::move(blk)});
    }

    MergedSolve out;
    std::vector<std::pair<double, std::pair<int, int>>> tagged;  // (E, (block, idx))
    for (int b = 0; b < static_cast<int>(results.size()); ++b)
        for (int i = 0; i < results[b].pairs.values.size(); ++i)
            tagged.push_back({results[b].pairs.values[i], {b, i}});
    std::sort(tagged.begin(), tagged.end());
    const int keep = std::min<int>(eig.k, static_cast<int>(tagged.size()));
    for (int i = 0; i < keep; ++i) out.levels.push_back(tagged[i].first);

    const auto [gb, gi] = tagged[0].second;
    const auto& blk = results[gb].block;
    out.ground_full = Eigen::VectorXd::Zero(h.dim());
    for (size_t r = 0; r < blk.full_index.size(); ++r)
        out.ground_full[blk.full_index[r]] = results[gb].pairs.vectors(static_cast<Eigen::Index>(r), gi);

    const SparseReal full = h.real();
    out.residual = (full * out.ground_full - out.levels[0] * out.ground_full).norm();
    return out;
}

}  // namespace

GroundStateSolution converge_cutoff(const ModelParams& params, const TruncationSpec& trunc,
                                    const EigenOptions& eig) {
    params.validate();
    trunc.validate();
    if (params.g >= params.g_collapse())
        throw DomainError("converge_cutoff: g = " + std::to_string(params.g) +
                          " is at or beyond the spectral collapse point g_collapse = omega/2 = " +
                          std::to_string(params.g_collapse()) +
                          "; the spectrum is unbounded from below there");

    GroundStateSolution sol;
    int n_max = trunc.n_max;
    double prev_e0 = 0.0;
    bool have_prev = false;
    MergedSolve merged;

    while (true) {
        TruncationSpec t = trunc;
        t.n_max = n_max;
        t.n_max_ceiling = std::max(trunc.n_max_ceiling, n_max);
        const SpinPhotonOperator h = assemble_hamiltonian(params, t);
        merged = solve_blocks(h, params, n_max, eig);
        const double e0 = merged.levels[0];
        if (have_prev && std::abs(e0 - prev_e0) <= trunc.rel_tol * std::max(1e-300, std::abs(e0))) {
            sol.converged = true;
            break;
        }
        have_prev = true;
        prev_e0 = e0;
        if (2 * n_max > trunc.n_max_ceiling) {
            sol.converged = false;  // ceiling exhausted, reported, never silent
            break;
        }
        n_max *= 2;
    }

    sol.energy_levels = merged.levels;
    sol.ground_vector = merged.ground_full;
    sol.n_max_used = n_max;
    sol.residual = merged.residual;
    sol.gap = merged.levels.size() > 1 ? merged.levels[1] - merged.levels[0] : 0.0;

    // observables on the spin (x) Fock product basis, idx = s*(n_max+1) + f
    const SpinOperators spin = build_spin_operators(params.n_atoms);
    const SparseReal jy2 = spin.jy2.real();
    const int ns = params.n_atoms + 1;
    const int nf = n_max + 1;
    const double j = params.n_atoms / 2.0;
    double jz_sum = 0.0, n_sum = 0.0, jy2_sum = 0.0;
    Eigen::VectorXd spin_slice(ns);
    for (int f = 0; f < nf; ++f) {
        for (int s = 0; s < ns; ++s) {
            const double c = sol.ground_vector[static_cast<Eigen::Index>(s) * nf + f];
            spin_slice[s] = c;
            jz_sum += c * c * (-j + s);
            n_sum += c * c * f;
        }
        jy2_sum += spin_slice.dot(jy2 * spin_slice);
    }
    sol.jz_per_atom = jz_sum / params.n_atoms;
    sol.jy2_per_atom2 = jy2_sum / (static_cast<double>(params.n_atoms) * params.n_atoms);
    sol.photon_number = n_sum;
    return sol;
}

std::vector<SweepRow> sweep(const std::vector<ModelParams>& grid, const TruncationSpec& trunc,
                            const EigenOptions& eig) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const ModelParams& p : grid) {
        SweepRow row;
        row.params = p;
        try {
            row.solution = converge_cutoff(p, trunc, eig);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace tpdicke
