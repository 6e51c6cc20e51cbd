#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tpdicke/effective.hpp"
#include "tpdicke/solver.hpp"

using namespace tpdicke;

namespace {

SparseReal random_symmetric(int dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
    return a.sparseView();
}

}  // namespace

TEST_CASE("decoupled limit is exact") {
    ModelParams p{1.0, 0.4, 0.0, 4};  // delta = 0.1
    const GroundStateSolution sol = converge_cutoff(p, TruncationSpec{});
    CHECK(sol.converged);
    CHECK(sol.energy_levels[0] == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(sol.jz_per_atom == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(sol.gap == doctest::Approx(0.1).epsilon(1e-12));
    // lowest-weight state: <Jy^2> = j/2
    CHECK(sol.jy2_per_atom2 == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(sol.photon_number == doctest::Approx(0.0));
    CHECK(std::abs(sol.ground_vector.norm() - 1.0) <= 1e-10);
}

TEST_CASE("Krylov path matches the dense oracle on random matrices") {
    std::mt19937 rng(7u);
    for (int trial = 0; trial < 5; ++trial) {
        const SparseReal h = random_symmetric(64, rng);
        EigenOptions forced;
        forced.dense_threshold = 0;
        const EigenPairs it = lowest_eigenpairs(h, forced);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense((Eigen::MatrixXd(h)));
        CHECK((it.values - dense.eigenvalues().head(4)).cwiseAbs().maxCoeff() <= 1e-10);
        // orthonormal vectors
        const Eigen::MatrixXd gram = it.vectors.transpose() * it.vectors;
        CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("degenerate pairs are both returned with orthogonal vectors") {
    std::mt19937 rng(11u);
    const SparseReal a = random_symmetric(30, rng);
    SparseReal h(60, 60);
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseReal::InnerIterator it(a, k); it; ++it) {
            trips.emplace_back(it.row(), it.col(), it.value());
            trips.emplace_back(30 + it.row(), 30 + it.col(), it.value());
        }
    h.setFromTriplets(trips.begin(), trips.end());
    const EigenPairs pairs = lowest_eigenpairs(h);
    CHECK(pairs.values[0] == doctest::Approx(pairs.values[1]).epsilon(1e-12));
    CHECK(std::abs(pairs.vectors.col(0).dot(pairs.vectors.col(1))) <= 1e-9);
}

TEST_CASE("argument checks") {
    SparseReal h(8, 8);
    h.setIdentity();
    EigenOptions o;
    o.k = 0;
    CHECK_THROWS_AS(lowest_eigenpairs(h, o), DomainError);
    o.k = 9;
    CHECK_THROWS_AS(lowest_eigenpairs(h, o), DomainError);
}

TEST_CASE("cutoff convergence in the weak-coupling regime matches the closed form") {
    ModelParams p{1.0, 0.5, 0.1, 100};
    const GroundStateSolution sol = converge_cutoff(p, TruncationSpec{});
    CHECK(sol.converged);
    CHECK(sol.residual <= 1e-8 * std::max(1.0, std::abs(sol.energy_levels[0])));
    const double eg1 = normal_phase(p).eg1;
    CHECK(std::abs(sol.energy_levels[0] - eg1) / p.omega1 <= 1e-3);
}

TEST_CASE("near-critical reference point") {
    // eta = 0.5 at N = 100, omega1 = 0.5
    ModelParams p{1.0, 0.5, 0.319071002, 100};
    const GroundStateSolution sol = converge_cutoff(p, TruncationSpec{});
    CHECK(sol.converged);
    CHECK(sol.energy_levels[0] == doctest::Approx(-0.25141733).epsilon(1e-5));
    CHECK(sol.jz_per_atom == doctest::Approx(-0.49821796).epsilon(1e-5));
    CHECK(sol.jy2_per_atom2 == doctest::Approx(1.1075e-3).epsilon(1e-2));
}

TEST_CASE("collapse point is refused with a diagnostic") {
    ModelParams p{1.0, 0.5, 0.6, 4};
    CHECK_THROWS_WITH_AS(converge_cutoff(p, TruncationSpec{}),
                         doctest::Contains("collapse"), DomainError);
}

TEST_CASE("ground energy is variational in the cutoff") {
    ModelParams p{1.0, 0.5, 0.3, 6};
    double prev = 1e300;
    for (int n_max : {8, 16, 32, 64}) {
        TruncationSpec t;
        t.n_max = n_max;
        const SpinPhotonOperator h = assemble_hamiltonian(p, t);
        const ParitySectors sec = parity_sectors(n_max);
        const HamiltonianBlock even = restrict_to_fock(h, 6, n_max, sec.even);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(even.matrix));
        CHECK(es.eigenvalues()[0] <= prev + 1e-12);
        prev = es.eigenvalues()[0];
    }
}

TEST_CASE("quasi-degeneracy deepens with system size above g_c") {
    TruncationSpec t;
    ModelParams p20{1.0, 0.5, 0.42, 20};
    ModelParams p60{1.0, 0.5, 0.42, 60};
    const GroundStateSolution s20 = converge_cutoff(p20, t);
    const GroundStateSolution s60 = converge_cutoff(p60, t);
    CHECK(s60.gap < s20.gap);
}

TEST_CASE("sweep is order-preserving and failure-tolerant") {
    std::vector<ModelParams> grid;
    for (double g : {0.05, 0.15, 0.25}) grid.push_back({1.0, 0.5, g, 4});
    grid.push_back({1.0, 0.5, 0.55, 4});  // beyond collapse, must fail per-row
    const std::vector<SweepRow> rows = sweep(grid, TruncationSpec{});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].solution->energy_levels[0] > rows[1].solution->energy_levels[0]);
    CHECK(rows[1].solution->energy_levels[0] > rows[2].solution->energy_levels[0]);
    CHECK(!rows[3].solution.has_value());
    CHECK(!rows[3].error.empty());
    CHECK(sweep({}, TruncationSpec{}).empty());
}
