#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <set>

#include "doctest.h"
#include "tpdicke/operators.hpp"

using namespace tpdicke;
using Cplx = std::complex<double>;

namespace {

double max_abs(const SparseComplex& m) {
    double out = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseComplex::InnerIterator it(m, k); it; ++it)
            out = std::max(out, std::abs(it.value()));
    return out;
}

}  // namespace

TEST_CASE("single atom gives the Pauli matrices over two") {
    const SpinOperators s = build_spin_operators(1);
    const Eigen::MatrixXd jz(s.jz.real());
    const Eigen::MatrixXd jx(s.jx.real());
    CHECK(jz(0, 0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(jz(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(jz(0, 1) == 0.0);
    CHECK(jx(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(jx(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("two atoms give the spin-1 matrices") {
    const SpinOperators s = build_spin_operators(2);
    const Eigen::MatrixXd jz(s.jz.real());
    const Eigen::MatrixXd jx(s.jx.real());
    CHECK(jz(0, 0) == doctest::Approx(-1.0));
    CHECK(jz(1, 1) == doctest::Approx(0.0));
    CHECK(jz(2, 2) == doctest::Approx(1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(jx(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(jx(1, 2) == doctest::Approx(inv_sqrt2).epsilon(1e-14));
}

TEST_CASE("su(2) algebra holds for several sizes") {
    for (int n : {1, 2, 5, 9}) {
        const SpinOperators s = build_spin_operators(n);
        const SparseComplex comm =
            s.jx.matrix() * s.jy.matrix() - s.jy.matrix() * s.jx.matrix();
        const SparseComplex defect = SparseComplex(comm - Cplx(0, 1) * s.jz.matrix());
        CHECK(max_abs(defect) <= 1e-12);
        const SparseComplex jy2_defect =
            SparseComplex(s.jy2.matrix() - s.jy.matrix() * s.jy.matrix());
        CHECK(max_abs(jy2_defect) <= 1e-12);
        CHECK(s.jx.hermiticity_defect() <= 1e-14);
        CHECK(s.jy.hermiticity_defect() <= 1e-14);
    }
    CHECK_THROWS_AS(build_spin_operators(0), DomainError);
}

TEST_CASE("photon pair operator entries and parity conservation") {
    const PhotonOperators p2 = build_photon_operators(2);
    CHECK(Eigen::MatrixXd(p2.two_photon.real())(0, 2) == doctest::Approx(std::sqrt(2.0)));
    const PhotonOperators p4 = build_photon_operators(4);
    const Eigen::MatrixXd two(p4.two_photon.real());
    CHECK(two(2, 4) == doctest::Approx(std::sqrt(12.0)));
    CHECK(two == two.transpose());
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            if ((r - c) % 2 != 0) CHECK(two(r, c) == 0.0);
    const Eigen::MatrixXd num(p4.number.real());
    for (int n = 0; n <= 4; ++n) CHECK(num(n, n) == doctest::Approx(n));
    CHECK_THROWS_AS(build_photon_operators(1), DomainError);
}

TEST_CASE("decoupled Hamiltonian is diagonal with spectrum delta*m + omega*n") {
    ModelParams p{1.0, 0.4, 0.0, 4};  // delta = 0.1
    TruncationSpec t;
    t.n_max = 6;
    const Eigen::MatrixXd h(assemble_hamiltonian(p, t).real());
    CHECK((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.diagonal().minCoeff() == doctest::Approx(-0.2).epsilon(1e-15));
    std::multiset<long long> expect, got;
    const double j = 2.0;
    for (int s = 0; s <= 4; ++s)
        for (int n = 0; n <= 6; ++n)
            expect.insert(llround(1e12 * (0.1 * (-j + s) + 1.0 * n)));
    for (int i = 0; i < h.rows(); ++i) got.insert(llround(1e12 * h(i, i)));
    CHECK(expect == got);
}

TEST_CASE("Hamiltonian equals a hand-built Kronecker sum at N=2, n_max=4") {
    ModelParams p{1.0, 0.6, 0.2, 2};  // delta = 0.3
    TruncationSpec t;
    t.n_max = 4;
    const Eigen::MatrixXd h(assemble_hamiltonian(p, t).real());
    CHECK(h.rows() == 15);

    const Eigen::MatrixXd jz(build_spin_operators(2).jz.real());
    const Eigen::MatrixXd jx(build_spin_operators(2).jx.real());
    const Eigen::MatrixXd num(build_photon_operators(4).number.real());
    const Eigen::MatrixXd two(build_photon_operators(4).two_photon.real());
    const Eigen::MatrixXd eye3 = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd eye5 = Eigen::MatrixXd::Identity(5, 5);
    auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    const Eigen::MatrixXd ref =
        p.delta() * kron(jz, eye5) + p.omega * kron(eye3, num) +
        (2.0 * p.g / p.n_atoms) * kron(jx, two);
    CHECK((h - ref).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parity operator is a Z4 symmetry of the truncated Hamiltonian") {
    ModelParams p{1.0, 0.5, 0.3, 5};
    TruncationSpec t;
    t.n_max = 12;
    const SpinPhotonOperator h = assemble_hamiltonian(p, t);
    const SpinPhotonOperator pi = parity_operator(5, 12);
    CHECK(max_abs(SparseComplex(h.matrix() * pi.matrix() - pi.matrix() * h.matrix())) <= 1e-12);

    SparseComplex pi4 = pi.matrix() * pi.matrix();
    pi4 = SparseComplex(pi4 * pi4);
    SparseComplex ident(pi.dim(), pi.dim());
    ident.setIdentity();
    CHECK(max_abs(SparseComplex(pi4 - ident)) <= 1e-12);

    // diagonal, so eigenvalues are the diagonal entries
    for (Eigen::Index i = 0; i < pi.dim(); ++i) {
        const Cplx v = pi.matrix().coeff(i, i);
        CHECK(std::abs(std::abs(v) - 1.0) <= 1e-14);
        CHECK(std::min(std::abs(v.real()), std::abs(v.imag())) <= 1e-14);
    }
}

TEST_CASE("photon-parity sectors partition the Fock indices") {
    const ParitySectors s = parity_sectors(4);
    CHECK(s.even == std::vector<int>{0, 2, 4});
    CHECK(s.odd == std::vector<int>{1, 3});
    CHECK(s.even.size() + s.odd.size() == 5);
}

TEST_CASE("Z4 sectors partition the basis and never couple through H") {
    ModelParams p{1.0, 0.5, 0.35, 3};
    TruncationSpec t;
    t.n_max = 10;
    const SpinPhotonOperator h = assemble_hamiltonian(p, t);
    const auto sectors = symmetry_sectors(3, 10);
    size_t total = 0;
    for (const auto& s : sectors) total += s.size();
    CHECK(total == static_cast<size_t>(h.dim()));

    // cross-sector matrix elements of H vanish identically
    std::vector<int> tag(h.dim(), -1);
    for (int b = 0; b < 4; ++b)
        for (Eigen::Index i : sectors[b]) tag[i] = b;
    const SparseReal hr = h.real();
    for (int k = 0; k < hr.outerSize(); ++k)
        for (SparseReal::InnerIterator it(hr, k); it; ++it)
            CHECK(tag[it.row()] == tag[it.col()]);

    // merged sector spectra equal the full spectrum
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full{Eigen::MatrixXd(hr)};
    std::vector<double> merged;
    for (const auto& s : sectors) {
        if (s.empty()) continue;
        const HamiltonianBlock blk = restrict_to_indices(h, s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(blk.matrix));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            merged.push_back(es.eigenvalues()[i]);
    }
    std::sort(merged.begin(), merged.end());
    for (Eigen::Index i = 0; i < full.eigenvalues().size(); ++i)
        CHECK(std::abs(merged[i] - full.eigenvalues()[i]) <= 1e-11);
}

TEST_CASE("block restriction preserves the spectrum and the ground state is even") {
    ModelParams p{1.0, 0.5, 0.35, 3};
    TruncationSpec t;
    t.n_max = 10;
    const SpinPhotonOperator h = assemble_hamiltonian(p, t);
    const ParitySectors sec = parity_sectors(10);
    const HamiltonianBlock even = restrict_to_fock(h, 3, 10, sec.even);
    const HamiltonianBlock odd = restrict_to_fock(h, 3, 10, sec.odd);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(Eigen::MatrixXd(h.real()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(Eigen::MatrixXd(even.matrix));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> od(Eigen::MatrixXd(odd.matrix));
    Eigen::VectorXd merged(full.eigenvalues().size());
    merged << ev.eigenvalues(), od.eigenvalues();
    std::sort(merged.data(), merged.data() + merged.size());
    CHECK((merged - full.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(ev.eigenvalues()[0] < od.eigenvalues()[0]);
}
