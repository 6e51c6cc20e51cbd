#include "tpdicke/operators.hpp"

#include <cmath>
#include <cstdint>

namespace tpdicke {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

SparseComplex from_triplets(Eigen::Index dim, const std::vector<Triplet>& trips) {
    SparseComplex m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

SpinPhotonOperator::SpinPhotonOperator(SparseComplex m, bool hermitian)
    : mat_(std::move(m)), hermitian_(hermitian) {
    mat_.makeCompressed();
}

SparseReal SpinPhotonOperator::real() const {
    SparseReal out(mat_.rows(), mat_.cols());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(mat_.nonZeros()));
    for (int k = 0; k < mat_.outerSize(); ++k) {
        for (SparseComplex::InnerIterator it(mat_, k); it; ++it) {
            if (it.value().imag() != 0.0)
                throw std::logic_error("SpinPhotonOperator::real: complex entry");
            trips.emplace_back(it.row(), it.col(), it.value().real());
        }
    }
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

double SpinPhotonOperator::hermiticity_defect() const {
    SparseComplex d = SparseComplex(mat_.adjoint()) - mat_;
    double defect = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseComplex::InnerIterator it(d, k); it; ++it)
            defect = std::max(defect, std::abs(it.value()));
    return defect;
}

SpinOperators build_spin_operators(int n_atoms) {
    if (n_atoms < 1) throw DomainError("build_spin_operators: n_atoms must be >= 1");
    const int dim = n_atoms + 1;
    const double j = n_atoms / 2.0;

    std::vector<Triplet> tx, ty, tz, ty2;
    // basis index i <-> m = -j + i
    for (int i = 0; i < dim; ++i) {
        const double m = -j + i;
        tz.emplace_back(i, i, m);
    }
    // ladder element <m+1|J+|m> = sqrt(j(j+1) - m(m+1))
    std::vector<double> lad(dim - 1);
    for (int i = 0; i + 1 < dim; ++i) {
        const double m = -j + i;
        lad[i] = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    for (int i = 0; i + 1 < dim; ++i) {
        tx.emplace_back(i + 1, i, 0.5 * lad[i]);
        tx.emplace_back(i, i + 1, 0.5 * lad[i]);
        ty.emplace_back(i + 1, i, std::complex<double>(0.0, -0.5) * lad[i]);
        ty.emplace_back(i, i + 1, std::complex<double>(0.0, 0.5) * lad[i]);
    }
    // Jy^2 = -(J+ - J-)^2 / 4, real tridiagonal-in-steps-of-2
    for (int i = 0; i < dim; ++i) {
        double diag = 0.0;
        if (i + 1 < dim) diag += lad[i] * lad[i];
        if (i - 1 >= 0) diag += lad[i - 1] * lad[i - 1];
        ty2.emplace_back(i, i, 0.25 * diag);
        if (i + 2 < dim) {
            const double v = -0.25 * lad[i] * lad[i + 1];
            ty2.emplace_back(i, i + 2, v);
            ty2.emplace_back(i + 2, i, v);
        }
    }

    return {SpinPhotonOperator(from_triplets(dim, tx), true),
            SpinPhotonOperator(from_triplets(dim, ty), true),
            SpinPhotonOperator(from_triplets(dim, tz), true),
            SpinPhotonOperator(from_triplets(dim, ty2), true)};
}

PhotonOperators build_photon_operators(int n_max) {
    if (n_max < 2) throw DomainError("build_photon_operators: n_max must be >= 2");
    const int dim = n_max + 1;
    std::vector<Triplet> tn, t2;
    for (int n = 0; n < dim; ++n) tn.emplace_back(n, n, static_cast<double>(n));
    for (int n = 0; n + 2 < dim; ++n) {
        const double v = std::sqrt((n + 1.0) * (n + 2.0));
        t2.emplace_back(n, n + 2, v);
        t2.emplace_back(n + 2, n, v);
    }
    return {SpinPhotonOperator(from_triplets(dim, tn), true),
            SpinPhotonOperator(from_triplets(dim, t2), true)};
}

SpinPhotonOperator assemble_hamiltonian(const ModelParams& params,
                                        const TruncationSpec& trunc) {
    params.validate();
    trunc.validate();
    const int ns = params.n_atoms + 1;
    const int nf = trunc.n_max + 1;
    const std::int64_t dim64 = static_cast<std::int64_t>(ns) * nf;
    if (dim64 > (std::int64_t{1} << 26))
        throw DomainError("assemble_hamiltonian: dimension overflow, (N+1)(n_max+1) too large");
    const Eigen::Index dim = static_cast<Eigen::Index>(dim64);

    const SpinOperators spin = build_spin_operators(params.n_atoms);
    const PhotonOperators ph = build_photon_operators(trunc.n_max);
    const double delta = params.delta();
    const double cpl = 2.0 * params.g / params.n_atoms;

    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(dim) * 4);
    auto idx = [nf](Eigen::Index s, Eigen::Index f) { return s * nf + f; };

    // Delta * (Jz x I) + omega * (I x n): both diagonal
    const SparseComplex& jz = spin.jz.matrix();
    for (int s = 0; s < ns; ++s) {
        const double mz = jz.coeff(s, s).real();
        for (int f = 0; f < nf; ++f)
            trips.emplace_back(idx(s, f), idx(s, f), delta * mz + params.omega * f);
    }
    // (2g/N) * (Jx x (a^d2 + a^2))
    const SparseComplex& jx = spin.jx.matrix();
    const SparseComplex& two = ph.two_photon.matrix();
    for (int ks = 0; ks < jx.outerSize(); ++ks) {
        for (SparseComplex::InnerIterator is(jx, ks); is; ++is) {
            for (int kf = 0; kf < two.outerSize(); ++kf) {
                for (SparseComplex::InnerIterator ifk(two, kf); ifk; ++ifk) {
                    trips.emplace_back(idx(is.row(), ifk.row()), idx(is.col(), ifk.col()),
                                       cpl * is.value() * ifk.value());
                }
            }
        }
    }
    return SpinPhotonOperator(from_triplets(dim, trips), true);
}

SpinPhotonOperator parity_operator(int n_atoms, int n_max) {
    if (n_atoms < 1) throw DomainError("parity_operator: n_atoms must be >= 1");
    if (n_max < 2) throw DomainError("parity_operator: n_max must be >= 2");
    const int ns = n_atoms + 1;
    const int nf = n_max + 1;
    const std::complex<double> iu(0.0, 1.0);
    const double global = (n_atoms % 2 == 0) ? 1.0 : -1.0;

    std::vector<Triplet> trips;
    for (int s = 0; s < ns; ++s) {
        // s indexes m = -j + s, so j - m = n_atoms - s
        const double spin_sign = ((n_atoms - s) % 2 == 0) ? 1.0 : -1.0;
        for (int f = 0; f < nf; ++f) {
            std::complex<double> phase = 1.0;
            switch (f % 4) {
                case 0: phase = 1.0; break;
                case 1: phase = iu; break;
                case 2: phase = -1.0; break;
                case 3: phase = -iu; break;
            }
            trips.emplace_back(s * nf + f, s * nf + f, global * spin_sign * phase);
        }
    }
    return SpinPhotonOperator(from_triplets(static_cast<Eigen::Index>(ns) * nf, trips), false);
}

ParitySectors parity_sectors(int n_max) {
    ParitySectors sec;
    for (int n = 0; n <= n_max; ++n)
        (n % 2 == 0 ? sec.even : sec.odd).push_back(n);
    return sec;
}

HamiltonianBlock restrict_to_indices(const SpinPhotonOperator& h,
                                     std::vector<Eigen::Index> indices) {
    std::vector<Eigen::Index> pos(h.dim(), -1);
    HamiltonianBlock block;
    block.full_index = std::move(indices);
    for (size_t i = 0; i < block.full_index.size(); ++i) {
        if (block.full_index[i] < 0 || block.full_index[i] >= h.dim())
            throw DomainError("restrict_to_indices: index out of range");
        pos[static_cast<size_t>(block.full_index[i])] = static_cast<Eigen::Index>(i);
    }

    const SparseComplex& m = h.matrix();
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseComplex::InnerIterator it(m, k); it; ++it) {
            const Eigen::Index r = pos[static_cast<size_t>(it.row())];
            const Eigen::Index c = pos[static_cast<size_t>(it.col())];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value().real());
        }
    }
    block.matrix.resize(static_cast<Eigen::Index>(block.full_index.size()),
                        static_cast<Eigen::Index>(block.full_index.size()));
    block.matrix.setFromTriplets(trips.begin(), trips.end());
    block.matrix.makeCompressed();
    return block;
}

HamiltonianBlock restrict_to_fock(const SpinPhotonOperator& h, int n_atoms,
                                  int n_max, const std::vector<int>& fock_indices) {
    const int nf = n_max + 1;
    std::vector<Eigen::Index> indices;
    for (int s = 0; s <= n_atoms; ++s)
        for (int f : fock_indices) indices.push_back(static_cast<Eigen::Index>(s) * nf + f);
    return restrict_to_indices(h, std::move(indices));
}

std::vector<std::vector<Eigen::Index>> symmetry_sectors(int n_atoms, int n_max) {
    const SpinPhotonOperator pi = parity_operator(n_atoms, n_max);
    std::vector<std::vector<Eigen::Index>> sectors(4);
    for (Eigen::Index i = 0; i < pi.dim(); ++i) {
        const std::complex<double> v = pi.matrix().coeff(i, i);
        int best = 0;
        if (std::abs(v.real()) > 0.5)
            best = v.real() > 0.0 ? 0 : 1;
        else
            best = v.imag() > 0.0 ? 2 : 3;
        sectors[best].push_back(i);
    }
    return sectors;
}

}  // namespace tpdicke
