#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <utility>
#include <vector>

#include "tpdicke/params.hpp"

namespace tpdicke {

using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<std::complex<double>>;

/// Sparse operator on the (N+1)*(n_max+1)-dimensional spin (x) Fock space,
/// or on one of its tensor factors.  Entries are complex; operators that
/// are real in the chosen basis (H, Jx, Jz, Jy^2, photon operators) expose
/// a checked real view.
class SpinPhotonOperator {
public:
    SpinPhotonOperator() = default;
    SpinPhotonOperator(SparseComplex m, bool hermitian);

    Eigen::Index dim() const { return mat_.rows(); }
    bool hermitian() const { return hermitian_; }
    const SparseComplex& matrix() const { return mat_; }

    /// Checked view as a real sparse matrix; throws if any entry has a
    /// non-zero imaginary part.
    SparseReal real() const;

    /// max_ij |(A - A^H)_ij|
    double hermiticity_defect() const;

private:
    SparseComplex mat_;
    bool hermitian_ = false;
};

/// Collective spin matrices in the symmetric sector |j=N/2, m>, m = -j..j,
/// Condon-Shortley phases (real non-negative ladder elements).  Jz is
/// diagonal; Jx, Jz, Jy2 are real; Jy is purely imaginary.
struct SpinOperators {
    SpinPhotonOperator jx;
    SpinPhotonOperator jy;
    SpinPhotonOperator jz;
    SpinPhotonOperator jy2;
};

SpinOperators build_spin_operators(int n_atoms);

/// Photon number operator and the two-photon operator a^dag^2 + a^2 on the
/// truncated Fock space {|0>, ..., |n_max>}.
struct PhotonOperators {
    SpinPhotonOperator number;
    SpinPhotonOperator two_photon;
};

PhotonOperators build_photon_operators(int n_max);

/// Full Hamiltonian Delta*(Jz x I) + omega*(I x n) + (2g/N)*(Jx x (a^d2+a^2)),
/// real symmetric, indexed as idx = spin*(n_max+1) + fock.
SpinPhotonOperator assemble_hamiltonian(const ModelParams& params,
                                        const TruncationSpec& trunc);

/// Z4 parity Pi = (-1)^N * diag((-1)^{j-m}) x diag(i^n).  Diagonal and
/// unitary; Pi^4 = I; commutes with the Hamiltonian.  The spin factor
/// (-1)^{j-m} realizes the product of sigma_z over the symmetric basis.
SpinPhotonOperator parity_operator(int n_atoms, int n_max);

/// Fock indices split by photon parity: H is block diagonal on
/// (spin x even) + (spin x odd) since the coupling only changes n by 2.
struct ParitySectors {
    std::vector<int> even;
    std::vector<int> odd;
};

ParitySectors parity_sectors(int n_max);

/// Restriction of H to the block spanned by the given Fock indices (all
/// spin states kept).  Returns the block matrix together with the map from
/// block index to full-space index.
struct HamiltonianBlock {
    SparseReal matrix;
    std::vector<Eigen::Index> full_index;
};

HamiltonianBlock restrict_to_fock(const SpinPhotonOperator& h, int n_atoms,
                                  int n_max, const std::vector<int>& fock_indices);

/// Restriction of H to an arbitrary basis-index set.
HamiltonianBlock restrict_to_indices(const SpinPhotonOperator& h,
                                     std::vector<Eigen::Index> indices);

/// Basis indices grouped by Z4 parity eigenvalue, ordered {+1, -1, +i, -i}.
/// The coupling flips the spin sign and the photon quarter-phase together,
/// so H is block diagonal over these four groups; solving them separately
/// also keeps the near-degenerate super-radiant doublet in distinct blocks,
/// where a single-vector Krylov iteration can resolve each member.
std::vector<std::vector<Eigen::Index>> symmetry_sectors(int n_atoms, int n_max);

}  // namespace tpdicke
