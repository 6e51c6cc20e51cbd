#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpdicke {

/// Thrown when parameters leave the validity region of a closed-form
/// expression (negative radicand, non-positive log argument, ...).
/// The message names the violated condition.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative eigensolver fails to converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Physical parameters of the two-photon Dicke model
///   H = Delta*Jz + omega*n + (2g/N)(a^dag^2 + a^2) Jx
/// with the scaled atom frequency omega1 = N*Delta.  omega1 is stored;
/// delta is derived so the identity holds to machine precision.
struct ModelParams {
    double omega = 1.0;   // field frequency, sets the energy unit
    double omega1 = 0.5;  // scaled atom frequency N*Delta
    double g = 0.0;       // collective two-photon coupling
    int n_atoms = 1;

    double delta() const { return omega1 / n_atoms; }
    double g_critical() const { return std::sqrt(omega * omega1) / 2.0; }
    double g_collapse() const { return omega / 2.0; }
    double g_prime() const { return g / g_critical(); }

    void validate() const {
        if (omega <= 0.0) throw DomainError("omega must be positive");
        if (omega1 <= 0.0) throw DomainError("omega1 must be positive");
        if (n_atoms < 1) throw DomainError("n_atoms must be >= 1");
        if (g < 0.0) throw DomainError("g must be non-negative");
    }
};

/// Photon-number cutoff control for exact diagonalization.
struct TruncationSpec {
    int n_max = 16;          // initial cutoff, doubled until converged
    double rel_tol = 1e-9;   // relative tolerance on the ground energy
    int n_max_ceiling = 4096;

    void validate() const {
        if (n_max < 2) throw DomainError("n_max must be >= 2");
        if (rel_tol <= 0.0) throw DomainError("rel_tol must be positive");
        if (n_max > n_max_ceiling) throw DomainError("n_max exceeds n_max_ceiling");
    }
};

/// Critical coupling g_c = sqrt(omega*omega1)/2 and spectral collapse
/// point g_collapse = omega/2.  The phase transition precedes the
/// collapse iff omega1 < omega.
struct CriticalPoints {
    double g_c;
    double g_collapse;
};

inline CriticalPoints critical_couplings(double omega, double omega1) {
    if (omega <= 0.0 || omega1 <= 0.0)
        throw DomainError("critical_couplings: omega and omega1 must be positive");
    return {std::sqrt(omega * omega1) / 2.0, omega / 2.0};
}

}  // namespace tpdicke
