// steady_state.hpp: direct solve of the modified Liouvillian for the
// nonequilibrium steady state and its observables.

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "fluxchain/liouvillian.hpp"

namespace fluxchain {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteadyState {
    Eigen::MatrixXcd rho;                    // hermitized N x N density matrix
    double flux{0.0};                        // gamma_leak * Re rho(N, N)
    Eigen::VectorXd populations;             // diagonal of rho
    Eigen::MatrixXd coherence_magnitudes;    // |rho_nm| with zeroed diagonal

    // Diagnostics from the raw solve.
    double residual_inf{0.0};                // ||M vec(rho)||_inf
    double hermiticity_defect{0.0};          // max |rho - rho^H| before symmetrizing
    double min_eigenvalue{0.0};              // smallest eigenvalue of rho
    bool positivity_warning{false};          // min_eigenvalue < -1e-9
};

// Solves modified * vec(rho) = rhs by partial-pivoting LU, symmetrizes rho and
// derives observables. Throws SolverError when the modified matrix is singular
// or has an estimated condition number above 1e14.
SteadyState solve_steady_state(const Liouvillian& liouvillian);

// Population flux out of the exit site, eta = gamma_leak * Re rho(N, N).
double flux(const SteadyState& state, double gamma_leak);

// Convenience: assemble + solve + flux for a spec and environment model.
double steady_state_flux(const ChainSpec& spec, const EnvironmentModel& model);

}  // namespace fluxchain
