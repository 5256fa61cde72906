// gradient.hpp: derivatives of the steady-state flux with respect to the site
// energies eps_2..eps_N (eps_1 is the zero-energy gauge reference).

#pragma once

#include <Eigen/Dense>

#include "fluxchain/steady_state.hpp"

namespace fluxchain {

enum class GradientMethod { Adjoint, CentralFd };

struct FluxGradient {
    Eigen::VectorXd grad;  // d eta / d eps_k for k = 2..N
    GradientMethod method{GradientMethod::Adjoint};
    double fd_step{0.0};   // set when method == CentralFd
};

// Analytic gradient through the linear solve. M depends on eps only through
// the coherent term, so with rho = Mt^{-1} u and eta = gamma_l e^T vec(rho),
// one adjoint solve Mt^H lambda = gamma_l e gives every component as
// d eta / d eps_k = -Re lambda^H (d Mt / d eps_k) vec(rho). Only Coherent and
// LocalDephasing models qualify; Thermal throws std::invalid_argument.
FluxGradient grad_flux_adjoint(const ChainSpec& spec, const EnvironmentModel& model);

// Central finite differences with a full re-assembly and solve per evaluation
// (Model II re-diagonalizes the Hamiltonian at every perturbed point).
FluxGradient grad_flux_fd(const ChainSpec& spec, const EnvironmentModel& model,
                          double step);

// Default dispatch: adjoint where available, central differences with the
// given step for the thermal model.
FluxGradient grad_flux(const ChainSpec& spec, const EnvironmentModel& model,
                       double fd_step = 1e-5);

// Flux and gradient evaluator that reuses per-instance state across many
// energy profiles. For Coherent / LocalDephasing the energy-independent part
// of the superoperator is cached and only the vec-diagonal changes between
// calls; for Thermal every evaluation re-assembles. One workspace per worker
// thread; not safe for concurrent use.
class FluxWorkspace {
public:
    FluxWorkspace(const ChainSpec& spec, const EnvironmentModel& model);

    // eta at the given free energies (eps_2..eps_N).
    double flux_at(const Eigen::VectorXd& free_energies);

    // eta and its gradient; adjoint path for cached models, central
    // differences (fd_step) for the thermal model.
    double flux_and_gradient(const Eigen::VectorXd& free_energies,
                             Eigen::VectorXd& grad, double fd_step = 1e-5);

    const ChainSpec& spec() const { return spec_; }
    const EnvironmentModel& model() const { return model_; }

private:
    double solve_cached(const Eigen::VectorXd& free_energies, bool with_gradient,
                        Eigen::VectorXd* grad);
    double solve_thermal(const Eigen::VectorXd& free_energies);

    ChainSpec spec_;
    EnvironmentModel model_;
    bool cached_;                    // true for Coherent / LocalDephasing
    Eigen::MatrixXcd base_;          // superoperator at eps = 0, trace row applied
    Eigen::MatrixXcd work_;
    Eigen::MatrixXd coupling_;       // Hamiltonian without the diagonal (thermal)
    Eigen::MatrixXd h_;
    Eigen::VectorXcd rhs_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

}  // namespace fluxchain
