#include "fluxchain/steady_state.hpp"

#include <cmath>

namespace fluxchain {

SteadyState solve_steady_state(const Liouvillian& liouvillian)
{
    const int n = liouvillian.n_sites;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(liouvillian.modified);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw SolverError("steady state: modified Liouvillian is singular or "
                          "ill-conditioned (rcond " + std::to_string(rcond) +
                          ", n_sites " + std::to_string(n) + ", gamma_leak " +
                          std::to_string(liouvillian.gamma_leak) + ")");
    }
    const Eigen::VectorXcd vec_rho = lu.solve(liouvillian.rhs);

    SteadyState state;
    state.residual_inf = (liouvillian.matrix * vec_rho).cwiseAbs().maxCoeff();

    Eigen::MatrixXcd raw(n, n);
    for (int j = 0; j < n; ++j) {
        raw.col(j) = vec_rho.segment(vec_index(0, j, n), n);
    }
    state.hermiticity_defect = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    state.rho = 0.5 * (raw + raw.adjoint());

    state.populations = state.rho.diagonal().real();
    state.coherence_magnitudes = state.rho.cwiseAbs();
    state.coherence_magnitudes.diagonal().setZero();
    state.flux = liouvillian.gamma_leak * state.populations[n - 1];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.rho,
                                                       Eigen::EigenvaluesOnly);
    state.min_eigenvalue = es.eigenvalues().minCoeff();
    state.positivity_warning = state.min_eigenvalue < -1e-9;
    return state;
}

double flux(const SteadyState& state, double gamma_leak)
{
    return gamma_leak * state.rho(state.rho.rows() - 1, state.rho.cols() - 1).real();
}

double steady_state_flux(const ChainSpec& spec, const EnvironmentModel& model)
{
    return solve_steady_state(assemble(spec, model)).flux;
}

}  // namespace fluxchain
