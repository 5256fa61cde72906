#include "fluxchain/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxchain {

using Complex = std::complex<double>;

namespace {

// gradient components from the sparse action of dMt/deps_k on vec(rho):
// (dM/deps_k) vec(rho) = -i [(I kron P_k) - (P_k kron I)] vec(rho), nonzero
// only on row k of each column block and on column block k. Row 0 (the trace
// row of Mt) is never touched for k >= 1.
Eigen::VectorXd adjoint_components(const Eigen::VectorXcd& vec_rho,
                                   const Eigen::VectorXcd& lambda, int n)
{
    Eigen::VectorXd grad(n - 1);
    const Complex mi(0.0, -1.0);
    for (int k = 1; k < n; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const Eigen::Index r = vec_index(k, j, n);
            acc += std::conj(lambda[r]) * (mi * vec_rho[r]);
        }
        for (int i = 0; i < n; ++i) {
            const Eigen::Index r = vec_index(i, k, n);
            acc -= std::conj(lambda[r]) * (mi * vec_rho[r]);
        }
        grad[k - 1] = -acc.real();
    }
    return grad;
}

// Cheap singularity guard for the optimizer's inner loop: the pivot ratio of
// the LU factors. Reported observables go through solve_steady_state, which
// carries the full condition estimate.
void check_pivots(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, const ChainSpec& spec)
{
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    const double lo = diag.minCoeff();
    const double hi = diag.maxCoeff();
    if (!(lo > hi * 1e-16) || !std::isfinite(hi)) {
        throw SolverError("flux solve: modified Liouvillian is numerically singular "
                          "(n_sites " + std::to_string(spec.n_sites) + ", gamma_leak " +
                          std::to_string(spec.gamma_leak) + ")");
    }
}

// lambda with Mt^H lambda = rhs, reusing the factorization Mt = P^-1 L U:
// Mt^H = U^H L^H P, so two triangular solves and an inverse permutation.
Eigen::VectorXcd adjoint_solve(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu,
                               const Eigen::VectorXcd& rhs)
{
    Eigen::VectorXcd y =
        lu.matrixLU().triangularView<Eigen::Upper>().adjoint().solve(rhs);
    lu.matrixLU().triangularView<Eigen::UnitLower>().adjoint().solveInPlace(y);
    return lu.permutationP().inverse() * y;
}

}  // namespace

FluxGradient grad_flux_adjoint(const ChainSpec& spec, const EnvironmentModel& model)
{
    if (is_thermal(model)) {
        throw std::invalid_argument(
            "grad_flux_adjoint: thermal model requires finite differences");
    }
    const int n = spec.n_sites;
    const Liouvillian liou = assemble(spec, model);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(liou.modified);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw SolverError("grad_flux_adjoint: modified Liouvillian ill-conditioned "
                          "(rcond " + std::to_string(rcond) + ", n_sites " +
                          std::to_string(spec.n_sites) + ", gamma_leak " +
                          std::to_string(spec.gamma_leak) + ")");
    }
    const Eigen::VectorXcd vec_rho = lu.solve(liou.rhs);

    Eigen::VectorXcd exit_sel = Eigen::VectorXcd::Zero(Eigen::Index(n) * n);
    exit_sel[vec_index(n - 1, n - 1, n)] = spec.gamma_leak;
    const Eigen::VectorXcd lambda = adjoint_solve(lu, exit_sel);

    return FluxGradient{adjoint_components(vec_rho, lambda, n),
                        GradientMethod::Adjoint, 0.0};
}

FluxGradient grad_flux_fd(const ChainSpec& spec, const EnvironmentModel& model,
                          double step)
{
    if (!(step > 0.0)) {
        throw std::invalid_argument("grad_flux_fd: step must be positive");
    }
    const int n = spec.n_sites;
    Eigen::VectorXd grad(n - 1);
    ChainSpec probe = spec;
    for (int k = 1; k < n; ++k) {
        const double center = spec.energies[k];
        probe.energies[k] = center + step;
        const double up = steady_state_flux(probe, model);
        probe.energies[k] = center - step;
        const double down = steady_state_flux(probe, model);
        probe.energies[k] = center;
        grad[k - 1] = (up - down) / (2.0 * step);
    }
    return FluxGradient{std::move(grad), GradientMethod::CentralFd, step};
}

FluxGradient grad_flux(const ChainSpec& spec, const EnvironmentModel& model,
                       double fd_step)
{
    return is_thermal(model) ? grad_flux_fd(spec, model, fd_step)
                             : grad_flux_adjoint(spec, model);
}

FluxWorkspace::FluxWorkspace(const ChainSpec& spec, const EnvironmentModel& model)
    : spec_(spec), model_(model), cached_(!is_thermal(model))
{
    validate(spec_);
    const int n = spec_.n_sites;
    rhs_ = Eigen::VectorXcd::Zero(Eigen::Index(n) * n);
    rhs_[Liouvillian::norm_row] = 1.0;
    ChainSpec flat = spec_;
    flat.energies.setZero();
    if (cached_) {
        base_ = assemble(flat, model_).modified;
        work_ = base_;
    } else {
        coupling_ = build_hamiltonian(flat);
        h_ = coupling_;
        work_.resize(Eigen::Index(n) * n, Eigen::Index(n) * n);
    }
}

double FluxWorkspace::solve_thermal(const Eigen::VectorXd& free_energies)
{
    const int n = spec_.n_sites;
    const auto& thermal = std::get<Thermal>(model_);
    h_ = coupling_;
    h_.diagonal().tail(n - 1) = free_energies;
    work_.setZero();
    detail::model_ii_matrix(work_, h_, thermal.gamma0, thermal.temperature,
                            spec_.gamma_leak, nullptr);
    work_.row(Liouvillian::norm_row).setZero();
    for (int k = 0; k < n; ++k) {
        work_(Liouvillian::norm_row, vec_index(k, k, n)) = 1.0;
    }
    lu_.compute(work_);
    check_pivots(lu_, spec_);
    const Eigen::VectorXcd vec_rho = lu_.solve(rhs_);
    const double eta = spec_.gamma_leak * vec_rho[vec_index(n - 1, n - 1, n)].real();
    if (!std::isfinite(eta)) {
        throw SolverError("flux solve: non-finite flux (n_sites " +
                          std::to_string(spec_.n_sites) + ")");
    }
    return eta;
}

double FluxWorkspace::solve_cached(const Eigen::VectorXd& free_energies,
                                   bool with_gradient, Eigen::VectorXd* grad)
{
    const int n = spec_.n_sites;
    work_ = base_;
    // Site energies enter only through the vec-diagonal: -i (eps_p - eps_q)
    // at (p + q n, p + q n). The (0, 0) entry is the trace row and eps_1 = 0,
    // so p == q terms vanish identically.
    for (int q = 0; q < n; ++q) {
        const double eq = q == 0 ? 0.0 : free_energies[q - 1];
        for (int p = 0; p < n; ++p) {
            if (p == q) {
                continue;
            }
            const double ep = p == 0 ? 0.0 : free_energies[p - 1];
            work_(vec_index(p, q, n), vec_index(p, q, n)) += Complex(0.0, eq - ep);
        }
    }
    lu_.compute(work_);
    check_pivots(lu_, spec_);
    const Eigen::VectorXcd vec_rho = lu_.solve(rhs_);
    const double eta = spec_.gamma_leak * vec_rho[vec_index(n - 1, n - 1, n)].real();
    if (!std::isfinite(eta)) {
        throw SolverError("flux solve: non-finite flux (n_sites " +
                          std::to_string(spec_.n_sites) + ")");
    }
    if (with_gradient) {
        Eigen::VectorXcd exit_sel = Eigen::VectorXcd::Zero(vec_rho.size());
        exit_sel[vec_index(n - 1, n - 1, n)] = spec_.gamma_leak;
        const Eigen::VectorXcd lambda = adjoint_solve(lu_, exit_sel);
        *grad = adjoint_components(vec_rho, lambda, n);
    }
    return eta;
}

double FluxWorkspace::flux_at(const Eigen::VectorXd& free_energies)
{
    return cached_ ? solve_cached(free_energies, false, nullptr)
                   : solve_thermal(free_energies);
}

double FluxWorkspace::flux_and_gradient(const Eigen::VectorXd& free_energies,
                                        Eigen::VectorXd& grad, double fd_step)
{
    if (cached_) {
        return solve_cached(free_energies, true, &grad);
    }
    const int n = spec_.n_sites;
    grad.resize(n - 1);
    Eigen::VectorXd probe = free_energies;
    for (int k = 0; k < n - 1; ++k) {
        probe[k] = free_energies[k] + fd_step;
        const double up = flux_at(probe);
        probe[k] = free_energies[k] - fd_step;
        const double down = flux_at(probe);
        probe[k] = free_energies[k];
        grad[k] = (up - down) / (2.0 * fd_step);
    }
    return flux_at(free_energies);
}

}  // namespace fluxchain
