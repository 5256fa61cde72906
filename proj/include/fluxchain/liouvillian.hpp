// liouvillian.hpp: vectorized Lindblad superoperators for the transport models.
//
// Vectorization is column-stacking throughout: vec(rho) stacks the columns of
// rho, so element rho(i, j) lives at index i + j*N and vec(A rho B) =
// (B^T kron A) vec(rho).

#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fluxchain/chain.hpp"

namespace fluxchain {

struct Coherent {};

// Site-local pure dephasing with the same rate on every site (OQS Model I).
struct LocalDephasing {
    double gamma{0.1};
};

// Thermal bath driving secular transitions between energy eigenstates
// (OQS Model II). gamma0 is dimensionless; temperature must be positive.
struct Thermal {
    double gamma0{0.1};
    double temperature{0.2};
};

using EnvironmentModel = std::variant<Coherent, LocalDephasing, Thermal>;

// Superoperator M with d vec(rho)/dt = M vec(rho), plus the modified matrix
// used for the steady-state solve: row `norm_row` of M replaced by the trace
// row (1 on every vec index of a diagonal element) and rhs u = e_{norm_row}.
struct Liouvillian {
    Eigen::MatrixXcd matrix;
    Eigen::MatrixXcd modified;
    Eigen::VectorXcd rhs;
    int n_sites{0};
    double gamma_leak{0.0};
    static constexpr int norm_row = 0;  // vec index of rho(1,1)
};

// Eigendecomposition and secular transition rates behind a Model II
// Liouvillian. s(a,b) and w(a,b) are the spectral factor and total rate of the
// a -> b transition; diagonals are unused and set to zero. Eigenvalues are
// sorted ascending and each eigenvector's largest-magnitude component is made
// positive, so the record is reproducible.
struct ThermalRates {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    Eigen::MatrixXd s;
    Eigen::MatrixXd w;
    std::vector<std::pair<int, int>> degenerate_pairs;  // |omega_ab| <= deg_tol
};

// Below this energy separation the spectral factor switches to its
// omega -> 0 limit.
inline constexpr double kDegeneracyTol = 1e-9;

// rate * [ conj(L) kron L - 1/2 (I kron L^dag L + (L^dag L)^T kron I) ]
// accumulated into `superop` (which must be N^2 x N^2).
void add_dissipator(Eigen::MatrixXcd& superop, const Eigen::MatrixXcd& jump, double rate);

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& jump, double rate);

// -i (I kron H - H^T kron I) accumulated into `superop`.
void add_coherent(Eigen::MatrixXcd& superop, const Eigen::MatrixXd& hamiltonian);

// Ohmic bath spectral factor at the transition frequency omega_ab, following
// the worked detailed-balance case: the downhill direction (omega_ab > 0)
// carries the stimulated-plus-spontaneous factor n_BE + 1, the uphill
// direction carries n_BE alone, and |omega_ab| <= kDegeneracyTol returns the
// analytic limit gamma0 * temperature. Throws std::domain_error for
// temperature <= 0.
double thermal_spectral_factor(double omega_ab, double gamma0, double temperature);

// Local-dephasing (Model I) Liouvillian; gamma = 0 gives the coherent model.
Liouvillian assemble_model_i(const Eigen::MatrixXd& hamiltonian, double gamma,
                             double gamma_leak);

// Secular finite-temperature (Model II) Liouvillian, assembled entirely in the
// site basis. The jump operator paired with the rate w(a,b) transfers
// population from eigenstate a to eigenstate b, so detailed balance drives the
// leak-free chain to the Gibbs state.
std::pair<Liouvillian, ThermalRates> assemble_model_ii(const Eigen::MatrixXd& hamiltonian,
                                                       double gamma0, double temperature,
                                                       double gamma_leak);

// Dispatch on the environment model; validates the spec first.
Liouvillian assemble(const ChainSpec& spec, const EnvironmentModel& model);

inline bool is_thermal(const EnvironmentModel& model)
{
    return std::holds_alternative<Thermal>(model);
}

inline Eigen::Index vec_index(int row, int col, int n)
{
    return static_cast<Eigen::Index>(row) + static_cast<Eigen::Index>(col) * n;
}

namespace detail {

// Accumulates the full Model II superoperator into `superop`, which must be a
// zeroed N^2 x N^2 matrix. Rates are reported through `rates_out` when given.
// Buffer-reuse entry point behind assemble_model_ii and the flux workspace.
void model_ii_matrix(Eigen::MatrixXcd& superop, const Eigen::MatrixXd& hamiltonian,
                     double gamma0, double temperature, double gamma_leak,
                     ThermalRates* rates_out);

}  // namespace detail

}  // namespace fluxchain
