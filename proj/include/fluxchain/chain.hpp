// chain.hpp: tight-binding chain specification and Hamiltonian assembly.

#pragma once

#include <map>
#include <variant>

#include <Eigen/Dense>

namespace fluxchain {

// J_d = j_max / d^alpha for inter-site distance d >= 1.
struct PowerLaw {
    double j_max{0.2};
    double alpha{1.0};
};

// Couplings listed per distance; unlisted distances carry zero coupling.
struct ExplicitCouplings {
    std::map<int, double> by_distance;
};

using TunnelingSpec = std::variant<PowerLaw, ExplicitCouplings>;

// A quasi-1D chain: site energies, translation-invariant tunnelings and the
// leakage rate used to close the transport cycle between site N and site 1.
// Energies are in units with hbar = k_B = 1; site indices are 1-based in all
// user-facing output.
struct ChainSpec {
    int n_sites{0};
    Eigen::VectorXd energies;
    TunnelingSpec tunneling{PowerLaw{}};
    double gamma_leak{0.0};
};

// Throws std::invalid_argument when the spec violates its invariants
// (size mismatch, nonpositive power-law parameters, out-of-range distances,
// negative leak rate).
void validate(const ChainSpec& spec);

// Tunneling energy at the given distance, 1 <= distance <= n_sites - 1.
// Throws std::domain_error for distances outside that range.
double tunneling_energy(const ChainSpec& spec, int distance);

// Real symmetric N x N matrix with the site energies on the diagonal and
// J_{|n-m|} elsewhere.
Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec);

// Copy of `spec` with site energies 2..N replaced by `free_energies`
// (site 1 stays pinned at zero).
ChainSpec with_free_energies(const ChainSpec& spec, const Eigen::VectorXd& free_energies);

}  // namespace fluxchain
