#include "fluxchain/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fluxchain {

void validate(const ChainSpec& spec)
{
    if (spec.n_sites < 1) {
        throw std::invalid_argument("chain: n_sites must be >= 1");
    }
    if (spec.energies.size() != spec.n_sites) {
        throw std::invalid_argument("chain: energies length " +
                                    std::to_string(spec.energies.size()) +
                                    " does not match n_sites " +
                                    std::to_string(spec.n_sites));
    }
    if (!spec.energies.allFinite()) {
        throw std::invalid_argument("chain: energies must be finite");
    }
    if (spec.gamma_leak < 0.0 || !std::isfinite(spec.gamma_leak)) {
        throw std::invalid_argument("chain: gamma_leak must be nonnegative");
    }
    if (spec.gamma_leak > 0.0 && spec.n_sites < 2) {
        throw std::invalid_argument("chain: leakage needs at least two sites");
    }
    if (const auto* pl = std::get_if<PowerLaw>(&spec.tunneling)) {
        if (!(pl->j_max > 0.0) || !(pl->alpha > 0.0)) {
            throw std::invalid_argument("chain: power-law j_max and alpha must be positive");
        }
    } else {
        const auto& ex = std::get<ExplicitCouplings>(spec.tunneling);
        for (const auto& [d, j] : ex.by_distance) {
            if (d < 1 || d > spec.n_sites - 1) {
                throw std::invalid_argument("chain: explicit coupling distance " +
                                            std::to_string(d) + " out of range");
            }
            if (!std::isfinite(j)) {
                throw std::invalid_argument("chain: explicit coupling must be finite");
            }
        }
    }
}

double tunneling_energy(const ChainSpec& spec, int distance)
{
    if (distance < 1 || distance > spec.n_sites - 1) {
        throw std::domain_error("chain: tunneling distance " + std::to_string(distance) +
                                " outside [1, " + std::to_string(spec.n_sites - 1) + "]");
    }
    if (const auto* pl = std::get_if<PowerLaw>(&spec.tunneling)) {
        return pl->j_max / std::pow(static_cast<double>(distance), pl->alpha);
    }
    const auto& ex = std::get<ExplicitCouplings>(spec.tunneling);
    const auto it = ex.by_distance.find(distance);
    return it == ex.by_distance.end() ? 0.0 : it->second;
}

Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec)
{
    validate(spec);
    const int n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h.diagonal() = spec.energies;
    for (int d = 1; d <= n - 1; ++d) {
        const double j = tunneling_energy(spec, d);
        for (int i = 0; i + d < n; ++i) {
            h(i, i + d) = j;
            h(i + d, i) = j;
        }
    }
    return h;
}

ChainSpec with_free_energies(const ChainSpec& spec, const Eigen::VectorXd& free_energies)
{
    if (free_energies.size() != spec.n_sites - 1) {
        throw std::invalid_argument("chain: expected " + std::to_string(spec.n_sites - 1) +
                                    " free energies, got " +
                                    std::to_string(free_energies.size()));
    }
    ChainSpec out = spec;
    out.energies.resize(spec.n_sites);
    out.energies[0] = 0.0;
    out.energies.tail(spec.n_sites - 1) = free_energies;
    return out;
}

}  // namespace fluxchain
