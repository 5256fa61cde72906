#include "fluxchain/liouvillian.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxchain {

using Complex = std::complex<double>;

void add_dissipator(Eigen::MatrixXcd& superop, const Eigen::MatrixXcd& jump, double rate)
{
    const int n = static_cast<int>(jump.rows());
    if (jump.cols() != n || superop.rows() != Eigen::Index(n) * n ||
        superop.cols() != Eigen::Index(n) * n) {
        throw std::invalid_argument("dissipator: shape mismatch");
    }
    if (rate == 0.0) {
        return;
    }
    const Eigen::MatrixXcd ldl = jump.adjoint() * jump;

    // conj(L) kron L; skip zero blocks so sparse jumps stay cheap.
    for (int j = 0; j < n; ++j) {
        for (int q = 0; q < n; ++q) {
            const Complex cqj = std::conj(jump(q, j));
            if (cqj == 0.0) {
                continue;
            }
            for (int i = 0; i < n; ++i) {
                for (int p = 0; p < n; ++p) {
                    superop(vec_index(p, q, n), vec_index(i, j, n)) += rate * cqj * jump(p, i);
                }
            }
        }
    }
    // -rate/2 (I kron L^dag L): block-diagonal copies of L^dag L.
    for (int q = 0; q < n; ++q) {
        for (int i = 0; i < n; ++i) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(i, q, n)) -= 0.5 * rate * ldl(p, i);
            }
        }
    }
    // -rate/2 ((L^dag L)^T kron I).
    for (int j = 0; j < n; ++j) {
        for (int q = 0; q < n; ++q) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(p, j, n)) -= 0.5 * rate * ldl(j, q);
            }
        }
    }
}

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& jump, double rate)
{
    const Eigen::Index n = jump.rows();
    Eigen::MatrixXcd superop = Eigen::MatrixXcd::Zero(n * n, n * n);
    add_dissipator(superop, jump, rate);
    return superop;
}

void add_coherent(Eigen::MatrixXcd& superop, const Eigen::MatrixXd& hamiltonian)
{
    const int n = static_cast<int>(hamiltonian.rows());
    const Complex mi(0.0, -1.0);
    // -i (I kron H)
    for (int q = 0; q < n; ++q) {
        for (int i = 0; i < n; ++i) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(i, q, n)) += mi * hamiltonian(p, i);
            }
        }
    }
    // +i (H^T kron I)
    for (int j = 0; j < n; ++j) {
        for (int q = 0; q < n; ++q) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(p, j, n)) -= mi * hamiltonian(j, q);
            }
        }
    }
}

namespace {

Eigen::MatrixXcd leak_jump(int n)
{
    Eigen::MatrixXcd jump = Eigen::MatrixXcd::Zero(n, n);
    jump(0, n - 1) = 1.0;  // |1><N|
    return jump;
}

void finish(Liouvillian& liou)
{
    const int n = liou.n_sites;
    liou.modified = liou.matrix;
    liou.modified.row(Liouvillian::norm_row).setZero();
    for (int k = 0; k < n; ++k) {
        liou.modified(Liouvillian::norm_row, vec_index(k, k, n)) = 1.0;
    }
    liou.rhs = Eigen::VectorXcd::Zero(Eigen::Index(n) * n);
    liou.rhs[Liouvillian::norm_row] = 1.0;
}

}  // namespace

double thermal_spectral_factor(double omega_ab, double gamma0, double temperature)
{
    if (!(temperature > 0.0)) {
        throw std::domain_error("thermal_spectral_factor: temperature must be positive");
    }
    const double aw = std::abs(omega_ab);
    if (aw <= kDegeneracyTol) {
        return gamma0 * temperature;  // omega n_BE(omega) -> T as omega -> 0
    }
    const double n_be = 1.0 / std::expm1(aw / temperature);
    return gamma0 * aw * (n_be + (omega_ab > 0.0 ? 1.0 : 0.0));
}

Liouvillian assemble_model_i(const Eigen::MatrixXd& hamiltonian, double gamma,
                             double gamma_leak)
{
    const int n = static_cast<int>(hamiltonian.rows());
    if (gamma < 0.0 || gamma_leak < 0.0) {
        throw std::invalid_argument("model I: rates must be nonnegative");
    }
    if (gamma_leak > 0.0 && n < 2) {
        throw std::invalid_argument("model I: leakage needs at least two sites");
    }
    Liouvillian liou;
    liou.n_sites = n;
    liou.gamma_leak = gamma_leak;
    liou.matrix = Eigen::MatrixXcd::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
    add_coherent(liou.matrix, hamiltonian);
    if (gamma > 0.0) {
        Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            projector.setZero();
            projector(k, k) = 1.0;
            add_dissipator(liou.matrix, projector, gamma);
        }
    }
    if (gamma_leak > 0.0) {
        add_dissipator(liou.matrix, leak_jump(n), gamma_leak);
    }
    finish(liou);
    return liou;
}

namespace detail {

void model_ii_matrix(Eigen::MatrixXcd& superop, const Eigen::MatrixXd& hamiltonian,
                     double gamma0, double temperature, double gamma_leak,
                     ThermalRates* rates_out)
{
    const int n = static_cast<int>(hamiltonian.rows());
    if (gamma0 < 0.0 || gamma_leak < 0.0) {
        throw std::invalid_argument("model II: rates must be nonnegative");
    }
    if (gamma_leak > 0.0 && n < 2) {
        throw std::invalid_argument("model II: leakage needs at least two sites");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("model II: eigendecomposition failed");
    }
    const Eigen::VectorXd& omega = es.eigenvalues();
    Eigen::MatrixXd vecs = es.eigenvectors();
    for (int a = 0; a < n; ++a) {
        int arg = 0;
        vecs.col(a).cwiseAbs().maxCoeff(&arg);
        if (vecs(arg, a) < 0.0) {
            vecs.col(a) *= -1.0;
        }
    }

    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            const double omega_ab = omega[a] - omega[b];
            if (rates_out && a < b && std::abs(omega_ab) <= kDegeneracyTol) {
                rates_out->degenerate_pairs.emplace_back(a, b);
            }
            s(a, b) = thermal_spectral_factor(omega_ab, gamma0, temperature);
            // sum_k <phi_a|k><k|phi_b><phi_b|k><k|phi_a>
            double overlap = 0.0;
            for (int k = 0; k < n; ++k) {
                const double v = vecs(k, a) * vecs(k, b);
                overlap += v * v;
            }
            w(a, b) = std::max(s(a, b) * overlap, 0.0);
        }
    }

    add_coherent(superop, hamiltonian);

    // Secular dissipators summed in closed form. With B_a = phi_a phi_a^T and
    // Phi = [vec B_1 ... vec B_N], the jump (gain) parts of all N(N-1)
    // dissipators collapse to Phi W^T Phi^T, and the anticommutator parts to
    // -1/2 (I kron K + K kron I) with K = sum_a (out-rate of a) B_a.
    Eigen::MatrixXd phi(Eigen::Index(n) * n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::Map<Eigen::MatrixXd> block(phi.col(a).data(), n, n);
        block = vecs.col(a) * vecs.col(a).transpose();
    }
    const Eigen::MatrixXd gain = phi * w.transpose() * phi.transpose();
    const Eigen::VectorXd out_rate = w.rowwise().sum();
    const Eigen::MatrixXd k_op = vecs * out_rate.asDiagonal() * vecs.transpose();

    superop.real() += gain;
    for (int q = 0; q < n; ++q) {
        for (int i = 0; i < n; ++i) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(i, q, n)) -= 0.5 * k_op(p, i);
            }
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int q = 0; q < n; ++q) {
            for (int p = 0; p < n; ++p) {
                superop(vec_index(p, q, n), vec_index(p, j, n)) -= 0.5 * k_op(j, q);
            }
        }
    }

    if (gamma_leak > 0.0) {
        add_dissipator(superop, leak_jump(n), gamma_leak);
    }
    if (rates_out) {
        rates_out->eigenvalues = omega;
        rates_out->eigenvectors = std::move(vecs);
        rates_out->s = std::move(s);
        rates_out->w = std::move(w);
    }
}

}  // namespace detail

std::pair<Liouvillian, ThermalRates> assemble_model_ii(const Eigen::MatrixXd& hamiltonian,
                                                       double gamma0, double temperature,
                                                       double gamma_leak)
{
    const int n = static_cast<int>(hamiltonian.rows());
    Liouvillian liou;
    liou.n_sites = n;
    liou.gamma_leak = gamma_leak;
    liou.matrix = Eigen::MatrixXcd::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
    ThermalRates rates;
    detail::model_ii_matrix(liou.matrix, hamiltonian, gamma0, temperature, gamma_leak,
                            &rates);
    finish(liou);
    return {std::move(liou), std::move(rates)};
}

Liouvillian assemble(const ChainSpec& spec, const EnvironmentModel& model)
{
    validate(spec);
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    if (std::holds_alternative<Coherent>(model)) {
        return assemble_model_i(h, 0.0, spec.gamma_leak);
    }
    if (const auto* deph = std::get_if<LocalDephasing>(&model)) {
        return assemble_model_i(h, deph->gamma, spec.gamma_leak);
    }
    const auto& th = std::get<Thermal>(model);
    return assemble_model_ii(h, th.gamma0, th.temperature, spec.gamma_leak).first;
}

}  // namespace fluxchain
