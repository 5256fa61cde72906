#include <doctest.h>

#include <cmath>
#include <random>

#include "fluxchain/steady_state.hpp"
#include "test_helpers.hpp"

using namespace fluxchain;
using Complex = std::complex<double>;

namespace {

Eigen::VectorXcd vec_of(const Eigen::MatrixXcd& rho)
{
    const int n = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(Eigen::Index(n) * n);
    for (int j = 0; j < n; ++j) {
        v.segment(vec_index(0, j, n), n) = rho.col(j);
    }
    return v;
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int n)
{
    Eigen::MatrixXcd rho(n, n);
    for (int j = 0; j < n; ++j) {
        rho.col(j) = v.segment(vec_index(0, j, n), n);
    }
    return rho;
}

// max |vec(I)^H M| over columns: how far M is from preserving the trace.
double trace_defect(const Eigen::MatrixXcd& superop, int n)
{
    Eigen::RowVectorXcd trace_row = Eigen::RowVectorXcd::Zero(superop.cols());
    for (int k = 0; k < n; ++k) {
        trace_row += superop.row(vec_index(k, k, n));
    }
    return trace_row.cwiseAbs().maxCoeff();
}

// Model II assembled term by term from the generic dissipator, as a cross
// check of the batched assembly.
Eigen::MatrixXcd model_ii_reference(const Eigen::MatrixXd& h, double gamma0,
                                    double temperature, double gamma_leak)
{
    const int n = static_cast<int>(h.rows());
    const auto [liou, rates] = assemble_model_ii(h, gamma0, temperature, gamma_leak);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
    add_coherent(m, h);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            // rate w(a, b) moves population from eigenstate a to eigenstate b
            const Eigen::MatrixXcd jump =
                (rates.eigenvectors.col(b) * rates.eigenvectors.col(a).transpose())
                    .cast<Complex>();
            add_dissipator(m, jump, rates.w(a, b));
        }
    }
    if (gamma_leak > 0.0) {
        Eigen::MatrixXcd leak = Eigen::MatrixXcd::Zero(n, n);
        leak(0, n - 1) = 1.0;
        add_dissipator(m, leak, gamma_leak);
    }
    return m;
}

}  // namespace

TEST_CASE("identity jump operator is dissipationless")
{
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(testing::max_abs(dissipator(identity, 0.7)) <= 1e-15);
}

TEST_CASE("site projector damps coherences only")
{
    // two sites, L = |1><1|: d rho_12/dt = -G/2 rho_12, populations untouched
    Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(2, 2);
    projector(0, 0) = 1.0;
    const double gamma = 0.3;
    const Eigen::MatrixXcd d = dissipator(projector, gamma);

    Eigen::MatrixXcd rho(2, 2);
    rho << Complex(0.6, 0.0), Complex(0.1, -0.2),
           Complex(0.1, 0.2), Complex(0.4, 0.0);
    const Eigen::MatrixXcd drho = unvec(d * vec_of(rho), 2);

    CHECK(std::abs(drho(0, 0)) <= 1e-15);
    CHECK(std::abs(drho(1, 1)) <= 1e-15);
    CHECK(std::abs(drho(0, 1) - (-0.5 * gamma) * rho(0, 1)) <= 1e-15);
    CHECK(std::abs(drho(1, 0) - (-0.5 * gamma) * rho(1, 0)) <= 1e-15);
}

TEST_CASE("leak jump moves population from the exit to the entry site")
{
    Eigen::MatrixXcd leak = Eigen::MatrixXcd::Zero(2, 2);
    leak(0, 1) = 1.0;  // |1><2|
    const double rate = 0.1;
    const Eigen::MatrixXcd d = dissipator(leak, rate);

    Eigen::MatrixXcd rho(2, 2);
    rho << Complex(0.3, 0.0), Complex(0.05, 0.02),
           Complex(0.05, -0.02), Complex(0.7, 0.0);
    const Eigen::MatrixXcd drho = unvec(d * vec_of(rho), 2);

    CHECK(std::abs(drho(1, 1) - (-rate) * rho(1, 1)) <= 1e-15);
    CHECK(std::abs(drho(0, 0) - rate * rho(1, 1)) <= 1e-15);

    // population sub-block columns sum to zero: no population is lost
    for (int src = 0; src < 2; ++src) {
        Complex sum = 0.0;
        for (int dst = 0; dst < 2; ++dst) {
            sum += d(vec_index(dst, dst, 2), vec_index(src, src, 2));
        }
        CHECK(std::abs(sum) <= 1e-15);
    }
}

TEST_CASE("trivial model I assembly is the zero superoperator")
{
    const Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    const Liouvillian liou = assemble_model_i(h, 0.0, 0.0);
    CHECK(testing::max_abs(liou.matrix) == 0.0);
}

TEST_CASE("two-site dephasing Liouvillian matches the hand expansion")
{
    Eigen::MatrixXd h(2, 2);
    h << 0.0, 0.2,
         0.2, 0.1;
    const Liouvillian liou = assemble_model_i(h, 0.1, 0.0);

    Eigen::MatrixXcd expected(4, 4);
    const Complex i(0.0, 1.0);
    expected << 0.0, -0.2 * i, 0.2 * i, 0.0,
                -0.2 * i, Complex(-0.1, -0.1), 0.0, 0.2 * i,
                0.2 * i, 0.0, Complex(-0.1, 0.1), -0.2 * i,
                0.0, 0.2 * i, -0.2 * i, 0.0;
    CHECK(testing::max_abs(liou.matrix - expected) <= 1e-15);
}

TEST_CASE("assembled Liouvillians preserve the trace")
{
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 30; ++iter) {
        const ChainSpec spec = testing::random_chain(rng);
        const EnvironmentModel model = testing::random_model(rng);
        const Liouvillian liou = assemble(spec, model);
        CHECK(trace_defect(liou.matrix, spec.n_sites) <= 1e-12);
    }
}

TEST_CASE("assembled Liouvillians preserve Hermiticity")
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int iter = 0; iter < 20; ++iter) {
        const ChainSpec spec = testing::random_chain(rng);
        const EnvironmentModel model = testing::random_model(rng);
        const Liouvillian liou = assemble(spec, model);
        const int n = spec.n_sites;

        Eigen::MatrixXcd rho(n, n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                rho(a, b) = Complex(u(rng), u(rng));
            }
        }
        rho = (rho + rho.adjoint()).eval();
        const Eigen::MatrixXcd drho = unvec(liou.matrix * vec_of(rho), n);
        CHECK(testing::max_abs(drho - drho.adjoint()) <= 1e-12);
    }
}

TEST_CASE("thermal spectral factor")
{
    // gamma0 |w| (n_BE + 1) downhill, gamma0 |w| n_BE uphill, gamma0 T at zero
    CHECK(thermal_spectral_factor(0.2, 0.1, 0.2) ==
          doctest::Approx(0.031639534137386534).epsilon(1e-12));
    CHECK(thermal_spectral_factor(-0.2, 0.1, 0.2) ==
          doctest::Approx(0.011639534137386531).epsilon(1e-12));
    CHECK(thermal_spectral_factor(0.0, 0.1, 0.2) ==
          doctest::Approx(0.02).epsilon(1e-14));
    CHECK(thermal_spectral_factor(0.5e-9, 0.1, 0.2) ==
          doctest::Approx(0.02).epsilon(1e-14));
    CHECK_THROWS_AS(thermal_spectral_factor(0.1, 0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(thermal_spectral_factor(0.1, 0.1, -0.2), std::domain_error);
}

TEST_CASE("thermal rates satisfy detailed balance")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> temp(0.05, 0.5);
    for (int iter = 0; iter < 20; ++iter) {
        const ChainSpec spec = testing::random_chain(rng);
        const double t = temp(rng);
        const auto [liou, rates] =
            assemble_model_ii(build_hamiltonian(spec), 0.1, t, spec.gamma_leak);
        const int n = spec.n_sites;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b) {
                    continue;
                }
                CHECK(rates.w(a, b) >= 0.0);
                const double omega_ab = rates.eigenvalues[a] - rates.eigenvalues[b];
                if (omega_ab > 1e-6) {
                    const double ratio = rates.s(a, b) / rates.s(b, a);
                    CHECK(std::abs(ratio - std::exp(omega_ab / t)) <=
                          1e-10 * std::exp(omega_ab / t));
                }
            }
        }
    }
}

TEST_CASE("leak-free thermal chain relaxes to the Gibbs state")
{
    std::mt19937_64 rng(24);
    ChainSpec spec = testing::random_chain(rng, 3, 5);
    spec.gamma_leak = 0.0;
    const double t = 0.2;
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    const auto [liou, rates] = assemble_model_ii(h, 0.1, t, 0.0);
    const SteadyState state = solve_steady_state(liou);

    // populations in the eigenbasis follow exp(-omega/T)
    const Eigen::MatrixXcd rho_eig = rates.eigenvectors.transpose().cast<Complex>() *
                                     state.rho * rates.eigenvectors.cast<Complex>();
    Eigen::VectorXd gibbs =
        (-(rates.eigenvalues.array() - rates.eigenvalues.minCoeff()) / t).exp();
    gibbs /= gibbs.sum();
    for (int a = 0; a < spec.n_sites; ++a) {
        CHECK(std::abs(rho_eig(a, a).real() - gibbs[a]) <= 1e-10);
        for (int b = 0; b < spec.n_sites; ++b) {
            if (a != b) {
                CHECK(std::abs(rho_eig(a, b)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("thermal model with no coupling reduces to the coherent model")
{
    std::mt19937_64 rng(25);
    const ChainSpec spec = testing::random_chain(rng);
    ChainSpec closed = spec;
    closed.gamma_leak = 0.0;
    const Eigen::MatrixXd h = build_hamiltonian(closed);
    const auto [liou, rates] = assemble_model_ii(h, 0.0, 0.2, 0.0);
    const Liouvillian coherent = assemble_model_i(h, 0.0, 0.0);
    CHECK(testing::max_abs(liou.matrix - coherent.matrix) <= 1e-15);
}

TEST_CASE("batched model II assembly matches the per-dissipator sum")
{
    std::mt19937_64 rng(26);
    for (int iter = 0; iter < 10; ++iter) {
        const ChainSpec spec = testing::random_chain(rng, 3, 4);
        const Eigen::MatrixXd h = build_hamiltonian(spec);
        const auto [liou, rates] = assemble_model_ii(h, 0.1, 0.2, spec.gamma_leak);
        const Eigen::MatrixXcd reference =
            model_ii_reference(h, 0.1, 0.2, spec.gamma_leak);
        CHECK(testing::max_abs(liou.matrix - reference) <= 1e-12);
    }
}

TEST_CASE("normalization row and rhs")
{
    const ChainSpec spec = testing::three_site(0.1, -0.2, 0.2, 0.0);
    const Liouvillian liou = assemble(spec, LocalDephasing{0.1});
    const int n = 3;
    for (Eigen::Index c = 0; c < liou.modified.cols(); ++c) {
        const bool diagonal_of_rho =
            c == vec_index(0, 0, n) || c == vec_index(1, 1, n) || c == vec_index(2, 2, n);
        CHECK(liou.modified(Liouvillian::norm_row, c) ==
              (diagonal_of_rho ? Complex(1.0) : Complex(0.0)));
    }
    CHECK(liou.rhs[Liouvillian::norm_row] == Complex(1.0));
    CHECK(liou.rhs.cwiseAbs().sum() == 1.0);
}
