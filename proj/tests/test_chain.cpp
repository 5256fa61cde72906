#include <doctest.h>

#include <random>
#include <stdexcept>

#include "test_helpers.hpp"

using namespace fluxchain;

TEST_CASE("power-law tunneling values")
{
    ChainSpec spec;
    spec.n_sites = 4;
    spec.energies = Eigen::VectorXd::Zero(4);
    spec.tunneling = PowerLaw{0.2, 1.0};

    CHECK(tunneling_energy(spec, 1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(tunneling_energy(spec, 2) == doctest::Approx(0.1).epsilon(1e-15));

    spec.tunneling = PowerLaw{0.2, 3.0};
    CHECK(tunneling_energy(spec, 1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(tunneling_energy(spec, 2) == doctest::Approx(0.025).epsilon(1e-15));

    CHECK_THROWS_AS(tunneling_energy(spec, 0), std::domain_error);
    CHECK_THROWS_AS(tunneling_energy(spec, 4), std::domain_error);
}

TEST_CASE("explicit tunneling falls back to zero")
{
    ChainSpec spec = testing::three_site(0.0, 0.0, 0.2, 0.0);
    CHECK(tunneling_energy(spec, 1) == 0.2);
    CHECK(tunneling_energy(spec, 2) == 0.0);
}

TEST_CASE("nearest-neighbor 3-site Hamiltonian")
{
    const ChainSpec spec = testing::three_site(0.0, 0.0, 0.2, 0.0);
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    Eigen::MatrixXd expected(3, 3);
    expected << 0.0, 0.2, 0.0,
                0.2, 0.0, 0.2,
                0.0, 0.2, 0.0;
    CHECK((h - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-site Hamiltonian")
{
    ChainSpec spec;
    spec.n_sites = 1;
    spec.energies = Eigen::VectorXd::Constant(1, 0.5);
    spec.tunneling = ExplicitCouplings{};
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    CHECK(h.rows() == 1);
    CHECK(h(0, 0) == 0.5);
}

TEST_CASE("next-nearest-neighbor couplings reach the corner")
{
    const ChainSpec spec = testing::three_site(-0.2, -0.05, 0.2, 0.1);
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    CHECK(h(0, 2) == 0.1);
    CHECK(h(2, 0) == 0.1);
    CHECK(h(1, 1) == -0.2);
    CHECK(h(2, 2) == -0.05);
}

TEST_CASE("Hamiltonian is exactly symmetric")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const ChainSpec spec = testing::random_chain(rng);
        const Eigen::MatrixXd h = build_hamiltonian(spec);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("energy shift adds a multiple of the identity")
{
    std::mt19937_64 rng(8);
    const ChainSpec spec = testing::random_chain(rng);
    const double shift = 0.375;
    ChainSpec shifted = spec;
    shifted.energies.array() += shift;
    const Eigen::MatrixXd h0 = build_hamiltonian(spec);
    const Eigen::MatrixXd h1 = build_hamiltonian(shifted);
    const Eigen::MatrixXd identity =
        Eigen::MatrixXd::Identity(spec.n_sites, spec.n_sites);
    CHECK(((h1 - h0) - shift * identity).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("power-law coupling decays strictly with distance")
{
    ChainSpec spec;
    spec.n_sites = 8;
    spec.energies = Eigen::VectorXd::Zero(8);
    for (const double alpha : {0.5, 1.0, 3.0}) {
        spec.tunneling = PowerLaw{0.2, alpha};
        for (int d = 1; d < 7; ++d) {
            CHECK(tunneling_energy(spec, d) > tunneling_energy(spec, d + 1));
        }
    }
}

TEST_CASE("spec validation rejects bad inputs")
{
    ChainSpec spec = testing::three_site(0.0, 0.0, 0.2, 0.0);
    SUBCASE("size mismatch")
    {
        spec.energies.resize(2);
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }
    SUBCASE("nonpositive power-law parameters")
    {
        spec.tunneling = PowerLaw{0.0, 1.0};
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
        spec.tunneling = PowerLaw{0.2, -1.0};
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }
    SUBCASE("explicit distance out of range")
    {
        ExplicitCouplings couplings;
        couplings.by_distance[3] = 0.1;  // N - 1 == 2
        spec.tunneling = couplings;
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }
    SUBCASE("negative leak")
    {
        spec.gamma_leak = -0.1;
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }
    SUBCASE("leak on a single site")
    {
        spec.n_sites = 1;
        spec.energies.resize(1);
        spec.tunneling = ExplicitCouplings{};
        spec.gamma_leak = 0.1;
        CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    }
}
