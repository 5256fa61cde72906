#include <doctest.h>

#include <cmath>
#include <random>

#include "fluxchain/steady_state.hpp"
#include "fluxchain/three_site.hpp"
#include "test_helpers.hpp"

using namespace fluxchain;
using namespace fluxchain::three_site;

TEST_CASE("coherent nearest-neighbor closed form")
{
    CHECK(eta_coherent_nn(0.0, 0.2, 0.1) == doctest::Approx(0.032).epsilon(1e-14));
    CHECK(eta_coherent_nn(0.5, 0.2, 0.1) == eta_coherent_nn(-0.5, 0.2, 0.1));

    // leak-limited regime approaches gl / 3
    const double gl = 1e-6;
    CHECK(std::abs(eta_coherent_nn(0.3, 0.2, gl) - eta_small_leak_limit(gl)) <=
          1e-6 * eta_small_leak_limit(gl));
}

TEST_CASE("long-range closed form reduces and interferes")
{
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const double eps2 = u(rng);
        CHECK(eta_coherent_nnn(eps2, 0.2, 0.0, 0.1) == eta_coherent_nn(eps2, 0.2, 0.1));
    }
    // destructive interference zero at J1^2 = J2 (eps2 + J2)
    CHECK(eta_coherent_nnn(0.3, 0.2, 0.1, 0.1) == 0.0);
}

TEST_CASE("dephasing closed form reduces to the coherent one")
{
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const double eps2 = u(rng);
        CHECK(eta_dephasing_nn(eps2, 0.2, 0.1, 0.0) ==
              doctest::Approx(eta_coherent_nn(eps2, 0.2, 0.1)).epsilon(1e-15));
    }
}

TEST_CASE("closed forms match the numeric solver to 1e-10")
{
    for (int i = 0; i < 101; ++i) {
        const double eps2 = -1.0 + 2.0 * i / 100.0;

        const double nn = steady_state_flux(testing::three_site(eps2, 0.0, 0.2, 0.0),
                                            Coherent{});
        CHECK(std::abs(nn - eta_coherent_nn(eps2, 0.2, 0.1)) <= 1e-10);

        const double nnn = steady_state_flux(testing::three_site(eps2, 0.0, 0.2, 0.1),
                                             Coherent{});
        CHECK(std::abs(nnn - eta_coherent_nnn(eps2, 0.2, 0.1, 0.1)) <= 1e-10);

        const double deph = steady_state_flux(testing::three_site(eps2, 0.0, 0.2, 0.0),
                                              LocalDephasing{0.1});
        CHECK(std::abs(deph - eta_dephasing_nn(eps2, 0.2, 0.1, 0.1)) <= 1e-10);
    }
}

TEST_CASE("dephasing closed form on a (eps2, gamma) grid")
{
    for (const double eps2 : {-0.7, -0.1, 0.4}) {
        for (const double gamma : {0.05, 0.1, 0.3}) {
            const double numeric = steady_state_flux(
                testing::three_site(eps2, 0.0, 0.2, 0.0), LocalDephasing{gamma});
            CHECK(std::abs(numeric - eta_dephasing_nn(eps2, 0.2, 0.1, gamma)) <= 1e-10);
        }
    }
}

TEST_CASE("perturbative expansion at resonance")
{
    // base point: expansion at gamma_deph = 0, j2 = 0 equals the closed form
    CHECK(eta_perturbative_nnn(0.2, 0.0, 0.1, 0.0) ==
          doctest::Approx(eta_coherent_nn(0.0, 0.2, 0.1)).epsilon(1e-14));

    // interference term turns negative once the leak is slow
    CHECK(perturbative_interference_term(0.1, 0.05, 0.01, 0.1) < 0.0);
    CHECK(perturbative_interference_term(0.2, 0.05, 0.6, 0.1) > 0.0);

    // linear-in-gamma accuracy: residual shrinks quadratically with gamma
    const auto residual = [](double gamma_deph) {
        const double exact = steady_state_flux(
            testing::three_site(0.0, 0.0, 0.2, 1e-3), LocalDephasing{gamma_deph});
        return std::abs(exact - eta_perturbative_nnn(0.2, 1e-3, 0.1, gamma_deph));
    };
    const double coarse = residual(1e-3);
    const double fine = residual(1e-4);
    CHECK(coarse <= 5e-5);
    CHECK(fine <= 1e-6);
    CHECK(coarse / fine > 50.0);
    CHECK(coarse / fine < 200.0);

    // the j2-dependent part is captured to O(j2^2 gamma): the mixed double
    // difference matches the interference term to a few percent
    const double j2 = 1e-3;
    const double gd = 1e-4;
    const auto eta_at = [&](double j2v, double gdv) {
        const ChainSpec spec = testing::three_site(0.0, 0.0, 0.2, j2v);
        return gdv > 0.0 ? steady_state_flux(spec, LocalDephasing{gdv})
                         : steady_state_flux(spec, Coherent{});
    };
    const double cross = eta_at(j2, gd) - eta_at(0.0, gd) - eta_at(j2, 0.0) +
                         eta_at(0.0, 0.0);
    const double predicted = perturbative_interference_term(0.2, j2, 0.1, gd);
    CHECK(std::abs(cross - predicted) <= 0.02 * std::abs(predicted));
}

TEST_CASE("asymptotic regimes of the nearest-neighbor flux")
{
    // deep tunneling: large detuning, leak faster than tunneling
    {
        const double eps2 = 3.0, j1 = 0.05, gl = 0.3, gd = 1e-3;
        const double exact =
            steady_state_flux(testing::three_site(eps2, 0.0, j1, 0.0, gl),
                              LocalDephasing{gd});
        const double approx = eta_deep_tunneling_nn(eps2, j1, gl, gd);
        CHECK(std::abs(exact - approx) <= 0.03 * exact);
        // dephasing assists: the correction is positive
        CHECK(eta_deep_tunneling_nn(eps2, j1, gl, gd) >
              eta_deep_tunneling_nn(eps2, j1, gl, 0.0));
    }
    // ballistic: resonant chain, leak much faster than tunneling
    {
        const double j1 = 0.2, gl = 2.0, gd = 1e-4;
        const double exact = steady_state_flux(
            testing::three_site(0.0, 0.0, j1, 0.0, gl), LocalDephasing{gd});
        const double approx = eta_ballistic_nn(j1, gl, gd);
        CHECK(std::abs(exact - approx) <= 0.1 * exact);
        // dephasing suppresses ballistic flow
        CHECK(eta_ballistic_nn(j1, gl, gd) < eta_ballistic_nn(j1, gl, 0.0));
    }
}
