#include "fluxchain/three_site.hpp"

namespace fluxchain {
namespace three_site {

double eta_coherent_nn(double eps2, double j1, double gamma_leak)
{
    const double gl = gamma_leak;
    const double j1_2 = j1 * j1;
    const double j1_4 = j1_2 * j1_2;
    return 4.0 * gl * gl * j1_4 /
           (12.0 * gl * j1_4 + gl * gl * gl * (eps2 * eps2 + 2.0 * j1_2));
}

double eta_coherent_nnn(double eps2, double j1, double j2, double gamma_leak)
{
    const double gl = gamma_leak;
    const double path = j1 * j1 - j2 * (eps2 + j2);
    return 4.0 * gl * gl * path * path /
           (12.0 * gl * path * path +
            gl * gl * gl *
                (eps2 * eps2 + 2.0 * eps2 * j2 + 2.0 * (j1 * j1 + j2 * j2)));
}

double eta_dephasing_nn(double eps2, double j1, double gamma_leak, double gamma_deph)
{
    const double gl = gamma_leak;
    const double gd = gamma_deph;
    const double e2 = eps2 * eps2;
    const double j1_2 = j1 * j1;
    const double j1_4 = j1_2 * j1_2;
    const double gl2 = gl * gl;
    const double gd2 = gd * gd;
    const double num =
        2.0 * gl * j1_2 *
        (4.0 * gd2 * gd + 4.0 * gd2 * gl + gd * (gl2 + 8.0 * j1_2) + 2.0 * gl * j1_2);
    const double den =
        gd2 * (12.0 * gl * (e2 + 4.0 * j1_2) + 7.0 * gl2 * gl) +
        gd * (4.0 * gl2 * (2.0 * e2 + 5.0 * j1_2) + gl2 * gl2 + 48.0 * j1_4) +
        gl2 * gl * (e2 + 2.0 * j1_2) + 12.0 * gd2 * gd2 * gl +
        8.0 * gd2 * gd * (2.0 * gl2 + 3.0 * j1_2) + 12.0 * gl * j1_4;
    return num / den;
}

double perturbative_interference_term(double j1, double j2, double gamma_leak,
                                      double gamma_deph)
{
    const double gl2 = gamma_leak * gamma_leak;
    const double j1_2 = j1 * j1;
    const double sum = gl2 + 6.0 * j1_2;
    return 2.0 * gamma_deph * gl2 * j2 * j2 *
           (2.0 * gl2 * gl2 + 23.0 * gl2 * j1_2 - 42.0 * j1_2 * j1_2) /
           (j1_2 * sum * sum * sum);
}

double eta_perturbative_nnn(double j1, double j2, double gamma_leak, double gamma_deph)
{
    const double gl = gamma_leak;
    const double j1_2 = j1 * j1;
    const double j2_2 = j2 * j2;
    const double diff = j1_2 - j2_2;
    const double base =
        4.0 * gl * diff * diff /
        (12.0 * diff * diff + 2.0 * gl * gl * (j1_2 + j2_2));
    const double sum = gl * gl + 6.0 * j1_2;
    // The dephasing suppression of the nearest-neighbor channel equals the
    // first-order coefficient of eta_dephasing_nn at eps2 = 0, which is
    // -6 gl^2 J1^2 / (gl^2 + 6 J1^2)^2.
    const double suppression = -6.0 * gamma_deph * gl * gl * j1_2 / (sum * sum);
    return base + suppression +
           perturbative_interference_term(j1, j2, gamma_leak, gamma_deph);
}

double eta_deep_tunneling_nn(double eps2, double j1, double gamma_leak,
                             double gamma_deph)
{
    const double j1_2 = j1 * j1;
    const double e2 = eps2 * eps2;
    return 4.0 * j1_2 * j1_2 / (gamma_leak * e2) + 2.0 * gamma_deph * j1_2 / e2;
}

double eta_ballistic_nn(double j1, double gamma_leak, double gamma_deph)
{
    const double j1_2 = j1 * j1;
    return 2.0 * j1_2 / gamma_leak -
           gamma_deph * gamma_leak * gamma_leak / (6.0 * j1_2);
}

double eta_small_leak_limit(double gamma_leak)
{
    return gamma_leak / 3.0;
}

}  // namespace three_site
}  // namespace fluxchain
