// three_site.hpp: closed-form steady-state flux for three-site chains with
// eps_1 = eps_3 = 0, used as exact oracles for the numeric pipeline.

#pragma once

namespace fluxchain {
namespace three_site {

// Coherent chain, nearest-neighbor tunneling only:
// 4 gl^2 J1^4 / (12 gl J1^4 + gl^3 (eps2^2 + 2 J1^2)).
double eta_coherent_nn(double eps2, double j1, double gamma_leak);

// Coherent chain with a direct 1-3 tunneling path. Reduces to eta_coherent_nn
// at j2 = 0 and vanishes when J1^2 = J2 (eps2 + J2).
double eta_coherent_nnn(double eps2, double j1, double j2, double gamma_leak);

// Nearest-neighbor chain under uniform local dephasing. Reduces to
// eta_coherent_nn at gamma_deph = 0.
double eta_dephasing_nn(double eps2, double j1, double gamma_leak, double gamma_deph);

// Resonant (all eps = 0) expansion to second order in j2 and first order in
// gamma_deph: an exact-in-j2 base term, the dephasing suppression of the
// nearest-neighbor channel, and the dephasing/long-range interference term
// whose sign flips with gamma_leak vs j1.
double eta_perturbative_nnn(double j1, double j2, double gamma_leak, double gamma_deph);

// The interference term of the expansion alone (the O(j2^2 gamma_deph) part).
double perturbative_interference_term(double j1, double j2, double gamma_leak,
                                      double gamma_deph);

// Asymptotic regimes of the nearest-neighbor flux. Approximations, not exact:
// valid only deep in the stated limits.

// eps2 >> j1 with gamma_leak > j1: 4 J1^4 / (gl eps2^2) + 2 G J1^2 / eps2^2.
double eta_deep_tunneling_nn(double eps2, double j1, double gamma_leak,
                             double gamma_deph);

// eps2 << j1 with gamma_leak >> j1: 2 J1^2 / gl - G gl^2 / (6 J1^2).
double eta_ballistic_nn(double j1, double gamma_leak, double gamma_deph);

// gamma_leak << eps2, j1: the leak is rate-determining and eta -> gl / 3.
double eta_small_leak_limit(double gamma_leak);

}  // namespace three_site
}  // namespace fluxchain
