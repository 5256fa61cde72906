// optimizer.hpp: gradient ascent on the steady-state flux over the site
// energies eps_2..eps_N, with multi-start hypergrid initialization.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluxchain/gradient.hpp"

namespace fluxchain {

enum class Algorithm { Oga, AdaMax };

// Parameters of the AdaMax update as printed in the source update rule:
//   m_k = beta1 m_{k-1} + (1 - beta1) g_k
//   v_k = max(|g_k + eps_div|, beta2 v_{k-1})        (elementwise)
//   eps_{k+1} = eps_k + h m_k / (v_k (1 - beta1^k))
// `standard_form` switches v_k to max(beta2 v_{k-1}, |g_k|) with the bias
// correction applied to m_k, the conventional published variant.
struct AdaMaxParams {
    double beta1{0.9};
    double beta2{0.999};
    double epsilon_div{1e-8};
    bool standard_form{false};
};

struct OptimizerConfig {
    Algorithm algorithm{Algorithm::AdaMax};
    double learning_rate{0.1};
    AdaMaxParams adamax;
    double stop_grad_tol{1e-6};     // Euclidean norm threshold on the gradient
    std::int64_t max_steps{100000};
    double energy_bound{10.0};      // |eps_k| beyond this aborts the run
    double fd_step{1e-5};           // central-difference step (thermal model)
    std::int64_t trajectory_stride{0};  // record every k-th iterate; 0 = off
};

// Hyperparameters used throughout the experiments for the given model:
// Coherent -> AdaMax h=0.1 (100k steps), LocalDephasing -> OGA h=0.5 (100k),
// Thermal -> OGA h=0.05 for 3 sites, AdaMax h=0.05 otherwise (500k).
OptimizerConfig default_optimizer_config(const EnvironmentModel& model, int n_sites);

enum class RunStatus { Converged, MaxSteps, OutOfBounds, Failed };

std::string to_string(RunStatus status);

struct OptimizationRun {
    int trial_index{0};
    Eigen::VectorXd initial;          // eps_2..eps_N at start
    Eigen::VectorXd final_energies;   // eps_2..eps_N at termination
    double final_flux{0.0};
    double final_grad_norm{0.0};
    std::int64_t steps{0};            // update steps applied
    RunStatus status{RunStatus::Failed};
    std::string diagnostic;
    std::vector<Eigen::VectorXd> trajectory;  // thinned iterates when enabled
};

// One optimistic-ascent step: eps + 2h g_k - h g_{k-1}. The first step passes
// a zero previous gradient, which reduces it to plain ascent with rate 2h.
Eigen::VectorXd oga_step(const Eigen::VectorXd& eps, const Eigen::VectorXd& grad,
                         const Eigen::VectorXd& grad_prev, double learning_rate);

struct AdaMaxState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    std::int64_t k{0};
};

// One AdaMax step; advances `state` (state.k counts performed steps).
Eigen::VectorXd adamax_step(AdaMaxState& state, const Eigen::VectorXd& eps,
                            const Eigen::VectorXd& grad, const AdaMaxParams& params,
                            double learning_rate);

// Iterates from spec0's energies (eps_1 must be 0) until the gradient norm
// drops below stop_grad_tol, a coordinate leaves the energy box, or max_steps
// is hit. Solver failures mark the run Failed instead of propagating.
OptimizationRun run_optimization(const ChainSpec& spec0, const EnvironmentModel& model,
                                 const OptimizerConfig& config);

// Uniform sampling from a lattice over [lo, hi]^(N-1). 40 points per
// dimension for 3-site chains, 4 for longer ones.
struct HypergridSampler {
    double lo{-1.0};
    double hi{1.0};
    int points_per_dim{0};  // 0 = pick by chain length
    int n_trials{100};
    std::uint64_t seed{1};
};

int default_points_per_dim(int n_sites);

// Initial free-energy vectors for every trial, drawn with a single
// deterministic generator so results do not depend on the worker count.
std::vector<Eigen::VectorXd> sample_hypergrid(const HypergridSampler& sampler,
                                              int n_sites);

struct MultiStartResult {
    // Converged runs first, sorted by final flux descending (ties by trial
    // index), followed by the remaining runs in trial order.
    std::vector<OptimizationRun> runs;
    std::optional<Eigen::VectorXd> best_energies;  // absent if nothing converged
    double best_flux{0.0};
    int converged{0};
    int out_of_bounds{0};
    int max_steps{0};
    int failed{0};
};

// Independent optimization runs from sampled starts, fanned out over
// `threads` workers (0 = all available). Deterministic for a fixed seed.
MultiStartResult multi_start(const ChainSpec& spec_template, const EnvironmentModel& model,
                             const OptimizerConfig& config, const HypergridSampler& sampler,
                             int threads = 0);

}  // namespace fluxchain
