#include "fluxchain/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <omp.h>

namespace fluxchain {

OptimizerConfig default_optimizer_config(const EnvironmentModel& model, int n_sites)
{
    OptimizerConfig config;
    if (std::holds_alternative<Coherent>(model)) {
        config.algorithm = Algorithm::AdaMax;
        config.learning_rate = 0.1;
        config.max_steps = 100000;
    } else if (std::holds_alternative<LocalDephasing>(model)) {
        config.algorithm = Algorithm::Oga;
        config.learning_rate = 0.5;
        config.max_steps = 100000;
    } else {
        config.algorithm = n_sites <= 3 ? Algorithm::Oga : Algorithm::AdaMax;
        config.learning_rate = 0.05;
        config.max_steps = 500000;
    }
    return config;
}

std::string to_string(RunStatus status)
{
    switch (status) {
        case RunStatus::Converged: return "converged";
        case RunStatus::MaxSteps: return "max_steps";
        case RunStatus::OutOfBounds: return "out_of_bounds";
        case RunStatus::Failed: return "failed";
    }
    return "unknown";
}

Eigen::VectorXd oga_step(const Eigen::VectorXd& eps, const Eigen::VectorXd& grad,
                         const Eigen::VectorXd& grad_prev, double learning_rate)
{
    return eps + 2.0 * learning_rate * grad - learning_rate * grad_prev;
}

Eigen::VectorXd adamax_step(AdaMaxState& state, const Eigen::VectorXd& eps,
                            const Eigen::VectorXd& grad, const AdaMaxParams& params,
                            double learning_rate)
{
    if (state.k == 0) {
        state.m = Eigen::VectorXd::Zero(eps.size());
        state.v = Eigen::VectorXd::Zero(eps.size());
    }
    state.k += 1;
    state.m = params.beta1 * state.m + (1.0 - params.beta1) * grad;
    const double bias = 1.0 - std::pow(params.beta1, static_cast<double>(state.k));
    if (params.standard_form) {
        state.v = (params.beta2 * state.v).cwiseMax(grad.cwiseAbs());
        Eigen::VectorXd update(eps.size());
        for (Eigen::Index i = 0; i < eps.size(); ++i) {
            update[i] = state.v[i] > 0.0
                            ? learning_rate * state.m[i] / (bias * state.v[i])
                            : 0.0;
        }
        return eps + update;
    }
    state.v = (grad.array() + params.epsilon_div).abs().matrix().cwiseMax(
        params.beta2 * state.v);
    return eps + learning_rate * state.m.cwiseQuotient(bias * state.v);
}

OptimizationRun run_optimization(const ChainSpec& spec0, const EnvironmentModel& model,
                                 const OptimizerConfig& config)
{
    validate(spec0);
    if (spec0.energies[0] != 0.0) {
        throw std::invalid_argument("run_optimization: eps_1 must be pinned at zero");
    }
    const int n = spec0.n_sites;
    if (n < 2) {
        throw std::invalid_argument("run_optimization: need at least two sites");
    }

    OptimizationRun run;
    run.initial = spec0.energies.tail(n - 1);

    Eigen::VectorXd eps = run.initial;
    Eigen::VectorXd grad(n - 1);
    Eigen::VectorXd grad_prev = Eigen::VectorXd::Zero(n - 1);
    AdaMaxState adamax;

    const auto record = [&](const Eigen::VectorXd& point) {
        if (config.trajectory_stride > 0 &&
            run.steps % config.trajectory_stride == 0) {
            run.trajectory.push_back(point);
        }
    };

    try {
        FluxWorkspace workspace(spec0, model);
        record(eps);
        for (;;) {
            const double eta = workspace.flux_and_gradient(eps, grad, config.fd_step);
            const double grad_norm = grad.norm();
            if (grad_norm < config.stop_grad_tol) {
                run.status = RunStatus::Converged;
                run.final_flux = eta;
                run.final_grad_norm = grad_norm;
                break;
            }
            if (run.steps >= config.max_steps) {
                run.status = RunStatus::MaxSteps;
                run.final_flux = eta;
                run.final_grad_norm = grad_norm;
                break;
            }
            if (config.algorithm == Algorithm::Oga) {
                eps = oga_step(eps, grad, grad_prev, config.learning_rate);
                grad_prev = grad;
            } else {
                eps = adamax_step(adamax, eps, grad, config.adamax,
                                  config.learning_rate);
            }
            run.steps += 1;
            record(eps);
            if (eps.cwiseAbs().maxCoeff() > config.energy_bound) {
                run.status = RunStatus::OutOfBounds;
                run.final_flux = workspace.flux_at(eps);
                run.final_grad_norm = grad.norm();
                break;
            }
        }
    } catch (const std::exception& err) {
        run.status = RunStatus::Failed;
        run.diagnostic = err.what();
        run.final_flux = std::numeric_limits<double>::quiet_NaN();
        run.final_grad_norm = std::numeric_limits<double>::quiet_NaN();
    }
    run.final_energies = eps;
    if (config.trajectory_stride > 0 &&
        (run.trajectory.empty() || !(run.trajectory.back().array() == eps.array()).all())) {
        run.trajectory.push_back(eps);
    }
    return run;
}

int default_points_per_dim(int n_sites)
{
    return n_sites <= 3 ? 40 : 4;
}

std::vector<Eigen::VectorXd> sample_hypergrid(const HypergridSampler& sampler, int n_sites)
{
    const int dims = n_sites - 1;
    const int points = sampler.points_per_dim > 0 ? sampler.points_per_dim
                                                  : default_points_per_dim(n_sites);
    if (points < 2) {
        throw std::invalid_argument("hypergrid: need at least two points per dimension");
    }
    std::mt19937_64 rng(sampler.seed);
    std::vector<Eigen::VectorXd> starts(sampler.n_trials);
    const double span = sampler.hi - sampler.lo;
    for (auto& start : starts) {
        start.resize(dims);
        for (int d = 0; d < dims; ++d) {
            const auto idx = rng() % static_cast<std::uint64_t>(points);
            start[d] = sampler.lo + span * static_cast<double>(idx) / (points - 1);
        }
    }
    return starts;
}

MultiStartResult multi_start(const ChainSpec& spec_template, const EnvironmentModel& model,
                             const OptimizerConfig& config, const HypergridSampler& sampler,
                             int threads)
{
    validate(spec_template);
    const auto starts = sample_hypergrid(sampler, spec_template.n_sites);
    const int n_trials = static_cast<int>(starts.size());
    const int workers = threads > 0 ? threads : omp_get_max_threads();

    MultiStartResult result;
    result.runs.resize(n_trials);

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int t = 0; t < n_trials; ++t) {
        const ChainSpec spec = with_free_energies(spec_template, starts[t]);
        OptimizationRun run = run_optimization(spec, model, config);
        run.trial_index = t;
        result.runs[t] = std::move(run);
    }

    for (const auto& run : result.runs) {
        switch (run.status) {
            case RunStatus::Converged: result.converged += 1; break;
            case RunStatus::MaxSteps: result.max_steps += 1; break;
            case RunStatus::OutOfBounds: result.out_of_bounds += 1; break;
            case RunStatus::Failed: result.failed += 1; break;
        }
    }
    std::stable_sort(result.runs.begin(), result.runs.end(),
                     [](const OptimizationRun& a, const OptimizationRun& b) {
                         const bool ca = a.status == RunStatus::Converged;
                         const bool cb = b.status == RunStatus::Converged;
                         if (ca != cb) {
                             return ca;
                         }
                         if (ca && cb && a.final_flux != b.final_flux) {
                             return a.final_flux > b.final_flux;
                         }
                         return a.trial_index < b.trial_index;
                     });
    if (result.converged > 0) {
        result.best_energies = result.runs.front().final_energies;
        result.best_flux = result.runs.front().final_flux;
    }
    return result;
}

}  // namespace fluxchain
