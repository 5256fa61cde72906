#include "fluxchain/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "fluxchain/three_site.hpp"
#include "fluxchain/version.hpp"

namespace fluxchain {

namespace {

int worker_count(int threads)
{
    return threads > 0 ? threads : omp_get_max_threads();
}

std::string iso_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

double lattice_value(double lo, double hi, int index, int points)
{
    return points <= 1 ? lo : lo + (hi - lo) * index / (points - 1);
}

nlohmann::json manifest_skeleton(const ExperimentConfig& config)
{
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["generated_at"] = iso_timestamp();
    manifest["config"] = config_to_json(config);
    return manifest;
}

std::vector<double> json_doubles(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

}  // namespace

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
        case ExperimentKind::FluxMap: return "fluxmap";
        case ExperimentKind::Optimize: return "optimize";
        case ExperimentKind::GammaSweep: return "sweep-gamma";
        case ExperimentKind::SteadyStateReport: return "steadystate";
        case ExperimentKind::OracleCheck: return "oracle-check";
    }
    return "unknown";
}

namespace {

ExperimentKind kind_from_string(const std::string& name)
{
    if (name == "fluxmap") return ExperimentKind::FluxMap;
    if (name == "optimize") return ExperimentKind::Optimize;
    if (name == "sweep-gamma") return ExperimentKind::GammaSweep;
    if (name == "steadystate") return ExperimentKind::SteadyStateReport;
    if (name == "oracle-check") return ExperimentKind::OracleCheck;
    throw std::invalid_argument("config: unknown experiment kind '" + name + "'");
}

TunnelingSpec tunneling_from_json(const nlohmann::json& doc)
{
    const std::string type = doc.at("type").get<std::string>();
    if (type == "powerlaw") {
        return PowerLaw{doc.at("j_max").get<double>(), doc.at("alpha").get<double>()};
    }
    if (type == "explicit") {
        ExplicitCouplings ex;
        for (const auto& [key, value] : doc.at("couplings").items()) {
            ex.by_distance[std::stoi(key)] = value.get<double>();
        }
        return ex;
    }
    throw std::invalid_argument("config: unknown tunneling type '" + type + "'");
}

nlohmann::json tunneling_to_json(const TunnelingSpec& spec)
{
    nlohmann::json doc;
    if (const auto* pl = std::get_if<PowerLaw>(&spec)) {
        doc["type"] = "powerlaw";
        doc["j_max"] = pl->j_max;
        doc["alpha"] = pl->alpha;
    } else {
        const auto& ex = std::get<ExplicitCouplings>(spec);
        doc["type"] = "explicit";
        doc["couplings"] = nlohmann::json::object();
        for (const auto& [d, j] : ex.by_distance) {
            doc["couplings"][std::to_string(d)] = j;
        }
    }
    return doc;
}

EnvironmentModel environment_from_json(const nlohmann::json& doc)
{
    const std::string type = doc.at("type").get<std::string>();
    if (type == "coherent") {
        return Coherent{};
    }
    if (type == "dephasing") {
        return LocalDephasing{doc.at("gamma").get<double>()};
    }
    if (type == "thermal") {
        return Thermal{doc.at("gamma0").get<double>(),
                       doc.at("temperature").get<double>()};
    }
    throw std::invalid_argument("config: unknown environment type '" + type + "'");
}

nlohmann::json environment_to_json(const EnvironmentModel& model)
{
    nlohmann::json doc;
    if (std::holds_alternative<Coherent>(model)) {
        doc["type"] = "coherent";
    } else if (const auto* deph = std::get_if<LocalDephasing>(&model)) {
        doc["type"] = "dephasing";
        doc["gamma"] = deph->gamma;
    } else {
        const auto& th = std::get<Thermal>(model);
        doc["type"] = "thermal";
        doc["gamma0"] = th.gamma0;
        doc["temperature"] = th.temperature;
    }
    return doc;
}

OptimizerConfig optimizer_from_json(const nlohmann::json& doc, OptimizerConfig config)
{
    if (doc.contains("algorithm")) {
        const std::string name = doc["algorithm"].get<std::string>();
        if (name == "oga") {
            config.algorithm = Algorithm::Oga;
        } else if (name == "adamax") {
            config.algorithm = Algorithm::AdaMax;
        } else {
            throw std::invalid_argument("config: unknown algorithm '" + name + "'");
        }
    }
    config.learning_rate = doc.value("learning_rate", config.learning_rate);
    config.adamax.beta1 = doc.value("beta1", config.adamax.beta1);
    config.adamax.beta2 = doc.value("beta2", config.adamax.beta2);
    config.adamax.epsilon_div = doc.value("epsilon_div", config.adamax.epsilon_div);
    config.adamax.standard_form = doc.value("standard_adamax", config.adamax.standard_form);
    config.stop_grad_tol = doc.value("stop_grad_tol", config.stop_grad_tol);
    config.max_steps = doc.value("max_steps", config.max_steps);
    config.energy_bound = doc.value("energy_bound", config.energy_bound);
    config.fd_step = doc.value("fd_step", config.fd_step);
    config.trajectory_stride = doc.value("trajectory_stride", config.trajectory_stride);
    if (!(config.learning_rate > 0.0) || !(config.stop_grad_tol > 0.0) ||
        config.max_steps < 1 || !(config.energy_bound > 0.0) ||
        !(config.fd_step > 0.0)) {
        throw std::invalid_argument("config: optimizer parameters out of range");
    }
    if (!(config.adamax.beta1 > 0.0 && config.adamax.beta1 < 1.0) ||
        !(config.adamax.beta2 > 0.0 && config.adamax.beta2 < 1.0)) {
        throw std::invalid_argument("config: adamax decay rates must lie in (0, 1)");
    }
    return config;
}

nlohmann::json optimizer_to_json(const OptimizerConfig& config)
{
    return {{"algorithm", config.algorithm == Algorithm::Oga ? "oga" : "adamax"},
            {"learning_rate", config.learning_rate},
            {"beta1", config.adamax.beta1},
            {"beta2", config.adamax.beta2},
            {"epsilon_div", config.adamax.epsilon_div},
            {"standard_adamax", config.adamax.standard_form},
            {"stop_grad_tol", config.stop_grad_tol},
            {"max_steps", config.max_steps},
            {"energy_bound", config.energy_bound},
            {"fd_step", config.fd_step},
            {"trajectory_stride", config.trajectory_stride}};
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& input)
{
    const nlohmann::json& doc = input.contains("config") ? input.at("config") : input;
    ExperimentConfig config;
    config.kind = kind_from_string(doc.value("experiment", "fluxmap"));

    const auto& chain = doc.at("chain");
    config.chain.n_sites = chain.at("n_sites").get<int>();
    if (chain.contains("energies")) {
        const auto values = chain["energies"].get<std::vector<double>>();
        config.chain.energies =
            Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    } else {
        config.chain.energies = Eigen::VectorXd::Zero(config.chain.n_sites);
    }
    config.chain.tunneling = tunneling_from_json(chain.at("tunneling"));
    config.chain.gamma_leak = chain.value("gamma_leak", 0.1);
    validate(config.chain);

    config.environment = doc.contains("environment")
                             ? environment_from_json(doc["environment"])
                             : EnvironmentModel{Coherent{}};

    config.seed = doc.value("seed", std::uint64_t{1});
    config.threads = doc.value("threads", 0);
    config.out_dir = doc.value("out", std::string{});
    config.dump_liouvillian = doc.value("dump_liouvillian", false);

    config.optimizer = default_optimizer_config(config.environment, config.chain.n_sites);
    if (doc.contains("optimizer")) {
        config.optimizer = optimizer_from_json(doc["optimizer"], config.optimizer);
        config.optimizer_given = true;
    }

    if (doc.contains("sampler")) {
        const auto& sampler = doc["sampler"];
        config.sampler.lo = sampler.value("lo", -1.0);
        config.sampler.hi = sampler.value("hi", 1.0);
        config.sampler.points_per_dim = sampler.value("points_per_dim", 0);
        config.sampler.n_trials = sampler.value("n_trials", 100);
        if (config.sampler.n_trials < 1 || config.sampler.hi <= config.sampler.lo) {
            throw std::invalid_argument("config: sampler out of range");
        }
    }
    config.sampler.seed = config.seed;

    if (doc.contains("grid")) {
        const auto& grid = doc["grid"];
        if (grid.contains("eps2")) {
            config.grid.eps2_min = grid["eps2"].at(0).get<double>();
            config.grid.eps2_max = grid["eps2"].at(1).get<double>();
        }
        if (grid.contains("eps3")) {
            config.grid.eps3_min = grid["eps3"].at(0).get<double>();
            config.grid.eps3_max = grid["eps3"].at(1).get<double>();
        }
        config.grid.points = grid.value("points", config.grid.points);
        config.grid.overlay_trials = grid.value("overlay_trials", config.grid.overlay_trials);
        if (config.grid.points < 1 || config.grid.overlay_trials < 0) {
            throw std::invalid_argument("config: grid out of range");
        }
    }

    if (doc.contains("sweep")) {
        const auto& sweep = doc["sweep"];
        config.sweep.gamma_min = sweep.value("gamma_min", config.sweep.gamma_min);
        config.sweep.gamma_max = sweep.value("gamma_max", config.sweep.gamma_max);
        config.sweep.points = sweep.value("points", config.sweep.points);
        config.sweep.log_scale = sweep.value("log_scale", config.sweep.log_scale);
        config.sweep.include_zero = sweep.value("include_zero", config.sweep.include_zero);
        if (sweep.contains("profile")) {
            const auto values = sweep["profile"].get<std::vector<double>>();
            config.sweep.profile =
                Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
        }
        if (config.sweep.points < 1 || !(config.sweep.gamma_min >= 0.0) ||
            config.sweep.gamma_max < config.sweep.gamma_min) {
            throw std::invalid_argument("config: sweep out of range");
        }
        if (config.sweep.log_scale && !(config.sweep.gamma_min > 0.0)) {
            throw std::invalid_argument("config: log-scale sweep needs gamma_min > 0");
        }
    }
    return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config)
{
    nlohmann::json doc;
    doc["experiment"] = to_string(config.kind);
    doc["chain"] = {{"n_sites", config.chain.n_sites},
                    {"energies", json_doubles(config.chain.energies)},
                    {"tunneling", tunneling_to_json(config.chain.tunneling)},
                    {"gamma_leak", config.chain.gamma_leak}};
    doc["environment"] = environment_to_json(config.environment);
    doc["optimizer"] = optimizer_to_json(config.optimizer);
    doc["sampler"] = {{"lo", config.sampler.lo},
                      {"hi", config.sampler.hi},
                      {"points_per_dim", config.sampler.points_per_dim},
                      {"n_trials", config.sampler.n_trials}};
    doc["grid"] = {{"eps2", {config.grid.eps2_min, config.grid.eps2_max}},
                   {"eps3", {config.grid.eps3_min, config.grid.eps3_max}},
                   {"points", config.grid.points},
                   {"overlay_trials", config.grid.overlay_trials}};
    doc["sweep"] = {{"gamma_min", config.sweep.gamma_min},
                    {"gamma_max", config.sweep.gamma_max},
                    {"points", config.sweep.points},
                    {"log_scale", config.sweep.log_scale},
                    {"include_zero", config.sweep.include_zero},
                    {"profile", json_doubles(config.sweep.profile)}};
    doc["seed"] = config.seed;
    doc["threads"] = config.threads;
    doc["out"] = config.out_dir;
    doc["dump_liouvillian"] = config.dump_liouvillian;
    return doc;
}

ResultBundle run_flux_map(const ExperimentConfig& config)
{
    validate(config.chain);
    if (config.chain.n_sites != 3) {
        throw std::invalid_argument("fluxmap: requires a three-site chain");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const int points = config.grid.points;
    const Eigen::Index cells = Eigen::Index(points) * points;
    std::vector<double> values(cells);
    const int workers = worker_count(config.threads);

#pragma omp parallel num_threads(workers)
    {
        FluxWorkspace workspace(config.chain, config.environment);
        Eigen::VectorXd free_energies(2);
#pragma omp for schedule(dynamic, 16)
        for (Eigen::Index c = 0; c < cells; ++c) {
            const int i2 = static_cast<int>(c / points);
            const int i3 = static_cast<int>(c % points);
            free_energies[0] =
                lattice_value(config.grid.eps2_min, config.grid.eps2_max, i2, points);
            free_energies[1] =
                lattice_value(config.grid.eps3_min, config.grid.eps3_max, i3, points);
            try {
                values[c] = workspace.flux_at(free_energies);
            } catch (const SolverError&) {
                values[c] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }

    std::string csv = "eps2,eps3,flux\n";
    Eigen::Index failed_cells = 0;
    Eigen::Index argmax = -1;
    double best = -1.0;
    for (Eigen::Index c = 0; c < cells; ++c) {
        const int i2 = static_cast<int>(c / points);
        const int i3 = static_cast<int>(c % points);
        const double e2 =
            lattice_value(config.grid.eps2_min, config.grid.eps2_max, i2, points);
        const double e3 =
            lattice_value(config.grid.eps3_min, config.grid.eps3_max, i3, points);
        csv += format_double(e2) + "," + format_double(e3) + "," +
               format_double(values[c]) + "\n";
        if (std::isnan(values[c])) {
            failed_cells += 1;
        } else if (values[c] > best) {
            best = values[c];
            argmax = c;
        }
    }

    ResultBundle bundle;
    bundle.manifest = manifest_skeleton(config);
    bundle.csv["fluxmap.csv"] = std::move(csv);
    auto& results = bundle.manifest["results"];
    results["failed_cells"] = failed_cells;
    if (argmax >= 0) {
        results["grid_argmax"] = {
            {"eps2", lattice_value(config.grid.eps2_min, config.grid.eps2_max,
                                   static_cast<int>(argmax / points), points)},
            {"eps3", lattice_value(config.grid.eps3_min, config.grid.eps3_max,
                                   static_cast<int>(argmax % points), points)},
            {"flux", best}};
    }

    if (config.grid.overlay_trials > 0) {
        HypergridSampler sampler = config.sampler;
        sampler.n_trials = config.grid.overlay_trials;
        const MultiStartResult overlay = multi_start(
            config.chain, config.environment, config.optimizer, sampler, config.threads);
        results["overlay"] = {{"converged", overlay.converged},
                              {"flux", overlay.best_flux}};
        if (overlay.best_energies) {
            results["overlay"]["eps2"] = (*overlay.best_energies)[0];
            results["overlay"]["eps3"] = (*overlay.best_energies)[1];
        }
    }
    bundle.manifest["timing"]["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

namespace {

void append_steady_state_csv(ResultBundle& bundle, const SteadyState& state,
                             const std::string& prefix)
{
    std::string pops = "site,population\n";
    for (Eigen::Index k = 0; k < state.populations.size(); ++k) {
        pops += std::to_string(k + 1) + "," + format_double(state.populations[k]) + "\n";
    }
    bundle.csv[prefix + "populations.csv"] = std::move(pops);

    std::string coh;
    for (Eigen::Index i = 0; i < state.coherence_magnitudes.rows(); ++i) {
        for (Eigen::Index j = 0; j < state.coherence_magnitudes.cols(); ++j) {
            coh += format_double(state.coherence_magnitudes(i, j));
            coh += j + 1 == state.coherence_magnitudes.cols() ? '\n' : ',';
        }
    }
    bundle.csv[prefix + "coherences.csv"] = std::move(coh);
}

nlohmann::json steady_state_summary(const SteadyState& state)
{
    return {{"flux", state.flux},
            {"populations", json_doubles(state.populations)},
            {"residual_inf", state.residual_inf},
            {"hermiticity_defect", state.hermiticity_defect},
            {"min_eigenvalue", state.min_eigenvalue},
            {"positivity_warning", state.positivity_warning}};
}

}  // namespace

ResultBundle run_optimize_campaign(const ExperimentConfig& config)
{
    validate(config.chain);
    const auto t0 = std::chrono::steady_clock::now();
    const int n = config.chain.n_sites;
    const MultiStartResult result =
        multi_start(config.chain, config.environment, config.optimizer, config.sampler,
                    config.threads);

    std::string trials = "trial,status,steps,final_grad_norm,final_flux";
    for (int k = 1; k <= n; ++k) {
        trials += ",eps" + std::to_string(k);
    }
    trials += "\n";
    for (const auto& run : result.runs) {
        trials += std::to_string(run.trial_index) + "," + to_string(run.status) + "," +
                  std::to_string(run.steps) + "," + format_double(run.final_grad_norm) +
                  "," + format_double(run.final_flux);
        trials += ",0";  // eps1 gauge
        for (Eigen::Index k = 0; k < run.final_energies.size(); ++k) {
            trials += "," + format_double(run.final_energies[k]);
        }
        trials += "\n";
    }

    std::string profiles = "rank,trial,final_flux";
    for (int k = 1; k <= n; ++k) {
        profiles += ",eps" + std::to_string(k);
    }
    profiles += "\n";
    int rank = 0;
    for (const auto& run : result.runs) {
        if (run.status != RunStatus::Converged) {
            continue;
        }
        profiles += std::to_string(rank++) + "," + std::to_string(run.trial_index) + "," +
                    format_double(run.final_flux) + ",0";
        for (Eigen::Index k = 0; k < run.final_energies.size(); ++k) {
            profiles += "," + format_double(run.final_energies[k]);
        }
        profiles += "\n";
    }

    ResultBundle bundle;
    bundle.manifest = manifest_skeleton(config);
    bundle.csv["trials.csv"] = std::move(trials);
    bundle.csv["profiles.csv"] = std::move(profiles);

    auto& results = bundle.manifest["results"];
    results["converged"] = result.converged;
    results["out_of_bounds"] = result.out_of_bounds;
    results["max_steps"] = result.max_steps;
    results["failed"] = result.failed;
    if (result.best_energies) {
        results["best_flux"] = result.best_flux;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
        full.tail(n - 1) = *result.best_energies;
        results["best_profile"] = json_doubles(full);

        const ChainSpec best_spec = with_free_energies(config.chain, *result.best_energies);
        const SteadyState state =
            solve_steady_state(assemble(best_spec, config.environment));
        results["best_steady_state"] = steady_state_summary(state);
        append_steady_state_csv(bundle, state, "best_");
    }
    bundle.manifest["timing"]["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

ResultBundle run_gamma_sweep(const ExperimentConfig& config)
{
    validate(config.chain);
    if (!std::holds_alternative<LocalDephasing>(config.environment)) {
        throw std::invalid_argument("sweep-gamma: requires the local-dephasing model");
    }
    ChainSpec spec = config.chain;
    if (config.sweep.profile.size() > 0) {
        if (config.sweep.profile.size() != spec.n_sites) {
            throw std::invalid_argument("sweep-gamma: profile length must equal n_sites");
        }
        spec.energies = config.sweep.profile;
    }
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<double> gammas;
    if (config.sweep.include_zero) {
        gammas.push_back(0.0);
    }
    for (int i = 0; i < config.sweep.points; ++i) {
        if (config.sweep.log_scale) {
            const double lg =
                lattice_value(std::log(config.sweep.gamma_min),
                              std::log(config.sweep.gamma_max), i, config.sweep.points);
            gammas.push_back(std::exp(lg));
        } else {
            gammas.push_back(lattice_value(config.sweep.gamma_min,
                                           config.sweep.gamma_max, i,
                                           config.sweep.points));
        }
    }

    std::vector<double> fluxes(gammas.size());
    const int workers = worker_count(config.threads);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        fluxes[i] = steady_state_flux(spec, LocalDephasing{gammas[i]});
    }

    std::string csv = "gamma,flux\n";
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        csv += format_double(gammas[i]) + "," + format_double(fluxes[i]) + "\n";
    }

    std::size_t peak = 0;
    for (std::size_t i = 1; i < fluxes.size(); ++i) {
        if (fluxes[i] > fluxes[peak]) {
            peak = i;
        }
    }
    const bool interior = peak > 0 && peak + 1 < fluxes.size() &&
                          fluxes[peak] > fluxes.front() && fluxes[peak] > fluxes.back();

    ResultBundle bundle;
    bundle.manifest = manifest_skeleton(config);
    bundle.csv["sweep.csv"] = std::move(csv);
    bundle.manifest["results"] = {{"interior_maximum", interior},
                                  {"peak_gamma", gammas[peak]},
                                  {"peak_flux", fluxes[peak]},
                                  {"profile", json_doubles(spec.energies)}};
    bundle.manifest["timing"]["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

namespace {

void dump_matrix_csv(ResultBundle& bundle, const std::string& name,
                     const Eigen::MatrixXd& matrix)
{
    std::string block;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            block += format_double(matrix(i, j));
            block += j + 1 == matrix.cols() ? '\n' : ',';
        }
    }
    bundle.csv[name] = std::move(block);
}

}  // namespace

ResultBundle run_steady_state_report(const ExperimentConfig& config)
{
    validate(config.chain);
    const auto t0 = std::chrono::steady_clock::now();

    ResultBundle bundle;
    bundle.manifest = manifest_skeleton(config);

    if (const auto* th = std::get_if<Thermal>(&config.environment)) {
        const auto [liou, rates] =
            assemble_model_ii(build_hamiltonian(config.chain), th->gamma0,
                              th->temperature, config.chain.gamma_leak);
        const SteadyState state = solve_steady_state(liou);
        bundle.manifest["results"] = steady_state_summary(state);
        append_steady_state_csv(bundle, state, "");
        bundle.manifest["results"]["degenerate_pairs"] = nlohmann::json::array();
        for (const auto& [a, b] : rates.degenerate_pairs) {
            bundle.manifest["results"]["degenerate_pairs"].push_back({a + 1, b + 1});
        }
        if (config.dump_liouvillian) {
            dump_matrix_csv(bundle, "liouvillian_real.csv", liou.matrix.real());
            dump_matrix_csv(bundle, "liouvillian_imag.csv", liou.matrix.imag());
            dump_matrix_csv(bundle, "thermal_s.csv", rates.s);
            dump_matrix_csv(bundle, "thermal_w.csv", rates.w);
            std::string eig = "index,eigenvalue\n";
            for (Eigen::Index a = 0; a < rates.eigenvalues.size(); ++a) {
                eig += std::to_string(a + 1) + "," +
                       format_double(rates.eigenvalues[a]) + "\n";
            }
            bundle.csv["eigenvalues.csv"] = std::move(eig);
        }
    } else {
        const Liouvillian liou = assemble(config.chain, config.environment);
        const SteadyState state = solve_steady_state(liou);
        bundle.manifest["results"] = steady_state_summary(state);
        append_steady_state_csv(bundle, state, "");
        if (config.dump_liouvillian) {
            dump_matrix_csv(bundle, "liouvillian_real.csv", liou.matrix.real());
            dump_matrix_csv(bundle, "liouvillian_imag.csv", liou.matrix.imag());
        }
    }
    bundle.manifest["timing"]["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

ResultBundle run_oracle_check(const ExperimentConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        const char* name;
        double j1;
        double j2;
        double gamma_leak;
        double gamma_deph;
    };
    const Case cases[] = {{"coherent_nn", 0.2, 0.0, 0.1, 0.0},
                          {"coherent_nnn", 0.2, 0.1, 0.1, 0.0},
                          {"dephasing_nn", 0.2, 0.0, 0.1, 0.1}};
    const int points = 101;

    std::string csv = "formula,eps2,analytic,numeric,abs_error\n";
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& c : cases) {
        ChainSpec spec;
        spec.n_sites = 3;
        spec.energies = Eigen::VectorXd::Zero(3);
        ExplicitCouplings couplings;
        couplings.by_distance[1] = c.j1;
        if (c.j2 != 0.0) {
            couplings.by_distance[2] = c.j2;
        }
        spec.tunneling = couplings;
        spec.gamma_leak = c.gamma_leak;
        const EnvironmentModel model =
            c.gamma_deph > 0.0 ? EnvironmentModel{LocalDephasing{c.gamma_deph}}
                               : EnvironmentModel{Coherent{}};

        double max_err = 0.0;
        for (int i = 0; i < points; ++i) {
            const double eps2 = lattice_value(-1.0, 1.0, i, points);
            spec.energies[1] = eps2;
            const double numeric = steady_state_flux(spec, model);
            double analytic = 0.0;
            if (c.gamma_deph > 0.0) {
                analytic =
                    three_site::eta_dephasing_nn(eps2, c.j1, c.gamma_leak, c.gamma_deph);
            } else if (c.j2 != 0.0) {
                analytic = three_site::eta_coherent_nnn(eps2, c.j1, c.j2, c.gamma_leak);
            } else {
                analytic = three_site::eta_coherent_nn(eps2, c.j1, c.gamma_leak);
            }
            const double err = std::abs(analytic - numeric);
            max_err = std::max(max_err, err);
            csv += std::string(c.name) + "," + format_double(eps2) + "," +
                   format_double(analytic) + "," + format_double(numeric) + "," +
                   format_double(err) + "\n";
        }
        summary[c.name] = {{"max_abs_error", max_err}, {"pass", max_err <= 1e-10}};
    }

    ResultBundle bundle;
    bundle.manifest = manifest_skeleton(config);
    bundle.csv["oracle_check.csv"] = std::move(csv);
    bundle.manifest["results"] = summary;
    bundle.manifest["timing"]["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

ResultBundle run_experiment(const ExperimentConfig& config)
{
    switch (config.kind) {
        case ExperimentKind::FluxMap: return run_flux_map(config);
        case ExperimentKind::Optimize: return run_optimize_campaign(config);
        case ExperimentKind::GammaSweep: return run_gamma_sweep(config);
        case ExperimentKind::SteadyStateReport: return run_steady_state_report(config);
        case ExperimentKind::OracleCheck: return run_oracle_check(config);
    }
    throw std::invalid_argument("run_experiment: unknown kind");
}

void write_bundle(const ResultBundle& bundle, const std::string& out_dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& [name, bytes] : bundle.csv) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        out << bytes;
    }
    std::ofstream manifest(fs::path(out_dir) / "manifest.json");
    manifest << bundle.manifest.dump(2) << "\n";
}

}  // namespace fluxchain
