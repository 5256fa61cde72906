// experiments.hpp: batch harness for flux maps, optimization campaigns and
// dephasing sweeps, with deterministic CSV/JSON outputs.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "fluxchain/optimizer.hpp"

namespace fluxchain {

enum class ExperimentKind { FluxMap, Optimize, GammaSweep, SteadyStateReport, OracleCheck };

std::string to_string(ExperimentKind kind);

// eps_2 x eps_3 lattice for three-site flux maps.
struct GridSpec {
    double eps2_min{-1.0};
    double eps2_max{1.0};
    double eps3_min{-1.0};
    double eps3_max{1.0};
    int points{201};        // per axis
    int overlay_trials{8};  // multi-start size for the optimizer overlay
};

// Dephasing-rate sweep at a fixed energy profile.
struct SweepSpec {
    double gamma_min{1e-3};
    double gamma_max{1.0};
    int points{61};
    bool log_scale{true};
    bool include_zero{true};          // prepend the coherent endpoint
    Eigen::VectorXd profile;          // full energies eps_1..eps_N; empty = chain's
};

struct ExperimentConfig {
    ExperimentKind kind{ExperimentKind::FluxMap};
    ChainSpec chain;
    EnvironmentModel environment{Coherent{}};
    OptimizerConfig optimizer;
    bool optimizer_given{false};  // false = derive defaults from the model
    HypergridSampler sampler;
    GridSpec grid;
    SweepSpec sweep;
    std::uint64_t seed{1};
    int threads{0};               // 0 = all available workers
    std::string out_dir;
    bool dump_liouvillian{false};
};

// Parses a config document (or a manifest, whose "config" object is used).
// Throws std::invalid_argument on malformed or inconsistent fields.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Built-in parameter packs; preset(name) throws on unknown names.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// In-memory experiment output: one manifest document plus named CSV payloads.
// CSV bytes are reproducible for a fixed config and seed regardless of the
// worker count; timestamps live only in the manifest.
struct ResultBundle {
    nlohmann::json manifest;
    std::map<std::string, std::string> csv;
};

ResultBundle run_flux_map(const ExperimentConfig& config);
ResultBundle run_optimize_campaign(const ExperimentConfig& config);
ResultBundle run_gamma_sweep(const ExperimentConfig& config);
ResultBundle run_steady_state_report(const ExperimentConfig& config);
ResultBundle run_oracle_check(const ExperimentConfig& config);
ResultBundle run_experiment(const ExperimentConfig& config);

// Writes every CSV payload plus manifest.json under out_dir (created if
// missing).
void write_bundle(const ResultBundle& bundle, const std::string& out_dir);

// Shortest round-trip formatting used for all numeric CSV fields.
std::string format_double(double value);

}  // namespace fluxchain
