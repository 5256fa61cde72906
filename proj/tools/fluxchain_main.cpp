// Command-line front end: runs one experiment per invocation and writes the
// CSV payloads plus a manifest into the output directory.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxchain/experiments.hpp"
#include "fluxchain/version.hpp"

namespace {

fluxchain::ExperimentConfig load_config(const std::string& preset_name,
                                        const std::string& config_path)
{
    if (!preset_name.empty() && !config_path.empty()) {
        throw std::invalid_argument("pass either --preset or --config, not both");
    }
    if (!preset_name.empty()) {
        return fluxchain::preset(preset_name);
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw std::invalid_argument("cannot open config file '" + config_path + "'");
        }
        nlohmann::json doc;
        in >> doc;
        return fluxchain::config_from_json(doc);
    }
    throw std::invalid_argument("missing --preset or --config");
}

std::vector<double> parse_profile(const std::string& csv)
{
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        values.push_back(std::stod(item));
    }
    return values;
}

void print_summary(const fluxchain::ResultBundle& bundle, const std::string& out_dir)
{
    const auto& results = bundle.manifest["results"];
    if (results.contains("best_flux")) {
        std::cout << "best flux: " << results["best_flux"].get<double>() << " ("
                  << results["converged"].get<int>() << " converged trials)\n";
    }
    if (results.contains("grid_argmax")) {
        const auto& argmax = results["grid_argmax"];
        std::cout << "grid argmax: eps2 " << argmax["eps2"].get<double>() << ", eps3 "
                  << argmax["eps3"].get<double>() << ", flux "
                  << argmax["flux"].get<double>() << "\n";
    }
    if (results.contains("interior_maximum")) {
        std::cout << "interior maximum: "
                  << (results["interior_maximum"].get<bool>() ? "yes" : "no")
                  << " (peak gamma " << results["peak_gamma"].get<double>() << ")\n";
    }
    if (results.contains("flux")) {
        std::cout << "flux: " << results["flux"].get<double>() << "\n";
    }
    for (const auto& [name, payload] : bundle.csv) {
        std::cout << "wrote " << out_dir << "/" << name << " (" << payload.size()
                  << " bytes)\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"steady-state transport experiments on tight-binding chains"};
    app.set_version_flag("--version", fluxchain::kVersion);
    app.require_subcommand(0, 1);

    bool list_presets = false;
    app.add_flag("--list-presets", list_presets, "list built-in parameter packs");

    std::string preset_name;
    std::string config_path;
    std::string out_dir;
    std::string profile_csv;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 0;
    int threads = -1;
    bool dump_liouvillian = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset_name, "built-in parameter pack name");
        cmd->add_option("--config", config_path, "path to a JSON config or manifest");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
            seed_given = true;
        });
        cmd->add_option("--trials", trials, "number of multi-start trials");
        cmd->add_option("--threads", threads, "worker count (0 = all cores)");
        return cmd;
    };

    auto* fluxmap = add_common(app.add_subcommand("fluxmap", "flux over an energy grid"));
    auto* optimize =
        add_common(app.add_subcommand("optimize", "multi-start optimization campaign"));
    auto* sweep = add_common(
        app.add_subcommand("sweep-gamma", "flux vs dephasing rate at a fixed profile"));
    sweep->add_option("--profile", profile_csv,
                      "comma-separated site energies eps_1..eps_N");
    auto* steadystate = add_common(
        app.add_subcommand("steadystate", "solve and report one steady state"));
    steadystate->add_flag("--dump-liouvillian", dump_liouvillian,
                          "also write the superoperator and thermal rates");
    auto* oracle = add_common(
        app.add_subcommand("oracle-check", "closed forms vs the numeric solver"));

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const auto& name : fluxchain::preset_names()) {
            std::cout << name << "\n";
        }
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        fluxchain::ExperimentConfig config;
        if (app.got_subcommand(oracle) && preset_name.empty() && config_path.empty()) {
            config.kind = fluxchain::ExperimentKind::OracleCheck;  // self-contained
        } else {
            config = load_config(preset_name, config_path);
        }

        if (app.got_subcommand(fluxmap)) {
            config.kind = fluxchain::ExperimentKind::FluxMap;
        } else if (app.got_subcommand(optimize)) {
            config.kind = fluxchain::ExperimentKind::Optimize;
        } else if (app.got_subcommand(sweep)) {
            config.kind = fluxchain::ExperimentKind::GammaSweep;
        } else if (app.got_subcommand(steadystate)) {
            config.kind = fluxchain::ExperimentKind::SteadyStateReport;
        } else if (app.got_subcommand(oracle)) {
            config.kind = fluxchain::ExperimentKind::OracleCheck;
        }

        if (seed_given) {
            config.seed = seed;
            config.sampler.seed = seed;
        }
        if (trials > 0) {
            config.sampler.n_trials = trials;
        }
        if (threads >= 0) {
            config.threads = threads;
        }
        if (!out_dir.empty()) {
            config.out_dir = out_dir;
        }
        if (dump_liouvillian) {
            config.dump_liouvillian = true;
        }
        if (!profile_csv.empty()) {
            const auto values = parse_profile(profile_csv);
            config.sweep.profile =
                Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
        }
        if (config.out_dir.empty()) {
            config.out_dir = "results/" + fluxchain::to_string(config.kind);
        }

        const fluxchain::ResultBundle bundle = fluxchain::run_experiment(config);
        fluxchain::write_bundle(bundle, config.out_dir);
        print_summary(bundle, config.out_dir);
        return 0;
    } catch (const fluxchain::SolverError& err) {
        std::cerr << "solver error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
