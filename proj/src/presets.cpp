// Built-in parameter packs. Names follow the figure numbering of the
// benchmark scenarios; `appb-*` covers the five- and six-site variants.

#include <functional>
#include <map>
#include <stdexcept>

#include "fluxchain/experiments.hpp"

namespace fluxchain {

namespace {

ChainSpec three_site_chain(double j1, double j2)
{
    ChainSpec chain;
    chain.n_sites = 3;
    chain.energies = Eigen::VectorXd::Zero(3);
    ExplicitCouplings couplings;
    couplings.by_distance[1] = j1;
    if (j2 != 0.0) {
        couplings.by_distance[2] = j2;
    }
    chain.tunneling = couplings;
    chain.gamma_leak = 0.1;
    return chain;
}

ChainSpec power_law_chain(int n_sites, double alpha)
{
    ChainSpec chain;
    chain.n_sites = n_sites;
    chain.energies = Eigen::VectorXd::Zero(n_sites);
    chain.tunneling = PowerLaw{0.2, alpha};
    chain.gamma_leak = 0.1;
    return chain;
}

ExperimentConfig campaign(ChainSpec chain, EnvironmentModel model, ExperimentKind kind)
{
    ExperimentConfig config;
    config.kind = kind;
    config.chain = std::move(chain);
    config.environment = model;
    config.optimizer = default_optimizer_config(model, config.chain.n_sites);
    config.sampler.n_trials = 100;
    config.sampler.seed = config.seed;
    return config;
}

std::map<std::string, ExperimentConfig> build_presets()
{
    std::map<std::string, ExperimentConfig> presets;

    presets["fig2-left"] = campaign(three_site_chain(0.2, 0.0), Coherent{},
                                    ExperimentKind::Optimize);
    presets["fig2-right"] = campaign(three_site_chain(0.2, 0.1), Coherent{},
                                     ExperimentKind::Optimize);
    presets["fig3-left"] = campaign(three_site_chain(0.2, 0.0), LocalDephasing{0.1},
                                    ExperimentKind::Optimize);
    presets["fig3-right"] = campaign(three_site_chain(0.2, 0.1), LocalDephasing{0.1},
                                     ExperimentKind::Optimize);
    presets["fig4-left"] = campaign(three_site_chain(0.2, 0.0), Thermal{0.1, 0.2},
                                    ExperimentKind::Optimize);
    presets["fig4-right"] = campaign(three_site_chain(0.2, 0.1), Thermal{0.1, 0.2},
                                     ExperimentKind::Optimize);

    const auto add_family = [&presets](const std::string& stem, EnvironmentModel model,
                                       int n_sites, double alpha, ExperimentKind kind) {
        const std::string name =
            stem + "-alpha" + std::to_string(static_cast<int>(alpha)) + "-n" +
            std::to_string(n_sites);
        presets[name] = campaign(power_law_chain(n_sites, alpha), model, kind);
    };
    for (const int n : {9, 10}) {
        for (const double alpha : {1.0, 3.0}) {
            add_family("fig5", Coherent{}, n, alpha, ExperimentKind::Optimize);
            add_family("fig6", LocalDephasing{0.1}, n, alpha, ExperimentKind::Optimize);
            add_family("fig7", LocalDephasing{0.1}, n, alpha, ExperimentKind::GammaSweep);
            add_family("fig8", Thermal{0.1, 0.2}, n, alpha, ExperimentKind::Optimize);
        }
    }
    for (const int n : {5, 6}) {
        for (const double alpha : {1.0, 3.0}) {
            add_family("appb-coh", Coherent{}, n, alpha, ExperimentKind::Optimize);
            add_family("appb-oqs1", LocalDephasing{0.1}, n, alpha,
                       ExperimentKind::Optimize);
            add_family("appb-oqs2", Thermal{0.1, 0.2}, n, alpha,
                       ExperimentKind::Optimize);
        }
    }
    return presets;
}

const std::map<std::string, ExperimentConfig>& preset_table()
{
    static const std::map<std::string, ExperimentConfig> presets = build_presets();
    return presets;
}

}  // namespace

ExperimentConfig preset(const std::string& name)
{
    const auto& presets = preset_table();
    const auto it = presets.find(name);
    if (it == presets.end()) {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return it->second;
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [name, config] : preset_table()) {
        names.push_back(name);
    }
    return names;
}

}  // namespace fluxchain
