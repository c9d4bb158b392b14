#include "dsqos/errors.hpp"
#include "dsqos/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInfeasible = 3 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int jobs = 1;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("config", c.config, "Config file, or the name of a preset")->required();
    cmd->add_option("--seed", c.seed, "Base seed (overrides run.seed)");
    cmd->add_option("--out", c.out, "Write the CSV here instead of stdout");
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--set", c.settings, "Extra key=value config assignment (repeatable)");
}

dsqos::ScenarioConfig load(const Common& c)
{
    dsqos::ScenarioConfig cfg;
    if (std::filesystem::exists(c.config))
        cfg = dsqos::load_config(c.config);
    else
        cfg = dsqos::find_preset(c.config).config;
    for (const auto& s : c.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw dsqos::ConfigError("--set expects key=value, got '" + s + "'");
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t");
            const auto e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
        };
        dsqos::apply_setting(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    if (c.seed)
        cfg.run.seed = *c.seed;
    cfg.validate();
    return cfg;
}

void emit(const Common& c, const std::vector<dsqos::SweepPoint>& rows)
{
    if (c.out.empty())
        std::cout << dsqos::to_csv(rows);
    else
        dsqos::export_csv(rows, c.out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DiffServ edge-router QoS scheduling simulator"};
    app.require_subcommand(1);

    Common run_opts, load_opts, k_opts;
    std::string rates, ks;

    auto* run = app.add_subcommand("run", "Run a config (its sweep section if present, else one point)");
    add_common(run, run_opts);

    auto* sweep_load = app.add_subcommand("sweep-load", "Sweep the per-domain BE rate");
    add_common(sweep_load, load_opts);
    sweep_load->add_option("--rates", rates, "Comma-separated BE rates in bit/s")->required();

    auto* sweep_k = app.add_subcommand("sweep-k", "Sweep the AF tuning factor K (static scheduler)");
    add_common(sweep_k, k_opts);
    sweep_k->add_option("--k", ks, "Comma-separated K values")->required();

    auto* presets = app.add_subcommand("presets", "Built-in scenarios");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List preset names");
    std::string show_name;
    auto* show = presets->add_subcommand("show", "Print a preset as a config file");
    show->add_option("name", show_name)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& p : dsqos::presets())
                std::cout << p.name << "\t" << p.summary << "\n";
        } else if (*show) {
            std::cout << dsqos::serialize_config(dsqos::find_preset(show_name).config);
        } else if (*run) {
            const auto cfg = load(run_opts);
            emit(run_opts, dsqos::run_config(cfg, {run_opts.jobs}));
        } else if (*sweep_load) {
            const auto cfg = load(load_opts);
            emit(load_opts,
                 dsqos::sweep_load(cfg, dsqos::parse_number_list(rates, "--rates"), {load_opts.jobs}));
        } else if (*sweep_k) {
            const auto cfg = load(k_opts);
            emit(k_opts, dsqos::sweep_k(cfg, dsqos::parse_number_list(ks, "--k"), {k_opts.jobs}));
        }
    } catch (const dsqos::InfeasiblePlanError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const dsqos::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
