#include "scp/cli.hpp"
#include "scp/errors.hpp"
#include "scp/io.hpp"
#include "scp/parameters.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct ModelOverrides
{
    std::optional<std::string> charge_balance;
    std::optional<std::string> carbon_balance;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--charge-balance", charge_balance, "physical | paper-literal");
        cmd->add_option("--carbon-balance", carbon_balance, "liquid-only | paper-literal");
        cmd->add_option("--set", sets, "Override a model parameter, KEY=VALUE (repeatable)");
    }

    void apply(scp::ModelParameters& p) const
    {
        if (charge_balance) {
            scp::set_parameter(p, "charge_balance", *charge_balance);
        }
        if (carbon_balance) {
            scp::set_parameter(p, "carbon_balance", *carbon_balance);
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                throw scp::ConfigError("--set expects KEY=VALUE, got '" + s + "'");
            }
            scp::set_parameter(p, s.substr(0, eq), s.substr(eq + 1));
        }
    }
};

struct RunOptions
{
    std::string config = "config/paper.cfg";
    std::optional<std::string> out;
    std::optional<double> horizon;
    std::optional<int> steps;
    ModelOverrides model;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--config", config, "Scenario config file")->capture_default_str();
        cmd->add_option("--out", out, "Output directory (default: the config's output entry)");
        cmd->add_option("--horizon", horizon, "Override the horizon (h)");
        cmd->add_option("--steps", steps, "Override the number of steps");
        model.attach(cmd);
    }

    scp::io::RunConfig load() const
    {
        auto cfg = scp::io::load_config(config);
        model.apply(cfg.scenario.params);
        if (horizon) {
            cfg.scenario.horizon = *horizon;
        }
        if (steps) {
            cfg.scenario.steps = *steps;
        }
        return cfg;
    }

    std::filesystem::path out_dir(const scp::io::RunConfig& cfg) const
    {
        return out ? std::filesystem::path(*out) : cfg.scenario.output_dir;
    }
};

template <typename Body>
int config_guard(Body&& body)
{
    try {
        return body();
    } catch (const scp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const scp::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
    }
    return scp::cli::kConfigError;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-cell protein reactor: speciation, simulation, economic optimal control"};
    app.require_subcommand(1);

    auto* speciate = app.add_subcommand("speciate", "Solve the acid-base speciation for given totals");
    double c_N = 0.0;
    double c_C = 0.0;
    double c_NO = 0.0;
    double c_Na = 0.0;
    std::optional<std::string> sweep;
    std::optional<std::string> csv;
    std::optional<std::string> parameters;
    ModelOverrides speciate_model;
    speciate->add_option("--c-N", c_N, "Total ammonia nitrogen (mol/L)");
    speciate->add_option("--c-C", c_C, "Total dissolved carbon dioxide (mol/L)");
    speciate->add_option("--c-NO", c_NO, "Nitrate (mol/L)");
    speciate->add_option("--c-Na", c_Na, "Sodium (mol/L)");
    speciate->add_option("--sweep", sweep, "Titration sweep, e.g. \"c_Na 0:1e-2:50\"");
    speciate->add_option("--csv", csv, "Write the species table to this CSV file");
    speciate->add_option("--parameters", parameters, "Model parameter file");
    speciate_model.attach(speciate);

    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario with implicit Euler");
    RunOptions simulate_opts;
    simulate_opts.attach(simulate);

    auto* optimize = app.add_subcommand("optimize", "Solve the economic optimal control problem");
    RunOptions optimize_opts;
    std::optional<int> threads;
    optimize_opts.attach(optimize);
    optimize->add_option("--threads", threads, "Evaluation threads (default: SCP_REACTOR_THREADS or 1)")
        ->check(CLI::Range(1, 256));

    auto* convergence = app.add_subcommand("convergence", "Observed order of the integrator over refinement levels");
    RunOptions convergence_opts;
    bool dilution_only = false;
    bool analytic = false;
    std::vector<int> levels;
    std::optional<double> window;
    convergence_opts.attach(convergence);
    convergence->add_flag("--dilution-only", dilution_only, "Pure washout: kinetics and gas transfer off");
    convergence->add_flag("--analytic", analytic, "Compare with the exact washout (implies --dilution-only)");
    convergence->add_option("--levels", levels, "Step counts, increasing")->delimiter(',');
    convergence->add_option("--window", window, "Window length (h)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : scp::cli::kConfigError;
    }

    if (speciate->parsed()) {
        return config_guard([&] {
            scp::cli::SpeciateRequest request;
            if (parameters) {
                request.params = scp::load_parameters(*parameters);
            }
            speciate_model.apply(request.params);
            request.c_N = c_N;
            request.c_C = c_C;
            request.c_NO = c_NO;
            request.c_Na = c_Na;
            if (sweep) {
                request.sweep = scp::cli::parse_sweep(*sweep);
            }
            if (csv) {
                request.csv = *csv;
            }
            return scp::cli::cmd_speciate(request, std::cout, std::cerr);
        });
    }
    if (simulate->parsed()) {
        return config_guard([&] {
            scp::cli::RunRequest request;
            request.config = simulate_opts.load();
            request.out_dir = simulate_opts.out_dir(request.config);
            return scp::cli::cmd_simulate(request, std::cout, std::cerr);
        });
    }
    if (optimize->parsed()) {
        return config_guard([&] {
            scp::cli::RunRequest request;
            request.config = optimize_opts.load();
            request.out_dir = optimize_opts.out_dir(request.config);
            request.threads = threads ? *threads : scp::cli::threads_from_environment();
            return scp::cli::cmd_optimize(request, std::cout, std::cerr);
        });
    }
    return config_guard([&] {
        scp::cli::ConvergenceRequest request;
        request.config = convergence_opts.load();
        request.out_dir = convergence_opts.out_dir(request.config);
        request.analytic = analytic;
        request.dilution_only = dilution_only || analytic;
        if (!levels.empty()) {
            request.config.convergence.levels = levels;
        }
        if (window) {
            request.config.convergence.window = *window;
        }
        return scp::cli::cmd_convergence(request, std::cout, std::cerr);
    });
}
