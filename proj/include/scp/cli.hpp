#pragma once

#include "scp/equilibrium.hpp"
#include "scp/io.hpp"
#include "scp/parameters.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scp::cli
{

/// Stable process exit codes.
enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kConfigError = 2 };

/// Worker threads for transcription evaluations from SCP_REACTOR_THREADS (default 1).
int threads_from_environment();

struct Sweep
{
    std::string variable;   ///< c_N, c_C, c_NO or c_Na
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
};

/// "c_Na 0:1e-2:50" -> 50 evenly spaced values from 0 to 1e-2 inclusive.
Sweep parse_sweep(std::string_view text);

struct SpeciateRequest
{
    ModelParameters params;
    equilibrium::ScalingPair pair = equilibrium::ScalingPair::laboratory();
    equilibrium::SpeciationSettings settings;
    double c_N = 0.0;
    double c_C = 0.0;
    double c_NO = 0.0;
    double c_Na = 0.0;
    std::optional<Sweep> sweep;
    std::optional<std::filesystem::path> csv;
};

/// Columns c_N, c_C, c_NO, c_Na, y_<species>..., pH, residual, iterations; one row per sweep point.
io::CsvTable speciation_table(const SpeciateRequest& request);

int cmd_speciate(const SpeciateRequest& request, std::ostream& out, std::ostream& err);

struct RunRequest
{
    io::RunConfig config;
    std::filesystem::path out_dir = ".";
    int threads = 1;
};

/// Writes trajectory.csv and plot_trajectory.py.
int cmd_simulate(const RunRequest& request, std::ostream& out, std::ostream& err);

/// Writes optimal_trajectory.csv, objective.csv, solver_report.txt and plot_optimal.py.
int cmd_optimize(const RunRequest& request, std::ostream& out, std::ostream& err);

struct ConvergenceRow
{
    int steps = 0;
    double dt = 0.0;
    double error = 0.0;             ///< signed against the exact solution, else ||.||_inf vs the reference
    std::optional<double> order;    ///< absent on the coarsest level
};

/**
 * Implicit Euler errors at the end of the window for each level. Dilution-only
 * keeps the scenario's total liquid flow as pure water with kinetics and transfer
 * off; `analytic` (dilution-only) compares with the exact exponential washout,
 * otherwise with a run at finest * reference_factor steps.
 */
std::vector<ConvergenceRow> convergence_study(const io::ScenarioConfig& scenario, const io::ConvergenceConfig& study,
                                              bool dilution_only, bool analytic);

/// steps, dt, error and, with more than one level, order.
io::CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);

struct ConvergenceRequest
{
    io::RunConfig config;
    std::filesystem::path out_dir = ".";
    bool dilution_only = false;
    bool analytic = false;
};

/// Writes convergence.csv.
int cmd_convergence(const ConvergenceRequest& request, std::ostream& out, std::ostream& err);

} // namespace scp::cli
