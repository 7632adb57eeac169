#pragma once

#include "scp/components.hpp"
#include "scp/equilibrium.hpp"
#include "scp/integrator.hpp"
#include "scp/nlp.hpp"
#include "scp/ocp.hpp"
#include "scp/parameters.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scp::io
{

/// Batch: only gases flow in and out. Continuous: liquid outlet equals the liquid inlets.
enum class Phase { Batch, Continuous };

std::string_view to_string(Phase phase);

struct ScenarioConfig
{
    Phase phase = Phase::Continuous;
    ModelParameters params;
    equilibrium::ScalingPair pair = equilibrium::ScalingPair::laboratory();
    StateVector x0 = StateVector::Zero();   ///< mol/L
    /// Piecewise-constant inlet flows (L/h): each entry applies from its time on. One entry = constant profile.
    std::vector<std::pair<double, InputVector>> control_table{{0.0, InputVector::Zero()}};
    double horizon = 48.0;
    int steps = 200;
    integrator::IntegratorSettings integrator;
    std::filesystem::path output_dir = ".";

    /// Flows on the uniform grid of `steps` intervals over `horizon`.
    integrator::ControlTrajectory controls() const;

    /// Throws ConfigError: invalid parameters, batch with liquid flows, bad grid, negative state.
    void validate() const;
};

struct ConvergenceConfig
{
    double window = 1.0;                     ///< h
    std::vector<int> levels{8, 16, 32, 64};  ///< step counts, increasing
    int reference_factor = 64;               ///< reference uses finest level * factor steps
};

/// Everything one config file can hold.
struct RunConfig
{
    ScenarioConfig scenario;
    ocp::OcpConfig ocp;   ///< x0/u0/horizon/steps are taken from the scenario
    nlp::SolverSettings solver;
    ConvergenceConfig convergence;

    /// OCP data completed from the scenario (x0, first control entry as u0, horizon, steps).
    ocp::OcpConfig ocp_config() const;
};

/**
 * Sections: [model] (parameter table), [scaling] s_g/s_y, [scenario] phase, x0,
 * x0_unit, u, horizon, steps, parameters (extra parameter file, relative to the
 * config), output; [controls] time = six flows; [integrator]; [ocp]; [solver];
 * [convergence]. Vector entries are comma separated; concentration vectors accept
 * a per-entry unit suffix (g/L, mol/L, M) and `inf`. Unknown keys are errors.
 */
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Numeric CSV with a header row.
struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;   ///< throws ConfigError when absent
};

/// 17 significant digits; inf/nan spelled `inf`, `-inf`, `nan`.
std::string format_double(double v);

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws ConfigError on ragged rows or unparsable fields.
CsvTable read_csv(std::istream& in);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv_file(const std::filesystem::path& path);

/// t, 10 states, 8 species, pH, 6 inputs, newton_iter, residual (28 columns).
std::vector<std::string> trajectory_header();
/// Inputs of row k are those acting on the interval ending at t_k; row 0 repeats the first interval.
CsvTable trajectory_table(const integrator::Trajectory& traj);
/// Per-step diagnostics: newton_iter 0, residual = ||step residual||_inf.
CsvTable trajectory_table(const ocp::DiscreteTrajectory& traj, const std::vector<double>& time,
                          const std::vector<double>& residuals);

CsvTable objective_table(const ocp::ObjectiveBreakdown& o);

/// Matplotlib script that plots the given trajectory CSV (file name relative to the script).
std::string plot_script(const std::string& csv_name, const std::string& title);

} // namespace scp::io
