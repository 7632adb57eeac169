#include "scp/cli.hpp"

#include "scp/errors.hpp"
#include "scp/integrator.hpp"
#include "scp/nlp.hpp"
#include "scp/ocp.hpp"
#include "scp/reactor.hpp"
#include "scp/units.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace scp::cli
{

namespace
{

template <typename Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const StepFailure& e) {
        err << "integration failed at step " << e.step_index() << ": " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NonConvergenceError& e) {
        err << "newton did not converge: " << e.what() << " (residual " << e.residual_norm() << " after "
            << e.iterations() << " iterations)\n";
        return kNumericalFailure;
    } catch (const SingularJacobianError& e) {
        err << "singular jacobian: " << e.what() << " (condition estimate " << e.condition_estimate() << ")\n";
        return kNumericalFailure;
    } catch (const nlp::EvaluationError& e) {
        err << "optimizer evaluation failed: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

void prepare_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

double& total_of(StateVector& x, const std::string& name)
{
    if (name == "c_N") {
        return x[idx(State::N)];
    }
    if (name == "c_C") {
        return x[idx(State::C)];
    }
    if (name == "c_NO") {
        return x[idx(State::NO)];
    }
    if (name == "c_Na") {
        return x[idx(State::Na)];
    }
    throw ConfigError("sweep variable must be one of c_N, c_C, c_NO, c_Na; got '" + name + "'");
}

} // namespace

int threads_from_environment()
{
    const char* value = std::getenv("SCP_REACTOR_THREADS");
    if (!value || !*value) {
        return 1;
    }
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (*end != '\0' || n < 1) {
        throw ConfigError(std::string("SCP_REACTOR_THREADS must be a positive integer, got '") + value + "'");
    }
    return static_cast<int>(std::min<long>(n, 256));
}

Sweep parse_sweep(std::string_view text)
{
    std::istringstream in{std::string(text)};
    Sweep s;
    std::string range;
    if (!(in >> s.variable >> range)) {
        throw ConfigError("sweep must look like 'c_Na 0:1e-2:50'");
    }
    std::string rest;
    if (in >> rest) {
        throw ConfigError("sweep: unexpected trailing text '" + rest + "'");
    }
    const auto a = range.find(':');
    const auto b = range.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) {
        throw ConfigError("sweep range must be start:stop:count, got '" + range + "'");
    }
    try {
        std::size_t used = 0;
        const std::string start = range.substr(0, a);
        const std::string stop = range.substr(a + 1, b - a - 1);
        const std::string count = range.substr(b + 1);
        s.start = std::stod(start, &used);
        if (used != start.size()) {
            throw std::invalid_argument(start);
        }
        s.stop = std::stod(stop, &used);
        if (used != stop.size()) {
            throw std::invalid_argument(stop);
        }
        s.count = std::stoi(count, &used);
        if (used != count.size()) {
            throw std::invalid_argument(count);
        }
    } catch (const std::logic_error&) {
        throw ConfigError("sweep range must be start:stop:count with numbers, got '" + range + "'");
    }
    if (s.count < 1 || !(s.start >= 0.0) || !(s.stop >= 0.0) || !std::isfinite(s.start) || !std::isfinite(s.stop)) {
        throw ConfigError("sweep needs count >= 1 and non-negative finite bounds");
    }
    StateVector probe = StateVector::Zero();
    total_of(probe, s.variable);
    return s;
}

io::CsvTable speciation_table(const SpeciateRequest& request)
{
    StateVector x = StateVector::Zero();
    x[idx(State::N)] = request.c_N;
    x[idx(State::C)] = request.c_C;
    x[idx(State::NO)] = request.c_NO;
    x[idx(State::Na)] = request.c_Na;
    if (!((x.array() >= 0.0).all()) || !x.allFinite()) {
        throw ConfigError("speciate: totals must be finite and >= 0");
    }

    io::CsvTable t;
    t.header = {"c_N", "c_C", "c_NO", "c_Na"};
    for (auto name : kSpeciesNames) {
        t.header.push_back("y_" + std::string(name));
    }
    t.header.insert(t.header.end(), {"pH", "residual", "iterations"});

    const int count = request.sweep ? request.sweep->count : 1;
    AlgebraicVector guess = equilibrium::default_initial_guess(x);
    for (int i = 0; i < count; ++i) {
        if (request.sweep) {
            const auto& s = *request.sweep;
            total_of(x, s.variable) = count == 1 ? s.start : s.start + (s.stop - s.start) * i / (count - 1);
            guess = i == 0 ? equilibrium::default_initial_guess(x) : guess;
        }
        const auto sol = equilibrium::solve_speciation(x, guess.cwiseMax(1e-20), request.params, request.pair,
                                                       request.settings);
        guess = sol.y;
        std::vector<double> row{x[idx(State::N)], x[idx(State::C)], x[idx(State::NO)], x[idx(State::Na)]};
        row.insert(row.end(), sol.y.data(), sol.y.data() + kNumSpecies);
        row.push_back(equilibrium::ph_of(sol.y));
        row.push_back(sol.residual_norm);
        row.push_back(sol.iterations);
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_speciate(const SpeciateRequest& request, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto problems = validate_parameters(request.params);
        if (!problems.empty()) {
            throw ConfigError("model parameters: " + problems.front());
        }
        const io::CsvTable t = speciation_table(request);
        out << "charge balance: " << to_string(request.params.charge_balance)
            << ", carbon balance: " << to_string(request.params.carbon_balance) << '\n';
        if (!request.sweep) {
            const auto& row = t.rows.front();
            out << std::scientific << std::setprecision(6);
            for (int j = 0; j < kNumSpecies; ++j) {
                out << std::left << std::setw(8) << kSpeciesNames[j] << ' ' << row[4 + j] << " mol/L\n";
            }
            out << std::fixed << std::setprecision(6) << "pH       " << row[12] << '\n'
                << std::scientific << std::setprecision(3) << "residual " << row[13] << '\n'
                << "iterations " << static_cast<int>(row[14]) << '\n';
        } else {
            out << t.rows.size() << " sweep points over " << request.sweep->variable << ", pH "
                << std::fixed << std::setprecision(6) << t.rows.front()[12] << " -> " << t.rows.back()[12] << '\n';
            if (!request.csv) {
                io::write_csv(out, t);
            }
        }
        if (request.csv) {
            io::write_csv_file(*request.csv, t);
            out << "wrote " << request.csv->string() << '\n';
        }
        return static_cast<int>(kSuccess);
    });
}

int cmd_simulate(const RunRequest& request, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto& sc = request.config.scenario;
        sc.validate();
        prepare_directory(request.out_dir);
        const auto traj = integrator::integrate(sc.x0, equilibrium::default_initial_guess(sc.x0), sc.controls(),
                                                sc.params, sc.pair, sc.integrator);
        io::write_csv_file(request.out_dir / "trajectory.csv", io::trajectory_table(traj));
        write_text(request.out_dir / "plot_trajectory.py",
                   io::plot_script("trajectory.csv", std::string(io::to_string(sc.phase)) + " simulation"));

        int max_iter = 0;
        int halved = 0;
        for (std::size_t k = 1; k < traj.x.size(); ++k) {
            max_iter = std::max(max_iter, traj.iterations[k]);
            halved += traj.substeps[k] > 1 ? 1 : 0;
        }
        const auto& last = traj.x.back();
        out << std::setprecision(6) << io::to_string(sc.phase) << " simulation, " << traj.steps() << " steps over "
            << sc.horizon << " h\n"
            << "final c_X " << last[idx(State::X)] * kBiomassMolarMass << " g/L, pH "
            << equilibrium::ph_of(traj.y.back()) << '\n'
            << "max newton iterations per step " << max_iter << ", halved steps " << halved << '\n'
            << "wrote " << (request.out_dir / "trajectory.csv").string() << '\n';
        return static_cast<int>(kSuccess);
    });
}

int cmd_optimize(const RunRequest& request, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto& sc = request.config.scenario;
        sc.validate();
        if (sc.phase != io::Phase::Continuous) {
            throw ConfigError("optimize needs a continuous-phase scenario");
        }
        const ocp::OcpConfig cfg = request.config.ocp_config();
        cfg.validate();
        prepare_directory(request.out_dir);

        ocp::TranscriptionOptions options;
        options.threads = request.threads;
        options.integrator = sc.integrator;
        nlp::SolverSettings settings = request.config.solver;
        settings.progress = [&out](int outer, double f, double violation, double stationarity) {
            out << "outer " << outer << "  objective " << std::setprecision(10) << f << "  violation "
                << std::setprecision(3) << violation << "  stationarity " << stationarity << std::endl;
        };
        const auto sol = ocp::solve_ocp(cfg, sc.params, sc.pair, settings, options);

        const auto problem = ocp::transcribe(cfg, sc.params, sc.pair, options);
        const Eigen::VectorXd c = problem.constraints(sol.z);
        std::vector<double> residuals{0.0};
        for (int k = 0; k < cfg.steps; ++k) {
            residuals.push_back(c.segment<18>(18 * k).lpNorm<Eigen::Infinity>());
        }
        io::write_csv_file(request.out_dir / "optimal_trajectory.csv",
                           io::trajectory_table(sol.trajectory, sol.controls.time, residuals));
        io::write_csv_file(request.out_dir / "objective.csv", io::objective_table(sol.objective));
        write_text(request.out_dir / "plot_optimal.py", io::plot_script("optimal_trajectory.csv", "optimal operation"));

        const auto& r = sol.report;
        std::ostringstream report;
        report << std::setprecision(17) << "termination = " << nlp::to_string(r.reason) << '\n'
               << "outer_iterations = " << r.outer_iterations << '\n'
               << "inner_iterations = " << r.inner_iterations << '\n'
               << "evaluations = " << r.evaluations << '\n'
               << "objective = " << r.objective << '\n'
               << "constraint_violation = " << r.constraint_violation << '\n'
               << "bound_violation = " << r.bound_violation << '\n'
               << "stationarity = " << r.stationarity << '\n'
               << "wall_time_s = " << r.wall_time << '\n';
        write_text(request.out_dir / "solver_report.txt", report.str());

        out << report.str() << std::setprecision(6) << "phi_eco " << sol.objective.phi_eco << " USD, phi_pH "
            << sol.objective.phi_pH << ", phi_du " << sol.objective.phi_du << '\n'
            << "wrote " << (request.out_dir / "optimal_trajectory.csv").string() << '\n';
        if (r.reason != nlp::Termination::Converged) {
            err << "optimizer stopped without meeting tolerances (" << nlp::to_string(r.reason)
                << "); best iterate written\n";
            return static_cast<int>(kNumericalFailure);
        }
        return static_cast<int>(kSuccess);
    });
}

std::vector<ConvergenceRow> convergence_study(const io::ScenarioConfig& scenario, const io::ConvergenceConfig& study,
                                              bool dilution_only, bool analytic)
{
    if (!(study.window > 0.0) || study.levels.empty() || study.reference_factor < 2) {
        throw ConfigError("convergence study needs a positive window, at least one level and reference_factor >= 2");
    }
    for (std::size_t i = 0; i < study.levels.size(); ++i) {
        if (study.levels[i] < 1 || (i > 0 && study.levels[i] <= study.levels[i - 1])) {
            throw ConfigError("convergence levels must be positive and strictly increasing");
        }
    }
    if (analytic && !dilution_only) {
        throw ConfigError("the analytic reference needs the dilution-only window");
    }
    ModelParameters p = scenario.params;
    InputVector u = scenario.control_table.front().second;
    if (dilution_only) {
        const double Fl = reactor::PhaseIndicators::standard().e_l.dot(u);
        if (!(Fl > 0.0)) {
            throw ConfigError("dilution-only study needs a nonzero liquid flow in the scenario");
        }
        p.kinetics = false;
        p.transfer = false;
        u.setZero();
        u[idx(Feed::W)] = Fl;
    }
    const AlgebraicVector guess = equilibrium::default_initial_guess(scenario.x0);
    auto final_state = [&](int steps) {
        const auto controls = integrator::ControlTrajectory::constant(u, study.window, steps);
        return integrator::integrate(scenario.x0, guess, controls, p, scenario.pair, scenario.integrator).x.back();
    };

    StateVector reference;
    if (analytic) {
        const auto& ind = reactor::PhaseIndicators::standard();
        const double decay = std::exp(-u[idx(Feed::W)] * study.window / p.V);
        reference = scenario.x0.cwiseProduct(ind.liquid_states * decay + ind.gas_states);
    } else {
        reference = final_state(study.levels.back() * study.reference_factor);
    }

    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < study.levels.size(); ++i) {
        const int steps = study.levels[i];
        const StateVector diff = final_state(steps) - reference;
        Eigen::Index worst = 0;
        diff.cwiseAbs().maxCoeff(&worst);
        ConvergenceRow row;
        row.steps = steps;
        row.dt = study.window / steps;
        row.error = analytic ? diff[worst] : std::abs(diff[worst]);
        if (i > 0) {
            const double ratio = std::abs(rows.back().error) / std::abs(row.error);
            row.order = std::log(ratio) / std::log(static_cast<double>(steps) / rows.back().steps);
        }
        rows.push_back(row);
    }
    return rows;
}

io::CsvTable convergence_table(const std::vector<ConvergenceRow>& rows)
{
    io::CsvTable t;
    const bool with_order = rows.size() > 1;
    t.header = {"steps", "dt", "error"};
    if (with_order) {
        t.header.emplace_back("order");
    }
    for (const auto& r : rows) {
        std::vector<double> row{static_cast<double>(r.steps), r.dt, r.error};
        if (with_order) {
            row.push_back(r.order ? *r.order : std::numeric_limits<double>::quiet_NaN());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_convergence(const ConvergenceRequest& request, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        request.config.scenario.validate();
        prepare_directory(request.out_dir);
        const auto rows =
            convergence_study(request.config.scenario, request.config.convergence, request.dilution_only, request.analytic);
        const io::CsvTable t = convergence_table(rows);
        io::write_csv_file(request.out_dir / "convergence.csv", t);
        io::write_csv(out, t);
        out << "wrote " << (request.out_dir / "convergence.csv").string() << '\n';
        return static_cast<int>(kSuccess);
    });
}

} // namespace scp::cli
