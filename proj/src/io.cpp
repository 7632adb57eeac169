#include "scp/io.hpp"

#include "scp/errors.hpp"
#include "scp/units.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace scp::io
{

namespace
{

namespace pt = boost::property_tree;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (t == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || std::isnan(v)) {
        throw ConfigError("'" + key + "': cannot parse '" + t + "' as a number");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text)
{
    const double v = parse_number(key, text);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError("'" + key + "': expected an integer, got '" + trim(text) + "'");
    }
    return static_cast<int>(v);
}

bool parse_switch(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "on" || t == "true" || t == "1") {
        return true;
    }
    if (t == "off" || t == "false" || t == "0") {
        return false;
    }
    throw ConfigError("'" + key + "': expected on/off, got '" + t + "'");
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vector(const std::string& key, const std::string& text)
{
    const auto items = split(text, ',');
    if (static_cast<int>(items.size()) != N) {
        throw ConfigError("'" + key + "': expected " + std::to_string(N) + " comma-separated values, got " +
                          std::to_string(items.size()));
    }
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) {
        v[i] = parse_number(key, items[i]);
    }
    return v;
}

enum class Unit { MolPerL, GramPerL };

Unit parse_unit(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "mol/L" || t == "M") {
        return Unit::MolPerL;
    }
    if (t == "g/L") {
        return Unit::GramPerL;
    }
    throw ConfigError("'" + key + "': unit must be g/L, mol/L or M, got '" + t + "'");
}

/// Ten concentrations, each optionally suffixed by a unit; `fallback` applies to bare numbers.
StateVector parse_concentrations(const std::string& key, const std::string& text, Unit fallback)
{
    const auto items = split(text, ',');
    if (static_cast<int>(items.size()) != kNumStates) {
        throw ConfigError("'" + key + "': expected 10 comma-separated values, got " + std::to_string(items.size()));
    }
    const auto& masses = MolarMassTable::standard().grams_per_mol;
    StateVector v;
    for (int i = 0; i < kNumStates; ++i) {
        std::string number = items[i];
        Unit unit = fallback;
        const auto space = items[i].find_first_of(" \t");
        if (space != std::string::npos) {
            number = trim(std::string_view(items[i]).substr(0, space));
            unit = parse_unit(key, items[i].substr(space));
        }
        const double value = parse_number(key, number);
        v[i] = unit == Unit::GramPerL ? value / masses[i] : value;
    }
    return v;
}

using Section = std::map<std::string, std::string>;

Section flatten(const std::string& name, const pt::ptree& node)
{
    Section s;
    for (const auto& [key, child] : node) {
        if (!child.empty()) {
            throw ConfigError("[" + name + "]: nested key '" + key + "'");
        }
        s[key] = child.data();
    }
    return s;
}

/// Pops a key, returning whether it was present.
bool take(Section& s, const std::string& key, std::string& value)
{
    const auto it = s.find(key);
    if (it == s.end()) {
        return false;
    }
    value = it->second;
    s.erase(it);
    return true;
}

void reject_rest(const std::string& name, const Section& s)
{
    if (!s.empty()) {
        throw ConfigError("[" + name + "]: unknown key '" + s.begin()->first + "'");
    }
}

void read_scaling(Section s, equilibrium::ScalingPair& pair)
{
    std::string v;
    if (take(s, "s_g", v)) {
        pair.s_g = parse_vector<kNumSpecies>("s_g", v);
    }
    if (take(s, "s_y", v)) {
        pair.s_y = parse_vector<kNumSpecies>("s_y", v);
    }
    reject_rest("scaling", s);
}

void read_integrator(Section s, integrator::IntegratorSettings& it)
{
    std::string v;
    if (take(s, "newton_tol", v)) {
        it.newton.tol = parse_number("newton_tol", v);
    }
    if (take(s, "newton_max_iter", v)) {
        it.newton.max_iter = parse_int("newton_max_iter", v);
    }
    if (take(s, "step_rtol", v)) {
        it.newton.step_rtol = parse_number("step_rtol", v);
    }
    if (take(s, "max_condition", v)) {
        it.newton.max_condition = parse_number("max_condition", v);
    }
    if (take(s, "speciation_tol", v)) {
        it.speciation.tol = parse_number("speciation_tol", v);
    }
    if (take(s, "speciation_max_iter", v)) {
        it.speciation.max_iter = parse_int("speciation_max_iter", v);
    }
    if (take(s, "half_step_retry", v)) {
        it.retry_with_half_step = parse_switch("half_step_retry", v);
    }
    reject_rest("integrator", s);
}

void read_ocp(Section s, ocp::OcpConfig& o)
{
    std::string v;
    Unit unit = Unit::MolPerL;
    if (take(s, "x_unit", v)) {
        unit = parse_unit("x_unit", v);
    }
    const std::pair<const char*, double*> scalars[] = {
        {"alpha_eco", &o.alpha_eco}, {"alpha_pH", &o.alpha_pH}, {"alpha_du", &o.alpha_du},
        {"Q_pH", &o.Q_pH},           {"p_X", &o.p_X},           {"pH_target", &o.pH_target},
    };
    for (const auto& [key, field] : scalars) {
        if (take(s, key, v)) {
            *field = parse_number(key, v);
        }
    }
    if (take(s, "Q_du", v)) {
        o.Q_du = parse_vector<kNumFeeds>("Q_du", v);
    }
    if (take(s, "p_F", v)) {
        o.p_F = parse_vector<kNumFeeds>("p_F", v);
    }
    if (take(s, "x_min", v)) {
        o.x_min = parse_concentrations("x_min", v, unit);
    }
    if (take(s, "x_max", v)) {
        o.x_max = parse_concentrations("x_max", v, unit);
    }
    if (take(s, "alpha_min", v)) {
        o.alpha_min = parse_vector<kNumSpecies>("alpha_min", v);
    }
    if (take(s, "alpha_max", v)) {
        o.alpha_max = parse_vector<kNumSpecies>("alpha_max", v);
    }
    if (take(s, "u_min", v)) {
        o.u_min = parse_vector<kNumFeeds>("u_min", v);
    }
    if (take(s, "u_max", v)) {
        o.u_max = parse_vector<kNumFeeds>("u_max", v);
    }
    reject_rest("ocp", s);
}

void read_solver(Section s, nlp::SolverSettings& so)
{
    std::string v;
    const std::pair<const char*, double*> reals[] = {
        {"feas_tol", &so.feas_tol},   {"opt_tol", &so.opt_tol},
        {"rho0", &so.rho0},           {"armijo", &so.armijo},
        {"backtrack", &so.backtrack}, {"penalty_growth", &so.penalty_growth},
        {"required_shrink", &so.required_shrink},
    };
    for (const auto& [key, field] : reals) {
        if (take(s, key, v)) {
            *field = parse_number(key, v);
        }
    }
    const std::pair<const char*, int*> ints[] = {
        {"max_outer", &so.max_outer},
        {"max_inner", &so.max_inner},
        {"memory", &so.memory},
        {"max_backtracks", &so.max_backtracks},
    };
    for (const auto& [key, field] : ints) {
        if (take(s, key, v)) {
            *field = parse_int(key, v);
        }
    }
    if (take(s, "second_order", v)) {
        so.second_order = parse_switch("second_order", v);
    }
    reject_rest("solver", s);
}

void read_convergence(Section s, ConvergenceConfig& c)
{
    std::string v;
    if (take(s, "window", v)) {
        c.window = parse_number("window", v);
    }
    if (take(s, "levels", v)) {
        c.levels.clear();
        for (const auto& item : split(v, ',')) {
            c.levels.push_back(parse_int("levels", item));
        }
    }
    if (take(s, "reference_factor", v)) {
        c.reference_factor = parse_int("reference_factor", v);
    }
    reject_rest("convergence", s);
    if (!(c.window > 0.0) || c.levels.empty() || c.reference_factor < 2) {
        throw ConfigError("[convergence]: needs window > 0, at least one level and reference_factor >= 2");
    }
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        if (c.levels[i] < 1 || (i > 0 && c.levels[i] <= c.levels[i - 1])) {
            throw ConfigError("[convergence]: levels must be positive and strictly increasing");
        }
    }
}

} // namespace

std::string_view to_string(Phase phase)
{
    return phase == Phase::Batch ? "batch" : "continuous";
}

integrator::ControlTrajectory ScenarioConfig::controls() const
{
    integrator::ControlTrajectory c = integrator::ControlTrajectory::constant(InputVector::Zero(), horizon, steps);
    std::size_t entry = 0;
    for (int k = 0; k < steps; ++k) {
        while (entry + 1 < control_table.size() && control_table[entry + 1].first <= c.time[k] + 1e-12) {
            ++entry;
        }
        c.inputs[k] = control_table[entry].second;
    }
    return c;
}

void ScenarioConfig::validate() const
{
    const auto problems = validate_parameters(params);
    if (!problems.empty()) {
        throw ConfigError("model parameters: " + problems.front());
    }
    try {
        pair.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("scaling: ") + e.what());
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon) || steps < 1) {
        throw ConfigError("scenario: needs horizon > 0 and steps >= 1");
    }
    if (!((x0.array() >= 0.0).all()) || !x0.allFinite()) {
        throw ConfigError("scenario: x0 must be finite and >= 0");
    }
    if (control_table.empty() || control_table.front().first != 0.0) {
        throw ConfigError("scenario: the control profile must start at t = 0");
    }
    for (std::size_t i = 0; i < control_table.size(); ++i) {
        const auto& [t, u] = control_table[i];
        if (i > 0 && !(t > control_table[i - 1].first)) {
            throw ConfigError("scenario: control times must be strictly increasing");
        }
        if (!((u.array() >= 0.0).all()) || !u.allFinite()) {
            throw ConfigError("scenario: inlet flows must be finite and >= 0");
        }
        if (phase == Phase::Batch) {
            for (Feed f : kLiquidFeeds) {
                if (u[idx(f)] != 0.0) {
                    throw ConfigError("batch phase: liquid inlet flow '" + std::string(kFeedNames[idx(f)]) +
                                      "' must be 0 (only gases flow in and out)");
                }
            }
        }
    }
}

ocp::OcpConfig RunConfig::ocp_config() const
{
    ocp::OcpConfig o = ocp;
    o.x0 = scenario.x0;
    o.u0 = scenario.control_table.front().second;
    o.horizon = scenario.horizon;
    o.steps = scenario.steps;
    return o;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    std::map<std::string, Section> sections;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            throw ConfigError("config: key '" + name + "' outside a section");
        }
        sections[name] = flatten(name, node);
    }

    RunConfig cfg;
    ScenarioConfig& sc = cfg.scenario;
    std::string v;

    Section scenario = sections.count("scenario") ? sections["scenario"] : Section{};
    if (take(scenario, "parameters", v)) {
        std::filesystem::path file = trim(v);
        if (file.is_relative()) {
            file = base_dir / file;
        }
        sc.params = load_parameters(file);
    }
    if (sections.count("model")) {
        for (const auto& [key, value] : sections["model"]) {
            set_parameter(sc.params, key, value);
        }
    }
    if (take(scenario, "phase", v)) {
        const std::string p = trim(v);
        if (p == "batch") {
            sc.phase = Phase::Batch;
        } else if (p == "continuous") {
            sc.phase = Phase::Continuous;
        } else {
            throw ConfigError("[scenario]: phase must be batch or continuous, got '" + p + "'");
        }
    }
    Unit x0_unit = Unit::MolPerL;
    if (take(scenario, "x0_unit", v)) {
        x0_unit = parse_unit("x0_unit", v);
    }
    if (take(scenario, "x0", v)) {
        sc.x0 = parse_concentrations("x0", v, x0_unit);
    }
    const bool has_u = take(scenario, "u", v);
    if (has_u) {
        sc.control_table = {{0.0, parse_vector<kNumFeeds>("u", v)}};
    }
    if (take(scenario, "horizon", v)) {
        sc.horizon = parse_number("horizon", v);
    }
    if (take(scenario, "steps", v)) {
        sc.steps = parse_int("steps", v);
    }
    if (take(scenario, "output", v)) {
        sc.output_dir = trim(v);
    }
    reject_rest("scenario", scenario);

    if (sections.count("controls")) {
        if (has_u) {
            throw ConfigError("config: give either [scenario] u or a [controls] table, not both");
        }
        sc.control_table.clear();
        for (const auto& [key, value] : sections["controls"]) {
            sc.control_table.emplace_back(parse_number("controls", key), parse_vector<kNumFeeds>("controls", value));
        }
        std::sort(sc.control_table.begin(), sc.control_table.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    for (auto& [name, section] : sections) {
        if (name == "scenario" || name == "model" || name == "controls") {
            continue;
        }
        if (name == "scaling") {
            read_scaling(section, sc.pair);
        } else if (name == "integrator") {
            read_integrator(section, sc.integrator);
        } else if (name == "ocp") {
            read_ocp(section, cfg.ocp);
        } else if (name == "solver") {
            read_solver(section, cfg.solver);
        } else if (name == "convergence") {
            read_convergence(section, cfg.convergence);
        } else {
            throw ConfigError("config: unknown section [" + name + "]");
        }
    }
    sc.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ConfigError("csv: no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_double(row[i]);
        }
        out << '\n';
    }
}

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("csv: missing header row");
    }
    t.header = split(line, ',');
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != t.header.size()) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            if (f == "nan") {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                row.push_back(parse_number("csv line " + std::to_string(line_no), f));
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    write_csv(out, table);
}

CsvTable read_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    return read_csv(in);
}

std::vector<std::string> trajectory_header()
{
    std::vector<std::string> h{"t"};
    for (auto name : kStateNames) {
        h.push_back("c_" + std::string(name));
    }
    for (auto name : kSpeciesNames) {
        h.push_back("y_" + std::string(name));
    }
    h.emplace_back("pH");
    for (auto name : kFeedNames) {
        h.push_back("u_" + std::string(name));
    }
    h.emplace_back("newton_iter");
    h.emplace_back("residual");
    return h;
}

namespace
{

std::vector<double> trajectory_row(double t, const StateVector& x, const AlgebraicVector& y, const InputVector& u,
                                   double iterations, double residual)
{
    std::vector<double> row{t};
    row.insert(row.end(), x.data(), x.data() + kNumStates);
    row.insert(row.end(), y.data(), y.data() + kNumSpecies);
    row.push_back(y[idx(Species::H3O)] > 0.0 ? equilibrium::ph_of(y) : std::numeric_limits<double>::quiet_NaN());
    row.insert(row.end(), u.data(), u.data() + kNumFeeds);
    row.push_back(iterations);
    row.push_back(residual);
    return row;
}

} // namespace

CsvTable trajectory_table(const integrator::Trajectory& traj)
{
    CsvTable t;
    t.header = trajectory_header();
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
        const InputVector& u = traj.u.empty() ? InputVector::Zero().eval() : traj.u[k == 0 ? 0 : k - 1];
        t.rows.push_back(trajectory_row(traj.time[k], traj.x[k], traj.y[k], u, traj.iterations[k],
                                        traj.residual_norm[k]));
    }
    return t;
}

CsvTable trajectory_table(const ocp::DiscreteTrajectory& traj, const std::vector<double>& time,
                          const std::vector<double>& residuals)
{
    if (time.size() != traj.x.size() || residuals.size() != traj.x.size() || traj.u.empty()) {
        throw DomainError("trajectory_table: time/residual sizes must match the trajectory");
    }
    CsvTable t;
    t.header = trajectory_header();
    for (std::size_t k = 0; k < traj.x.size(); ++k) {
        t.rows.push_back(trajectory_row(time[k], traj.x[k], traj.y[k], traj.u[k == 0 ? 0 : k - 1], 0.0, residuals[k]));
    }
    return t;
}

CsvTable objective_table(const ocp::ObjectiveBreakdown& o)
{
    CsvTable t;
    t.header = {"phi_total", "phi_eco", "phi_profit", "phi_cost", "phi_ctg", "phi_pH", "phi_du"};
    t.rows.push_back({o.phi_total, o.phi_eco, o.phi_profit, o.phi_cost, o.phi_ctg, o.phi_pH, o.phi_du});
    return t;
}

std::string plot_script(const std::string& csv_name, const std::string& title)
{
    std::ostringstream s;
    s << "# Plots " << csv_name << " (written by scp-reactor). Requires matplotlib.\n"
      << "import csv\n"
      << "import os\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "here = os.path.dirname(os.path.abspath(__file__))\n"
      << "with open(os.path.join(here, '" << csv_name << "')) as f:\n"
      << "    rows = list(csv.DictReader(f))\n"
      << "col = lambda name: [float(r[name]) for r in rows]\n"
      << "t = col('t')\n"
      << "M_X = " << format_double(kBiomassMolarMass) << "\n\n"
      << "fig, ax = plt.subplots(4, 1, sharex=True, figsize=(8, 10))\n"
      << "ax[0].plot(t, [v * M_X for v in col('c_X')])\n"
      << "ax[0].set_ylabel('c_X [g/L]')\n"
      << "for name in ('c_N', 'c_NO', 'c_Na'):\n"
      << "    ax[1].plot(t, col(name), label=name)\n"
      << "ax[1].set_ylabel('[mol/L]')\n"
      << "ax[1].legend()\n"
      << "ax[2].plot(t, col('pH'))\n"
      << "ax[2].set_ylabel('pH')\n"
      << "for name in ('u_W', 'u_N', 'u_NO', 'u_Na', 'u_S', 'u_O'):\n"
      << "    ax[3].step(t, col(name), where='pre', label=name)\n"
      << "ax[3].set_ylabel('F [L/h]')\n"
      << "ax[3].set_xlabel('t [h]')\n"
      << "ax[3].legend()\n"
      << "fig.suptitle('" << title << "')\n"
      << "fig.tight_layout()\n"
      << "fig.savefig(os.path.join(here, '" << csv_name.substr(0, csv_name.rfind('.')) << ".png'))\n";
    return s.str();
}

} // namespace scp::io
