#include "scp/errors.hpp"
#include "scp/integrator.hpp"
#include "scp/io.hpp"
#include "scp/units.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

using namespace scp;
using namespace scp::io;

namespace
{

const std::filesystem::path kConfigDir = std::filesystem::path(SCP_SOURCE_DIR) / "config";

std::string minimal(const std::string& extra = "")
{
    return "[scenario]\nphase = continuous\nx0 = 0.1, 0, 0, 0.2, 0, 0, 0, 0, 0, 0\n"
           "u = 0.01, 0, 0, 0, 0, 0\nhorizon = 2\nsteps = 4\n" +
           extra;
}

CsvTable round_trip(const CsvTable& t)
{
    std::stringstream s;
    write_csv(s, t);
    return read_csv(s);
}

bool same_bits(double a, double b)
{
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

} // namespace

TEST_SUITE("cli")
{

TEST_CASE("shipped configs load")
{
    const RunConfig paper = load_config(kConfigDir / "paper.cfg");
    CHECK(paper.scenario.phase == Phase::Continuous);
    CHECK(paper.scenario.horizon == 48.0);
    CHECK(paper.scenario.steps == 200);
    CHECK(paper.scenario.params.mu_max == 2.28e-1);
    CHECK(paper.scenario.params.c_In_N == 5.88);
    CHECK(paper.scenario.pair.s_g[0] == 1e7);
    CHECK(paper.scenario.pair.s_g[4] == 1e10);
    // 2 g/L of biomass
    CHECK(paper.scenario.x0[idx(State::X)] == doctest::Approx(2.0 / kBiomassMolarMass).epsilon(1e-14));
    CHECK(paper.ocp.x_max[idx(State::X)] == doctest::Approx(20.0 / kBiomassMolarMass).epsilon(1e-14));
    CHECK(paper.ocp.x_max[idx(State::N)] == 1.0);
    CHECK(std::isinf(paper.ocp.x_max[idx(State::C)]));
    CHECK(paper.ocp.alpha_pH == 200.0);
    CHECK(paper.ocp.pH_target == 7.0);

    const ocp::OcpConfig o = paper.ocp_config();
    CHECK(o.x0 == paper.scenario.x0);
    CHECK(o.u0 == paper.scenario.control_table.front().second);
    CHECK(o.horizon == 48.0);
    CHECK(o.steps == 200);

    const RunConfig batch = load_config(kConfigDir / "batch.cfg");
    CHECK(batch.scenario.phase == Phase::Batch);
    // "1.0 M" overrides the g/L default of the vector
    CHECK(batch.scenario.x0[idx(State::N)] == 1.0);
    CHECK(batch.scenario.x0[idx(State::X)] == doctest::Approx(0.05 / kBiomassMolarMass).epsilon(1e-14));
}

TEST_CASE("unit suffixes convert with the molar mass table")
{
    const auto masses = MolarMassTable::standard();
    const RunConfig grams = parse_config(
        "[scenario]\nx0_unit = g/L\nx0 = 1, 2, 3, 4, 5, 6, 7, 8, 9, 10\nu = 0, 0, 0, 0, 0, 0\n");
    const RunConfig mixed = parse_config(
        "[scenario]\nx0 = 1 g/L, 2 g/L, 3 g/L, 4 g/L, 5 g/L, 6 g/L, 7 g/L, 8 g/L, 9 g/L, 10 g/L\n");
    const RunConfig molar = parse_config("[scenario]\nx0 = 1 mol/L, 2 M, 3, 4, 5, 6, 7, 8, 9, 10\n");
    for (int i = 0; i < kNumStates; ++i) {
        CHECK(grams.scenario.x0[i] == (i + 1) / masses.grams_per_mol[i]);
        CHECK(mixed.scenario.x0[i] == grams.scenario.x0[i]);
        CHECK(molar.scenario.x0[i] == i + 1);
    }
    CHECK(from_molar(to_molar(grams.scenario.x0)).isApprox(grams.scenario.x0, 1e-15));
}

TEST_CASE("config errors")
{
    CHECK_NOTHROW(parse_config(minimal()));
    CHECK_THROWS_AS(parse_config(minimal("bogus = 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config(minimal("[nowhere]\nx = 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nsteps = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nhorizon = soon\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nhorizon = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nu = 1, 2, 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nx0 = 1 kg, 0, 0, 0, 0, 0, 0, 0, 0, 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nx0 = -1, 0, 0, 0, 0, 0, 0, 0, 0, 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nphase = fed-batch\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\nmu_max = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\nnot_a_parameter = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scaling]\ns_g = 1, 1, 1, 1, 1, 1, 1, 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[integrator]\nhalf_step_retry = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[convergence]\nlevels = 16, 8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(minimal("[controls]\n0 = 0, 0, 0, 0, 0, 0\n")), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\nparameters = missing.ini\n"), ConfigError);
    CHECK_THROWS_AS(load_config(kConfigDir / "no_such.cfg"), ConfigError);
}

TEST_CASE("batch phase refuses liquid flows")
{
    const std::string head = "[scenario]\nphase = batch\nx0 = 0.1, 0, 0, 0.2, 0, 0, 0, 0, 0, 0\n";
    CHECK_NOTHROW(parse_config(head + "u = 0, 0, 0, 0, 0.2, 0.2\n"));
    for (int f = 0; f < 4; ++f) {
        InputVector u = InputVector::Zero();
        u[f] = 1e-3;
        std::ostringstream line;
        line << "u = " << u[0] << ", " << u[1] << ", " << u[2] << ", " << u[3] << ", 0.2, 0.2\n";
        CAPTURE(f);
        CHECK_THROWS_AS(parse_config(head + line.str()), ConfigError);
    }
}

TEST_CASE("control tables are piecewise constant on the grid")
{
    const RunConfig cfg = parse_config(
        "[scenario]\nhorizon = 4\nsteps = 8\n"
        "[controls]\n2.5 = 3, 0, 0, 0, 0, 0\n0 = 1, 0, 0, 0, 0, 0\n1 = 2, 0, 0, 0, 0, 0\n");
    const integrator::ControlTrajectory c = cfg.scenario.controls();
    REQUIRE(c.steps() == 8);
    // intervals start at 0, 0.5, ..., 3.5
    const double expected[] = {1, 1, 2, 2, 2, 3, 3, 3};
    for (int k = 0; k < 8; ++k) {
        CAPTURE(k);
        CHECK(c.inputs[k][idx(Feed::W)] == expected[k]);
    }
    CHECK_THROWS_AS(parse_config("[controls]\n1 = 1, 0, 0, 0, 0, 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[controls]\n0 = -1, 0, 0, 0, 0, 0\n"), ConfigError);
}

TEST_CASE("format_double keeps every bit")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");

    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double v = (i % 2 ? -1.0 : 1.0) * testing::log_uniform(rng, 1e-300, 1e300);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
          std::numeric_limits<double>::denorm_min());
}

TEST_CASE("csv round trip")
{
    std::mt19937_64 rng(11);
    CsvTable t;
    t.header = {"a", "b", "c", "d"};
    for (int r = 0; r < 50; ++r) {
        t.rows.push_back({testing::uniform(rng, -1.0, 1.0), testing::log_uniform(rng, 1e-250, 1e250),
                          std::numeric_limits<double>::infinity(), r % 3 ? 0.0 : std::nan("")});
    }
    const CsvTable back = round_trip(t);
    CHECK(back.header == t.header);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(same_bits(back.rows[r][c], t.rows[r][c]));
        }
    }
    CHECK(back.column("c") == 2);
    CHECK_THROWS_AS(back.column("z"), ConfigError);

    const auto file = std::filesystem::temp_directory_path() / "scp_io_round_trip.csv";
    write_csv_file(file, t);
    const CsvTable from_file = read_csv_file(file);
    std::filesystem::remove(file);
    CHECK(from_file.rows.size() == t.rows.size());
    CHECK(from_file.rows[7][1] == t.rows[7][1]);

    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), ConfigError);
    std::istringstream garbage("a,b\n1,x\n");
    CHECK_THROWS_AS(read_csv(garbage), ConfigError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), ConfigError);
}

TEST_CASE("trajectory tables")
{
    const auto header = trajectory_header();
    CHECK(header.size() == 28);
    CHECK(header.front() == "t");
    CHECK(header[1] == "c_X");
    CHECK(header[11] == "y_H3O+");
    CHECK(header[19] == "pH");
    CHECK(header[20] == "u_W");
    CHECK(header[26] == "newton_iter");
    CHECK(header[27] == "residual");

    RunConfig cfg = load_config(kConfigDir / "paper.cfg");
    cfg.scenario.horizon = 2.0;
    cfg.scenario.steps = 4;
    const auto controls = cfg.scenario.controls();
    const integrator::Trajectory traj =
        integrator::integrate(cfg.scenario.x0, AlgebraicVector::Constant(1e-7), controls, cfg.scenario.params,
                              cfg.scenario.pair, cfg.scenario.integrator);
    const CsvTable t = trajectory_table(traj);
    REQUIRE(t.rows.size() == 5);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& row = t.rows[k];
        REQUIRE(row.size() == 28);
        CHECK(row[0] == traj.time[k]);
        CHECK(row[1 + idx(State::N)] == traj.x[k][idx(State::N)]);
        CHECK(row[11 + idx(Species::H3O)] == traj.y[k][idx(Species::H3O)]);
        CHECK(row[19] == doctest::Approx(-std::log10(traj.y[k][idx(Species::H3O)])).epsilon(1e-14));
        CHECK(row[20] == controls.inputs[k == 0 ? 0 : k - 1][idx(Feed::W)]);
        CHECK(row[26] == traj.iterations[k]);
        CHECK(row[27] == traj.residual_norm[k]);
    }
    const CsvTable back = round_trip(t);
    CHECK(back.rows == t.rows);

    const CsvTable o = objective_table(ocp::ObjectiveBreakdown{});
    CHECK(o.header.front() == "phi_total");
    CHECK(o.rows.size() == 1);
}

TEST_CASE("plot script names its data")
{
    const std::string s = plot_script("trajectory.csv", "run");
    CHECK(s.find("'trajectory.csv'") != std::string::npos);
    CHECK(s.find("trajectory.png") != std::string::npos);
    CHECK(s.find("import matplotlib") != std::string::npos);
}

}
