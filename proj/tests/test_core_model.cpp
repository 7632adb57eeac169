#include "scp/components.hpp"
#include "scp/errors.hpp"
#include "scp/parameters.hpp"
#include "scp/units.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace scp;

TEST_SUITE("core-model")
{

TEST_CASE("component name maps are bijections")
{
    std::set<int> seen;
    for (std::size_t i = 0; i < kStateNames.size(); ++i) {
        const auto s = state_from_name(kStateNames[i]);
        REQUIRE(s);
        CHECK(idx(*s) == static_cast<int>(i));
        seen.insert(idx(*s));
    }
    CHECK(seen.size() == kNumStates);
    for (std::size_t i = 0; i < kSpeciesNames.size(); ++i) {
        CHECK(idx(*species_from_name(kSpeciesNames[i])) == static_cast<int>(i));
    }
    for (std::size_t i = 0; i < kFeedNames.size(); ++i) {
        CHECK(idx(*feed_from_name(kFeedNames[i])) == static_cast<int>(i));
    }
    CHECK_FALSE(state_from_name("Y"));
    CHECK_FALSE(feed_from_name("S_g"));
}

TEST_CASE("liquid and gas-exchange subsets cover the dissolved components")
{
    std::set<int> dissolved;
    for (State s : kLiquidOnlyStates) {
        dissolved.insert(idx(s));
    }
    for (State s : kGasExchangeStates) {
        CHECK(dissolved.insert(idx(s)).second);
    }
    CHECK(dissolved == std::set<int>{0, 1, 2, 3, 4, 5, 6});
    for (State s : kGasPhaseStates) {
        CHECK(is_gas_phase(s));
    }
    CHECK(kLiquidFeeds.size() + kGasFeeds.size() == kNumFeeds);
    for (Feed f : kGasFeeds) {
        CHECK(is_gas_feed(f));
    }
}

TEST_CASE("molar conversions")
{
    const auto& masses = MolarMassTable::standard();
    StateVector g = StateVector::Zero();
    g[idx(State::N)] = 17.03;
    CHECK(to_molar(g)[idx(State::N)] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(to_molar(StateVector::Zero()).isZero());
    CHECK(from_molar(StateVector::Zero()).isZero());

    StateVector one_molar_N = StateVector::Zero();
    one_molar_N[idx(State::N)] = 1.0;
    CHECK(from_molar(one_molar_N)[idx(State::N)] == doctest::Approx(17.03).epsilon(1e-15));

    const double biomass = 12.011 + 1.8 * 1.008 + 0.5 * 15.999 + 0.2 * 14.007;
    CHECK(masses[State::X] == doctest::Approx(biomass).epsilon(1e-15));
    CHECK(biomass == doctest::Approx(24.626).epsilon(1e-4));
    StateVector gx = StateVector::Zero();
    gx[idx(State::X)] = biomass;
    CHECK(to_molar(gx)[idx(State::X)] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK((masses.grams_per_mol.array() > 0.0).all());
    CHECK(masses[State::Sg] == masses[State::S]);
    CHECK(masses[State::Cg] == masses[State::C]);

    StateVector negative = StateVector::Zero();
    negative[idx(State::O)] = -1e-9;
    CHECK_THROWS_AS(to_molar(negative), DomainError);
}

TEST_CASE("molar round trip on random states")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        StateVector x;
        for (int i = 0; i < kNumStates; ++i) {
            x[i] = testing::log_uniform(rng, 1e-12, 1e2);
        }
        const StateVector back = to_molar(from_molar(x));
        for (int i = 0; i < kNumStates; ++i) {
            CHECK(testing::relative_difference(back[i], x[i]) <= 1e-12);
        }
    }
}

TEST_CASE("default parameters reproduce the published table")
{
    const ModelParameters p;
    CHECK(p.mu_max == 2.28e-1);
    CHECK(p.m == 9.80e-5);
    CHECK(p.alpha == 2.00e-2);
    CHECK(p.delta == 2.00e-2);
    CHECK(p.K_S == 7.50e-5);
    CHECK(p.K_Nox == 3.30e-3);
    CHECK(p.K_O == 5.50e-5);
    CHECK(p.K_N == 1.30e-3);
    CHECK(p.K_eW == 1.00e-14);
    CHECK(p.K_eN == 5.62e-10);
    CHECK(p.K_eC1 == 1.58e-7);
    CHECK(p.K_eC2 == 4.27e-7);
    CHECK(p.K_eC3 == 4.79e-11);
    CHECK(p.c_In_N == 5.88);
    CHECK(p.c_In_Na == 1.00);
    CHECK(p.c_In_NO == 1.00);
    CHECK(p.c_Sg == 1.90e-1);
    CHECK(p.c_Og == 1.90e-1);
    CHECK(p.kLa_S == 3.89e2);
    CHECK(p.kLa_O == 3.71e2);
    CHECK(p.kLa_C == 3.26e2);
    CHECK(p.Hpc_S == 7.05e2);
    CHECK(p.Hpc_O == 7.59e2);
    CHECK(p.Hpc_C == 2.99e1);
    CHECK(p.R_gas == 8.21e-2);
    CHECK(p.T_kelvin == 3.15e2);
    CHECK(p.V == 1.00);
    CHECK(p.eps_min == 1e-6);
    CHECK(p.charge_balance == ChargeBalance::Physical);
    CHECK(p.carbon_balance == CarbonBalance::LiquidOnly);
}

TEST_CASE("parameter validation")
{
    CHECK(validate_parameters(ModelParameters{}).empty());

    ModelParameters p;
    p.mu_max = 0.0;
    auto v = validate_parameters(p);
    REQUIRE(v.size() == 1);
    CHECK(v.front() == "mu_max must be > 0");

    p = ModelParameters{};
    p.V = -1.0;
    v = validate_parameters(p);
    REQUIRE(v.size() == 1);
    CHECK(v.front() == "V must be > 0");

    p = ModelParameters{};
    p.K_eW = 0.0;
    p.kLa_C = -3.0;
    CHECK(validate_parameters(p).size() == 2);

    p = ModelParameters{};
    p.eps_min = 0.5;
    CHECK(validate_parameters(p).size() == 1);
}

TEST_CASE("parameter files")
{
    const ModelParameters p = parse_parameters("mu_max = 0.3\n[model]\nV = 2\ncharge_balance = paper-literal\n");
    CHECK(p.mu_max == 0.3);
    CHECK(p.V == 2.0);
    CHECK(p.charge_balance == ChargeBalance::PaperLiteral);
    CHECK(p.K_S == ModelParameters{}.K_S);

    CHECK_THROWS_AS(parse_parameters("mu_maks = 0.3\n"), ConfigError);
    CHECK_THROWS_AS(parse_parameters("mu_max = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_parameters("[ocp]\np_X = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_parameters("carbon_balance = both\n"), ConfigError);

    ModelParameters q;
    set_parameter(q, "kinetics", "off");
    set_parameter(q, "transfer", "false");
    CHECK_FALSE(q.kinetics);
    CHECK_FALSE(q.transfer);

    for (const auto& key : parameter_keys()) {
        CHECK(std::count(parameter_keys().begin(), parameter_keys().end(), key) == 1);
    }
}

}
