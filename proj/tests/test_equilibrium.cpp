#include "scp/equilibrium.hpp"
#include "scp/errors.hpp"
#include "scp/units.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <random>

using namespace scp;
using namespace scp::equilibrium;
using testing::Totals;

namespace
{

constexpr int H = idx(Species::H3O);
constexpr int OH = idx(Species::OH);
constexpr int NH3 = idx(Species::NH3);
constexpr int NH4 = idx(Species::NH4);
constexpr int CO2 = idx(Species::CO2);
constexpr int H2CO3 = idx(Species::H2CO3);
constexpr int HCO3 = idx(Species::HCO3);
constexpr int CO3 = idx(Species::CO3);

constexpr int row(Row r) { return static_cast<int>(r); }

Speciation speciate(const StateVector& x, const ModelParameters& p = {})
{
    return solve_speciation(x, default_initial_guess(x), p);
}

double condition_number(const JacobianY& J)
{
    const Eigen::JacobiSVD<JacobianY> svd(J);
    return svd.singularValues()(0) / svd.singularValues()(kNumSpecies - 1);
}

StateVector laboratory_initial_state()
{
    StateVector g;
    g << 2.00, 2.31e-2, 3.77e-2, 4.03e-1, 9.10e-1, 3.07e-3, 2.23e-7, 6.29e-1, 1.11, 1.05;
    return to_molar(g);
}

StateVector random_totals(std::mt19937_64& rng)
{
    StateVector x = StateVector::Zero();
    for (State s : {State::N, State::C, State::NO, State::Na}) {
        x[idx(s)] = testing::uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : testing::log_uniform(rng, 1e-8, 1.0);
    }
    return x;
}

} // namespace

TEST_SUITE("equilibrium")
{

TEST_CASE("residual rows")
{
    const ModelParameters p;
    AlgebraicVector water = AlgebraicVector::Zero();
    water[H] = 1e-7;
    water[OH] = 1e-7;
    CHECK(residual_g(StateVector::Zero(), water, p).cwiseAbs().maxCoeff() < 1e-28);

    StateVector x = StateVector::Zero();
    x[idx(State::N)] = 1.0;
    const Residual r = residual_g(x, AlgebraicVector::Zero(), p);
    CHECK(r[row(Row::NitrogenMass)] == -1.0);
    CHECK(r[row(Row::Water)] == -p.K_eW);
    CHECK(r.segment<4>(1).isZero());
}

TEST_CASE("residual conventions")
{
    ModelParameters p;
    StateVector x = StateVector::Zero();
    x[idx(State::C)] = 0.3;
    x[idx(State::Cg)] = 0.2;
    x[idx(State::Na)] = 0.05;
    x[idx(State::NO)] = 0.01;
    AlgebraicVector y;
    y << 1e-7, 2e-7, 1e-3, 2e-3, 0.1, 0.02, 0.03, 0.004;

    const Residual physical = residual_g(x, y, p);
    CHECK(physical[row(Row::CarbonMass)] == doctest::Approx(0.1 + 0.02 + 0.03 + 0.004 - 0.3));
    CHECK(physical[row(Row::Charge)] ==
          doctest::Approx(1e-7 + 2e-3 + 0.05 - 2e-7 - 0.03 - 2.0 * 0.004 - 0.01));

    p.carbon_balance = CarbonBalance::PaperLiteral;
    p.charge_balance = ChargeBalance::PaperLiteral;
    const Residual literal = residual_g(x, y, p);
    CHECK(literal[row(Row::CarbonMass)] == doctest::Approx(0.1 + 0.02 + 0.03 + 0.004 + 0.2 - 0.3));
    CHECK(literal[row(Row::Charge)] ==
          doctest::Approx(2e-7 + 0.03 - 2.0 * 0.004 - 0.01 - 1e-7 - 2e-3 - 0.05));
    CHECK(literal.head<6>() == physical.head<6>());
}

TEST_CASE("jacobian structure")
{
    const ModelParameters p;
    StateVector x = StateVector::Constant(0.1);
    AlgebraicVector y;
    y << 1e-7, 2e-7, 1e-3, 2e-3, 0.1, 0.02, 0.03, 0.004;
    const Jacobian J = jacobian_g(x, y, p);
    CHECK(J.d_dy(row(Row::Water), H) == y[OH]);
    CHECK(J.d_dx(row(Row::NitrogenMass), idx(State::N)) == -1.0);
    for (int j = 0; j < kNumStates; ++j) {
        const bool total = j == idx(State::N) || j == idx(State::C) || j == idx(State::NO) || j == idx(State::Na);
        if (!total) {
            CHECK(J.d_dx.col(j).isZero());
        }
    }

    ModelParameters literal = p;
    literal.carbon_balance = CarbonBalance::PaperLiteral;
    CHECK(jacobian_g(x, y, literal).d_dx(row(Row::CarbonMass), idx(State::Cg)) == 1.0);
}

TEST_CASE("jacobian against central differences")
{
    // every row is at most bilinear, so central differences are exact up to rounding and an
    // absolute step floor keeps tiny species from drowning in the rounding of their row
    const Eigen::VectorXd floor = Eigen::VectorXd::Constant(kNumSpecies, 1e-4);
    std::mt19937_64 rng(23);
    for (int conv = 0; conv < 4; ++conv) {
        ModelParameters p;
        p.charge_balance = conv & 1 ? ChargeBalance::PaperLiteral : ChargeBalance::Physical;
        p.carbon_balance = conv & 2 ? CarbonBalance::PaperLiteral : CarbonBalance::LiquidOnly;
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector x = testing::random_state(rng);
            const AlgebraicVector y = testing::random_species_near_root(rng, x, p);
            const Jacobian J = jacobian_g(x, y, p);
            const Eigen::MatrixXd fy = testing::central_jacobian(
                [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(residual_g(x, AlgebraicVector(v), p)); },
                Eigen::VectorXd(y), 1e-6, floor);
            const Eigen::MatrixXd fx = testing::central_jacobian(
                [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(residual_g(StateVector(v), y, p)); },
                Eigen::VectorXd(x));
            CHECK(testing::max_relative_error(J.d_dy, fy) < 1e-6);
            CHECK(testing::max_relative_error(J.d_dx, fx) < 1e-6);
        }
    }
}

TEST_CASE("scaling")
{
    const ModelParameters p;
    const StateVector x = laboratory_initial_state();
    const AlgebraicVector y = speciate(x, p).y;

    const ScaledSystem id = scale_system(ScalingPair::identity(), x, y, p);
    CHECK(id.residual == residual_g(x, y, p));
    CHECK(id.jacobian == jacobian_g(x, y, p).d_dy);

    const ScalingPair lab = ScalingPair::laboratory();
    AlgebraicVector expected_sg;
    expected_sg << 1e7, 1e7, 1e4, 1e8, 1e10, 1, 1, 1;
    CHECK(lab.s_g == expected_sg);
    CHECK(lab.s_y == AlgebraicVector::Ones());
    const ScaledSystem scaled = scale_system(lab, x, y, p);
    for (int i = 0; i < kNumSpecies; ++i) {
        CHECK(scaled.jacobian.row(i) == (id.jacobian.row(i) * lab.s_g[i]));
    }

    ScalingPair sy = ScalingPair::identity();
    sy.s_y << 1e-7, 1e-7, 1e-2, 1e-2, 1e-2, 1e-3, 1e-2, 1e-4;
    const ScaledSystem withy = scale_system(sy, x, y.cwiseQuotient(sy.s_y), p);
    CHECK((withy.residual - id.residual).cwiseAbs().maxCoeff() <= 1e-18);
    CHECK(testing::max_relative_error(withy.jacobian, id.jacobian * sy.s_y.asDiagonal()) < 1e-14);

    ScalingPair bad = lab;
    bad.s_g[3] = 0.0;
    CHECK_THROWS_AS(scale_system(bad, x, y, p), DomainError);
    bad = lab;
    bad.s_y[0] = -1.0;
    CHECK_THROWS_AS(scale_system(bad, x, y, p), DomainError);
}

TEST_CASE("laboratory scaling improves conditioning at the initial state")
{
    const ModelParameters p;
    const StateVector x = laboratory_initial_state();
    const AlgebraicVector y = speciate(x, p).y;
    const double unscaled = condition_number(scale_system(ScalingPair::identity(), x, y, p).jacobian);
    const double scaled = condition_number(scale_system(ScalingPair::laboratory(), x, y, p).jacobian);
    MESSAGE("condition numbers: unscaled " << unscaled << ", scaled " << scaled << ", ratio " << unscaled / scaled);
    CHECK(scaled < unscaled);
}

TEST_CASE("pure water")
{
    const Speciation s = speciate(StateVector::Zero());
    CHECK(s.y[H] == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(s.y[OH] == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(s.y.tail<6>().cwiseAbs().maxCoeff() < 1e-20);
    CHECK(ph_of(s.y) == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(std::abs(ph_of(s.y) - 7.0) <= 1e-9);
}

TEST_CASE("strong base matches the proton-condition oracle")
{
    const ModelParameters p;
    Totals t;
    t.c_Na = 1e-3;
    const Speciation s = speciate(t.state(), p);
    const double h = testing::bisect_h(t, p);
    CHECK(testing::relative_difference(s.y[H], h) < 1e-9);
    // h + 1e-3 = K_eW / h
    CHECK(h + 1e-3 == doctest::Approx(p.K_eW / h).epsilon(1e-12));
    CHECK(ph_of(s.y) == doctest::Approx(11.0).epsilon(1e-3));
}

TEST_CASE("ammonia split satisfies its equilibrium constant")
{
    const ModelParameters p;
    Totals t;
    t.c_N = 0.403 / 17.03;
    const Speciation s = speciate(t.state(), p);
    CHECK(testing::relative_difference(s.y[NH4] * s.y[OH] / s.y[NH3], p.K_eN) < 1e-10);
    CHECK(testing::relative_difference(s.y[H], testing::bisect_h(t, p)) < 1e-9);
    CHECK(s.y[NH3] + s.y[NH4] == doctest::Approx(t.c_N).epsilon(1e-12));
}

TEST_CASE("solver errors")
{
    const ModelParameters p;
    const StateVector x = laboratory_initial_state();
    SpeciationSettings tight;
    tight.max_iter = 1;
    try {
        solve_speciation(x, default_initial_guess(x), p, ScalingPair::laboratory(), tight);
        FAIL("expected non-convergence");
    } catch (const NonConvergenceError& e) {
        CHECK(e.last_iterate().size() == kNumSpecies);
        CHECK(e.residual_norm() > tight.tol);
        CHECK(e.iterations() == 1);
    }
    SpeciationSettings zero_tol;
    zero_tol.tol = 0.0;
    CHECK_THROWS_AS(solve_speciation(x, default_initial_guess(x), p, ScalingPair::laboratory(), zero_tol),
                    DomainError);
    CHECK_THROWS_AS(solve_speciation(x, AlgebraicVector::Zero(), p), DomainError);
}

TEST_CASE("pH of a species vector")
{
    AlgebraicVector y = AlgebraicVector::Ones();
    y[H] = 1e-7;
    CHECK(ph_of(y) == doctest::Approx(7.0));
    y[H] = 1e-3;
    CHECK(ph_of(y) == doctest::Approx(3.0));
    y[H] = 0.0;
    CHECK_THROWS_AS(ph_of(y), DomainError);
    y[H] = -1.0;
    CHECK_THROWS_AS(ph_of(y), DomainError);
}

TEST_CASE("default initial guess")
{
    StateVector x = StateVector::Zero();
    x[idx(State::N)] = 0.2;
    x[idx(State::C)] = 0.4;
    AlgebraicVector expected;
    expected << 1e-7, 1e-7, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1;
    CHECK(default_initial_guess(x) == expected);
    CHECK(default_initial_guess(StateVector::Zero()).minCoeff() == 1e-20);
}

TEST_CASE("random totals: non-negative roots with verified residual and equilibrium identities")
{
    const ModelParameters p;
    const ScalingPair pair = ScalingPair::laboratory();
    std::mt19937_64 rng(101);
    int converged = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const StateVector x = random_totals(rng);
        AlgebraicVector y0;
        for (int i = 0; i < kNumSpecies; ++i) {
            y0[i] = testing::log_uniform(rng, 1e-12, 1.0);
        }
        const AlgebraicVector start = trial % 2 == 0 ? default_initial_guess(x) : y0;
        Speciation s;
        try {
            s = solve_speciation(x, start, p, pair);
        } catch (const NonConvergenceError&) {
            continue;
        } catch (const SingularJacobianError&) {
            continue;
        }
        ++converged;
        CHECK((s.y.array() >= 0.0).all());
        const Residual r = pair.s_g.cwiseProduct(residual_g(x, s.y, p));
        CHECK(r.lpNorm<Eigen::Infinity>() <= SpeciationSettings{}.tol);

        auto identity = [](double lhs, double rhs, double a, double b) {
            return a > 1e-20 && b > 1e-20 ? testing::relative_difference(lhs, rhs) : 0.0;
        };
        CHECK(identity(s.y[H] * s.y[OH], p.K_eW, 1.0, 1.0) < 1e-8);
        CHECK(identity(s.y[NH4] * s.y[OH], p.K_eN * s.y[NH3], s.y[NH4], s.y[NH3]) < 1e-8);
        CHECK(identity(s.y[H2CO3], p.K_eC1 * s.y[CO2], s.y[H2CO3], s.y[CO2]) < 1e-8);
        CHECK(identity(s.y[HCO3] * s.y[H], p.K_eC2 * s.y[H2CO3], s.y[HCO3], s.y[H2CO3]) < 1e-8);
        CHECK(identity(s.y[CO3] * s.y[H], p.K_eC3 * s.y[HCO3], s.y[CO3], s.y[HCO3]) < 1e-8);

        if (trial % 2 == 0) {
            Totals t{x[idx(State::N)], x[idx(State::C)], x[idx(State::NO)], x[idx(State::Na)]};
            CHECK(testing::relative_difference(s.y[H], testing::bisect_h(t, p)) < 1e-9);
            // electroneutrality, recomputed from the two sums
            const double cations = s.y[H] + s.y[NH4] + t.c_Na;
            const double anions = s.y[OH] + s.y[HCO3] + 2.0 * s.y[CO3] + t.c_NO;
            CHECK(std::abs(cations - anions) <= 1e-12);
        }
    }
    MESSAGE(converged << " of 1000 random speciations converged");
    CHECK(converged >= 900);
}

TEST_CASE("scaled roots are roots of the unscaled system")
{
    const ModelParameters p;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const StateVector x = random_totals(rng);
        ScalingPair pair = ScalingPair::laboratory();
        for (int i = 0; i < kNumSpecies; ++i) {
            pair.s_y[i] = testing::log_uniform(rng, 1e-1, 1e1);
        }
        const Speciation s = solve_speciation(x, default_initial_guess(x), p, pair);
        const Residual unscaled = residual_g(x, s.y, p);
        CHECK(unscaled.lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("charge conventions give different roots on the same totals")
{
    ModelParameters physical;
    ModelParameters literal;
    literal.charge_balance = ChargeBalance::PaperLiteral;
    StateVector x = StateVector::Zero();
    x[idx(State::N)] = 2e-2;
    x[idx(State::NO)] = 1e-2;
    const Speciation a = speciate(x, physical);
    const Speciation b = speciate(x, literal);
    CHECK(a.residual_norm <= SpeciationSettings{}.tol);
    CHECK(b.residual_norm <= SpeciationSettings{}.tol);
    CHECK(std::abs(ph_of(a.y) - ph_of(b.y)) > 1e-3);
}

}
