#include "scp/equilibrium.hpp"

#include "scp/errors.hpp"
#include "scp/newton.hpp"

#include <algorithm>
#include <cmath>

namespace scp::equilibrium
{

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

} // namespace

ScalingPair ScalingPair::identity()
{
    return {};
}

ScalingPair ScalingPair::laboratory()
{
    ScalingPair pair;
    pair.s_g << 1e7, 1e7, 1e4, 1e8, 1e10, 1.0, 1.0, 1.0;
    return pair;
}

void ScalingPair::validate() const
{
    for (int i = 0; i < kNumSpecies; ++i) {
        if (!(s_g[i] > 0.0) || !std::isfinite(s_g[i]) || !(s_y[i] > 0.0) || !std::isfinite(s_y[i])) {
            throw DomainError("scaling factors must be finite and > 0 (entry " + std::to_string(i) + ")");
        }
    }
}

Residual residual_g(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p)
{
    const double cN = x[idx(State::N)];
    const double cC = x[idx(State::C)];
    const double cNO = x[idx(State::NO)];
    const double cNa = x[idx(State::Na)];

    Residual g;
    g[row(Row::Water)] = y[H] * y[OH] - p.K_eW;
    g[row(Row::Ammonia)] = y[NH4] * y[OH] - p.K_eN * y[NH3];
    g[row(Row::Carbonic1)] = y[H2CO3] - p.K_eC1 * y[CO2];
    g[row(Row::Carbonic2)] = y[HCO3] * y[H] - p.K_eC2 * y[H2CO3];
    g[row(Row::Carbonic3)] = y[CO3] * y[H] - p.K_eC3 * y[HCO3];
    g[row(Row::NitrogenMass)] = y[NH3] + y[NH4] - cN;

    double carbon = y[CO2] + y[H2CO3] + y[HCO3] + y[CO3] - cC;
    if (p.carbon_balance == CarbonBalance::PaperLiteral) {
        carbon += x[idx(State::Cg)];
    }
    g[row(Row::CarbonMass)] = carbon;

    if (p.charge_balance == ChargeBalance::Physical) {
        g[row(Row::Charge)] = y[H] + y[NH4] + cNa - y[OH] - y[HCO3] - 2.0 * y[CO3] - cNO;
    } else {
        g[row(Row::Charge)] = y[OH] + y[HCO3] - 2.0 * y[CO3] - cNO - y[H] - y[NH4] - cNa;
    }
    return g;
}

Jacobian jacobian_g(const StateVector& /*x*/, const AlgebraicVector& y, const ModelParameters& p)
{
    Jacobian J{JacobianX::Zero(), JacobianY::Zero()};
    auto& dy = J.d_dy;
    auto& dx = J.d_dx;

    dy(row(Row::Water), H) = y[OH];
    dy(row(Row::Water), OH) = y[H];

    dy(row(Row::Ammonia), NH4) = y[OH];
    dy(row(Row::Ammonia), OH) = y[NH4];
    dy(row(Row::Ammonia), NH3) = -p.K_eN;

    dy(row(Row::Carbonic1), H2CO3) = 1.0;
    dy(row(Row::Carbonic1), CO2) = -p.K_eC1;

    dy(row(Row::Carbonic2), HCO3) = y[H];
    dy(row(Row::Carbonic2), H) = y[HCO3];
    dy(row(Row::Carbonic2), H2CO3) = -p.K_eC2;

    dy(row(Row::Carbonic3), CO3) = y[H];
    dy(row(Row::Carbonic3), H) = y[CO3];
    dy(row(Row::Carbonic3), HCO3) = -p.K_eC3;

    dy(row(Row::NitrogenMass), NH3) = 1.0;
    dy(row(Row::NitrogenMass), NH4) = 1.0;
    dx(row(Row::NitrogenMass), idx(State::N)) = -1.0;

    for (int s : {CO2, H2CO3, HCO3, CO3}) {
        dy(row(Row::CarbonMass), s) = 1.0;
    }
    dx(row(Row::CarbonMass), idx(State::C)) = -1.0;
    if (p.carbon_balance == CarbonBalance::PaperLiteral) {
        dx(row(Row::CarbonMass), idx(State::Cg)) = 1.0;
    }

    const double sign = p.charge_balance == ChargeBalance::Physical ? 1.0 : -1.0;
    dy(row(Row::Charge), H) = sign;
    dy(row(Row::Charge), NH4) = sign;
    dy(row(Row::Charge), OH) = -sign;
    dy(row(Row::Charge), HCO3) = -sign;
    // the carbonate coefficient is -2 under both conventions
    dy(row(Row::Charge), CO3) = -2.0;
    dx(row(Row::Charge), idx(State::Na)) = sign;
    dx(row(Row::Charge), idx(State::NO)) = -1.0;
    return J;
}

ScaledSystem scale_system(const ScalingPair& pair, const StateVector& x, const AlgebraicVector& y_tilde,
                          const ModelParameters& p)
{
    pair.validate();
    const AlgebraicVector y = pair.s_y.cwiseProduct(y_tilde);
    ScaledSystem s;
    s.residual = pair.s_g.cwiseProduct(residual_g(x, y, p));
    s.jacobian = pair.s_g.asDiagonal() * jacobian_g(x, y, p).d_dy * pair.s_y.asDiagonal();
    return s;
}

AlgebraicVector default_initial_guess(const StateVector& x)
{
    const double cN = x[idx(State::N)];
    const double cC = x[idx(State::C)];
    AlgebraicVector y;
    y << 1e-7, 1e-7, cN / 2.0, cN / 2.0, cC / 4.0, cC / 4.0, cC / 4.0, cC / 4.0;
    return y.cwiseMax(1e-20);
}

Speciation solve_speciation(const StateVector& x, const AlgebraicVector& y0, const ModelParameters& p,
                            const ScalingPair& pair, const SpeciationSettings& settings)
{
    pair.validate();
    if (!(settings.tol > 0.0)) {
        throw DomainError("solve_speciation: tol must be > 0");
    }
    if (!((y0.array() > 0.0).all())) {
        throw DomainError("solve_speciation: initial guess must be strictly positive");
    }

    NewtonSettings newton;
    newton.tol = settings.tol;
    newton.max_iter = settings.max_iter;

    auto residual = [&](const AlgebraicVector& yt) -> AlgebraicVector {
        return pair.s_g.cwiseProduct(residual_g(x, pair.s_y.cwiseProduct(yt), p));
    };
    auto jacobian = [&](const AlgebraicVector& yt) -> JacobianY {
        return pair.s_g.asDiagonal() * jacobian_g(x, pair.s_y.cwiseProduct(yt), p).d_dy * pair.s_y.asDiagonal();
    };

    const AlgebraicVector yt0 = y0.cwiseQuotient(pair.s_y);
    const auto result = absolute_newton_solve<kNumSpecies>(yt0, residual, jacobian, newton);
    return {pair.s_y.cwiseProduct(result.z), result.iterations, result.residual_norm};
}

double ph_of(const AlgebraicVector& y)
{
    const double h = y[H];
    if (!(h > 0.0)) {
        throw DomainError("ph_of: [H3O+] must be > 0");
    }
    return -std::log10(h);
}

} // namespace scp::equilibrium
