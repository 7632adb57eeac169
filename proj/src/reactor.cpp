#include "scp/reactor.hpp"

#include "scp/kinetics.hpp"

namespace scp::reactor
{

namespace
{

struct Holdup
{
    double eps;
    InputVector d_du;   ///< zero when clamped
};

Holdup holdup_with_derivative(const InputVector& u, const ModelParameters& p)
{
    const auto& ind = PhaseIndicators::standard();
    const double Fl = ind.e_l.dot(u);
    const double Fg = ind.e_g.dot(u);
    const double F = Fl + Fg;
    Holdup h{p.eps_min, InputVector::Zero()};
    if (!(F > 0.0)) {
        return h;
    }
    const double raw = Fg / F;
    if (raw <= p.eps_min) {
        return h;
    }
    if (raw >= 1.0 - p.eps_min) {
        h.eps = 1.0 - p.eps_min;
        return h;
    }
    h.eps = raw;
    h.d_du = ind.e_g / F - InputVector::Constant(Fg / (F * F));
    return h;
}

} // namespace

const PhaseIndicators& PhaseIndicators::standard()
{
    static const PhaseIndicators ind = [] {
        PhaseIndicators i;
        i.e_l.setZero();
        i.e_g.setZero();
        for (Feed f : kLiquidFeeds) {
            i.e_l[idx(f)] = 1.0;
        }
        for (Feed f : kGasFeeds) {
            i.e_g[idx(f)] = 1.0;
        }
        i.liquid_states.setOnes();
        i.gas_states.setZero();
        for (State s : kGasPhaseStates) {
            i.liquid_states[idx(s)] = 0.0;
            i.gas_states[idx(s)] = 1.0;
        }
        return i;
    }();
    return ind;
}

InletMatrix inlet_matrix(const ModelParameters& p)
{
    InletMatrix C = InletMatrix::Zero();
    C(idx(State::N), idx(Feed::N)) = p.c_In_N;
    C(idx(State::NO), idx(Feed::NO)) = p.c_In_NO;
    C(idx(State::Na), idx(Feed::Na)) = p.c_In_Na;
    C(idx(State::Sg), idx(Feed::S)) = p.c_Sg;
    C(idx(State::Og), idx(Feed::O)) = p.c_Og;
    return C;
}

double gas_holdup(const InputVector& u, const ModelParameters& p)
{
    return holdup_with_derivative(u, p).eps;
}

TransferVector henry_ratios(const ModelParameters& p)
{
    const double RT = p.R_gas * p.T_kelvin;
    return {RT / p.Hpc_S, RT / p.Hpc_O, RT / p.Hpc_C};
}

TransferVector mass_transfer(const StateVector& x, const ModelParameters& p)
{
    const TransferVector gamma = henry_ratios(p);
    const TransferVector kLa(p.kLa_S, p.kLa_O, p.kLa_C);
    TransferVector J;
    for (int i = 0; i < kNumTransfer; ++i) {
        const double c_sat = gamma[i] * x[idx(kGasPhaseStates[i])];
        J[i] = kLa[i] * (c_sat - x[idx(kGasExchangeStates[i])]);
    }
    return J;
}

StateVector rhs_f(const StateVector& x, const AlgebraicVector& y, const InputVector& u, const ModelParameters& p)
{
    const auto& ind = PhaseIndicators::standard();
    const double Fl = ind.e_l.dot(u);
    const double Fg = ind.e_g.dot(u);
    const double eps = gas_holdup(u, p);

    StateVector dxdt = (inlet_matrix(p) * u - ind.liquid_states.cwiseProduct(x) * Fl -
                        ind.gas_states.cwiseProduct(x) * Fg) /
                       p.V;
    if (p.kinetics) {
        dxdt += kinetics::production_rates(x, y, p);
    }
    if (!p.transfer) {
        return dxdt;
    }

    const TransferVector J = mass_transfer(x, p);
    for (int i = 0; i < kNumTransfer; ++i) {
        dxdt[idx(kGasExchangeStates[i])] += J[i] / (1.0 - eps);
        dxdt[idx(kGasPhaseStates[i])] -= J[i] / eps;
    }
    return dxdt;
}

RhsJacobian rhs_jacobian(const StateVector& x, const AlgebraicVector& y, const InputVector& u,
                         const ModelParameters& p)
{
    const auto& ind = PhaseIndicators::standard();
    const double Fl = ind.e_l.dot(u);
    const double Fg = ind.e_g.dot(u);
    const Holdup h = holdup_with_derivative(u, p);
    const double eps = h.eps;

    RhsJacobian jac;
    jac.d_dx.setZero();
    jac.d_dy.setZero();
    if (p.kinetics) {
        const auto prod = kinetics::production_jacobian(x, y, p);
        jac.d_dx = prod.d_dx;
        jac.d_dy = prod.d_dy;
    }
    jac.d_dx.diagonal() -= (ind.liquid_states * Fl + ind.gas_states * Fg) / p.V;

    const InletMatrix Cin = inlet_matrix(p);
    for (int j = 0; j < kNumFeeds; ++j) {
        const StateVector& phase = ind.e_l[j] > 0.0 ? ind.liquid_states : ind.gas_states;
        jac.d_du.col(j) = (Cin.col(j) - phase.cwiseProduct(x)) / p.V;
    }

    if (!p.transfer) {
        return jac;
    }
    const TransferVector gamma = henry_ratios(p);
    const TransferVector kLa(p.kLa_S, p.kLa_O, p.kLa_C);
    const TransferVector J = mass_transfer(x, p);
    for (int i = 0; i < kNumTransfer; ++i) {
        const int dissolved = idx(kGasExchangeStates[i]);
        const int gas = idx(kGasPhaseStates[i]);
        jac.d_dx(dissolved, dissolved) -= kLa[i] / (1.0 - eps);
        jac.d_dx(dissolved, gas) += kLa[i] * gamma[i] / (1.0 - eps);
        jac.d_dx(gas, dissolved) += kLa[i] / eps;
        jac.d_dx(gas, gas) -= kLa[i] * gamma[i] / eps;

        const double dQd_deps = J[i] / ((1.0 - eps) * (1.0 - eps));
        const double dQg_deps = J[i] / (eps * eps);
        jac.d_du.row(dissolved) += dQd_deps * h.d_du.transpose();
        jac.d_du.row(gas) += dQg_deps * h.d_du.transpose();
    }
    return jac;
}

} // namespace scp::reactor
