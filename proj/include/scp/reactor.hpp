#pragma once

#include "scp/components.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

namespace scp::reactor
{

using InletMatrix = Eigen::Matrix<double, kNumStates, kNumFeeds>;
using StateJacobian = Eigen::Matrix<double, kNumStates, kNumStates>;
using AlgebraicJacobian = Eigen::Matrix<double, kNumStates, kNumSpecies>;
using InputJacobian = Eigen::Matrix<double, kNumStates, kNumFeeds>;

/// Liquid/gas indicators over feeds (e_l, e_g) and states (diagonals of I_l, I_g).
struct PhaseIndicators
{
    InputVector e_l;
    InputVector e_g;
    StateVector liquid_states;
    StateVector gas_states;

    static const PhaseIndicators& standard();
};

/// Inlet concentrations per feed column. The water feed column is zero.
InletMatrix inlet_matrix(const ModelParameters& p);

/// Gas fraction F_g / (F_l + F_g) clamped to [eps_min, 1 - eps_min]; eps_min when all flows vanish.
double gas_holdup(const InputVector& u, const ModelParameters& p);

/// Henry ratio gamma_i = R T / H_i for S, O, C.
TransferVector henry_ratios(const ModelParameters& p);

/// J_i = kLa_i (gamma_i c_{i,g} - c_i) for i in {S, O, C}; positive means absorption into the liquid.
TransferVector mass_transfer(const StateVector& x, const ModelParameters& p);

/// dx/dt of the stirred tank: convection, reaction and gas-liquid transfer.
StateVector rhs_f(const StateVector& x, const AlgebraicVector& y, const InputVector& u, const ModelParameters& p);

struct RhsJacobian
{
    StateJacobian d_dx;
    AlgebraicJacobian d_dy;
    InputJacobian d_du;
};

/// Analytic partial derivatives of rhs_f. The holdup clamp has zero derivative where active.
RhsJacobian rhs_jacobian(const StateVector& x, const AlgebraicVector& y, const InputVector& u,
                         const ModelParameters& p);

} // namespace scp::reactor
