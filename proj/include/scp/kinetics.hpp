#pragma once

#include "scp/components.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

namespace scp::kinetics
{

using StoichiometricMatrix = Eigen::Matrix<double, kNumReactions, kNumStates>;
using ProductionVector = StateVector;

/// Rows: catabolism S + O -> C, anabolism S + O + 0.2 N -> X. Columns in state order.
const StoichiometricMatrix& stoichiometric_matrix();

struct SpecificRates
{
    double muS = 0.0;
    double muO = 0.0;
    double muN = 0.0;
};

struct GrowthRates
{
    double mu1 = 0.0;
    double mu2 = 0.0;
    double muS = 0.0;
    double muO = 0.0;
    double muN = 0.0;
};

/// Monod fractions for methane (with ammonium inhibition), oxygen and ammonium.
/// Throws DomainError on negative concentrations.
SpecificRates specific_growth_rates(double c_S, double c_O, double c_NH4, const ModelParameters& p);

GrowthRates growth_rates(double c_S, double c_O, double c_NH4, double c_X, const ModelParameters& p);

/// Slope of mu1 as an affine function of mu2.
double catabolic_slope(const ModelParameters& p);

/// R = S^T r with r = [mu1 c_X, mu2 c_X]. Ammonium is taken from the algebraic vector.
ProductionVector production_rates(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p);

struct ProductionJacobian
{
    Eigen::Matrix<double, kNumStates, kNumStates> d_dx;
    Eigen::Matrix<double, kNumStates, kNumSpecies> d_dy;
};

/// Analytic derivatives of production_rates. Evaluated without the sign checks.
ProductionJacobian production_jacobian(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p);

} // namespace scp::kinetics
