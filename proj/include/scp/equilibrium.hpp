#pragma once

#include "scp/components.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

namespace scp::equilibrium
{

/// Residual rows: water, ammonia, carbonic 1-3, N mass, C mass, charge.
enum class Row : int { Water = 0, Ammonia, Carbonic1, Carbonic2, Carbonic3, NitrogenMass, CarbonMass, Charge };

using Residual = AlgebraicVector;
using JacobianX = Eigen::Matrix<double, kNumSpecies, kNumStates>;
using JacobianY = Eigen::Matrix<double, kNumSpecies, kNumSpecies>;

/// Diagonal equation (s_g) and variable (s_y) scale factors: g~ = S_g g(x, S_y y~).
struct ScalingPair
{
    AlgebraicVector s_g = AlgebraicVector::Ones();
    AlgebraicVector s_y = AlgebraicVector::Ones();

    static ScalingPair identity();
    /// s_g = [1e7, 1e7, 1e4, 1e8, 1e10, 1, 1, 1], s_y = 1.
    static ScalingPair laboratory();

    /// Throws DomainError unless every factor is finite and > 0.
    void validate() const;
};

Residual residual_g(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p);

struct Jacobian
{
    JacobianX d_dx;
    JacobianY d_dy;
};

Jacobian jacobian_g(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p);

struct ScaledSystem
{
    Residual residual;
    JacobianY jacobian;   ///< dg~/dy~ = S_g (dg/dy) S_y
};

ScaledSystem scale_system(const ScalingPair& pair, const StateVector& x, const AlgebraicVector& y_tilde,
                          const ModelParameters& p);

struct SpeciationSettings
{
    double tol = 1e-10;
    int max_iter = 100;
};

struct Speciation
{
    AlgebraicVector y;
    int iterations = 0;
    double residual_norm = 0.0;   ///< scaled residual, infinity norm
};

/// [1e-7, 1e-7, c_N/2, c_N/2, c_C/4 x4], clipped below at 1e-20.
AlgebraicVector default_initial_guess(const StateVector& x);

/**
 * Solves g(x, y) = 0 for the species at fixed totals using absolute Newton on
 * the scaled system. Throws NonConvergenceError (last iterate in y~ space) or
 * SingularJacobianError.
 */
Speciation solve_speciation(const StateVector& x, const AlgebraicVector& y0, const ModelParameters& p,
                            const ScalingPair& pair = ScalingPair::laboratory(), const SpeciationSettings& settings = {});

/// -log10 [H3O+]. Throws DomainError for non-positive H3O+.
double ph_of(const AlgebraicVector& y);

} // namespace scp::equilibrium
