#pragma once

#include "scp/components.hpp"
#include "scp/equilibrium.hpp"
#include "scp/integrator.hpp"
#include "scp/nlp.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace scp::ocp
{

/// Economic optimal control problem data. Concentrations in mol/L, flows in L/h, time in h.
struct OcpConfig
{
    double horizon = 48.0;
    int steps = 200;

    double alpha_eco = 1.0;
    double alpha_pH = 2.0e2;
    double alpha_du = 1.0;
    double Q_pH = 1.0;
    InputVector Q_du = (InputVector() << 1.0, 1.0, 10.0, 10.0, 0.1, 0.1).finished();

    InputVector p_F = (InputVector() << 0.0, 1.0e-3, 1.0e-1, 1.0e-1, 1.0e-3, 1.0e-3).finished();   ///< USD/L
    double p_X = 1.0e-2;                                                                          ///< USD/g
    double pH_target = 7.0;

    StateVector x_min = StateVector::Zero();
    StateVector x_max = StateVector::Constant(std::numeric_limits<double>::infinity());
    /// Bounds on the exponents alpha, y = 10^-alpha.
    AlgebraicVector alpha_min = AlgebraicVector::Zero();
    AlgebraicVector alpha_max = AlgebraicVector::Constant(20.0);
    InputVector u_min = InputVector::Zero();
    InputVector u_max = InputVector::Ones();

    StateVector x0 = StateVector::Zero();
    InputVector u0 = InputVector::Zero();

    /// Laboratory experiment: x0/u0 of the continuous phase, c_X <= 20 g/L, c_N <= 1 M.
    static OcpConfig laboratory();

    double dt() const { return horizon / steps; }

    /// Throws DomainError on T <= 0, K < 2, negative weights or unordered bounds.
    void validate() const;
};

/// Flat decision vector [x_1..x_K | alpha_1..alpha_K | u_0..u_{K-1}].
struct DecisionLayout
{
    int K = 0;

    explicit DecisionLayout(int steps)
        : K(steps)
    {
    }

    Eigen::Index size() const { return 24 * static_cast<Eigen::Index>(K); }
    Eigen::Index constraint_count() const { return 18 * static_cast<Eigen::Index>(K); }
    /// k in 1..K
    Eigen::Index state(int k, int i = 0) const { return 10 * (k - 1) + i; }
    /// k in 1..K
    Eigen::Index exponent(int k, int j = 0) const { return 10 * static_cast<Eigen::Index>(K) + 8 * (k - 1) + j; }
    /// k in 0..K-1
    Eigen::Index input(int k, int f = 0) const { return 18 * static_cast<Eigen::Index>(K) + 6 * k + f; }
};

/// States/algebraics on points 0..K and inputs on intervals 0..K-1.
struct DiscreteTrajectory
{
    std::vector<StateVector> x;
    std::vector<AlgebraicVector> y;
    std::vector<InputVector> u;
};

struct ObjectiveBreakdown
{
    double phi_total = 0.0;
    double phi_eco = 0.0;
    double phi_profit = 0.0;
    double phi_cost = 0.0;
    double phi_ctg = 0.0;
    double phi_pH = 0.0;
    double phi_du = 0.0;
};

/// Right-rectangle quadrature of every objective term; pH read as -log10 [H3O+].
ObjectiveBreakdown objective_terms(const DiscreteTrajectory& traj, const OcpConfig& cfg, const ModelParameters& p);

/// alpha = -log10(y), with y floored at 1e-300.
AlgebraicVector exponents_of(const AlgebraicVector& y);

Eigen::VectorXd pack(const DiscreteTrajectory& traj, const DecisionLayout& layout);
/// x[0] = cfg.x0; y[0] = y0 (the decision vector holds no algebraics at t0).
DiscreteTrajectory unpack(const Eigen::VectorXd& z, const DecisionLayout& layout, const OcpConfig& cfg,
                          const AlgebraicVector& y0);

struct TranscriptionOptions
{
    int threads = 1;
    integrator::IntegratorSettings integrator{};
};

/**
 * Implicit Euler transcription: equality constraints are the stacked step residuals
 * with y = 10^-alpha and S_g-scaled algebraic rows. The returned problem carries an
 * Elimination that completes states/exponents from the inputs by forward simulation.
 */
nlp::NlpProblem transcribe(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                           const TranscriptionOptions& options = {});

/// Simulation under constant u0, packed and made consistent with the step equations.
Eigen::VectorXd initial_guess(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                              const TranscriptionOptions& options = {});

struct OcpSolution
{
    Eigen::VectorXd z;
    integrator::ControlTrajectory controls;
    DiscreteTrajectory trajectory;
    ObjectiveBreakdown objective;
    nlp::SolverReport report;
};

OcpSolution solve_ocp(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                      const nlp::SolverSettings& settings = {}, const TranscriptionOptions& options = {});

} // namespace scp::ocp
