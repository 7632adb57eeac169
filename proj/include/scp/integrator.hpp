#pragma once

#include "scp/components.hpp"
#include "scp/equilibrium.hpp"
#include "scp/newton.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

#include <vector>

namespace scp::integrator
{

inline constexpr int kStepSize = kNumStates + kNumSpecies;

/// z = [x; y~] for one implicit Euler step, y = S_y y~.
using StepVector = Eigen::Matrix<double, kStepSize, 1>;
using StepMatrix = Eigen::Matrix<double, kStepSize, kStepSize>;

using equilibrium::ScalingPair;

StepVector pack_step(const StateVector& x, const AlgebraicVector& y, const ScalingPair& pair);
StateVector state_part(const StepVector& z);
AlgebraicVector algebraic_part(const StepVector& z, const ScalingPair& pair);

/// [x - x_k - f(x, S_y y~, u_k) dt ; S_g g(x, S_y y~)].
StepVector step_residual(const StepVector& z_next, const StateVector& x_k, const InputVector& u_k, double dt,
                         const ModelParameters& p, const ScalingPair& pair);

/// [I - f_x dt, -f_y S_y dt ; S_g g_x, S_g g_y S_y].
StepMatrix step_jacobian(const StepVector& z_next, const StateVector& x_k, const InputVector& u_k, double dt,
                         const ModelParameters& p, const ScalingPair& pair);

/// Piecewise-constant inlet flows: inputs[k] acts on (time[k], time[k+1]].
struct ControlTrajectory
{
    std::vector<double> time;
    std::vector<InputVector> inputs;

    static ControlTrajectory constant(const InputVector& u, double horizon, int steps);

    int steps() const { return static_cast<int>(inputs.size()); }

    /// Throws DomainError for a non-increasing grid, size mismatch or negative flows.
    void validate() const;
};

struct IntegratorSettings
{
    NewtonSettings newton{};
    equilibrium::SpeciationSettings speciation{};
    bool retry_with_half_step = true;
};

struct StepResult
{
    StateVector x;
    AlgebraicVector y;
    int iterations = 0;
    double residual_norm = 0.0;
    int substeps = 1;   ///< 2 when the step was recombined from two half steps
};

/// One implicit Euler step from (x_k, y_k); y_k warm-starts the algebraic part. No retry.
StepResult implicit_euler_step(const StateVector& x_k, const AlgebraicVector& y_k, const InputVector& u_k, double dt,
                               const ModelParameters& p, const ScalingPair& pair, const NewtonSettings& settings);

/// One implicit Euler step from x_k with an explicit Newton starting point z_guess = [x; y~]. No retry.
StepResult solve_step_from(const StepVector& z_guess, const StateVector& x_k, const InputVector& u_k, double dt,
                           const ModelParameters& p, const ScalingPair& pair, const NewtonSettings& settings);

/// implicit_euler_step, retried once as two half steps on failure when enabled.
StepResult advance(const StateVector& x_k, const AlgebraicVector& y_k, const InputVector& u_k, double dt,
                   const ModelParameters& p, const ScalingPair& pair, const IntegratorSettings& settings);

struct Trajectory
{
    std::vector<double> time;
    std::vector<StateVector> x;
    std::vector<AlgebraicVector> y;
    std::vector<InputVector> u;          ///< one per interval
    std::vector<int> iterations;         ///< Newton iterations per point (point 0: speciation)
    std::vector<double> residual_norm;
    std::vector<int> substeps;

    int steps() const { return static_cast<int>(u.size()); }
};

/**
 * Sequential implicit Euler over the control grid. The first point is x0 with a
 * speciation solve for y; each step is warm-started from the previous one.
 * Throws StepFailure carrying the index of the failing step.
 */
Trajectory integrate(const StateVector& x0, const AlgebraicVector& y0_guess, const ControlTrajectory& controls,
                     const ModelParameters& p, const ScalingPair& pair = ScalingPair::laboratory(),
                     const IntegratorSettings& settings = {});

} // namespace scp::integrator
