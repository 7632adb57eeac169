#include "scp/integrator.hpp"

#include "scp/errors.hpp"
#include "scp/reactor.hpp"

#include <cmath>
#include <string>

namespace scp::integrator
{

StepVector pack_step(const StateVector& x, const AlgebraicVector& y, const ScalingPair& pair)
{
    StepVector z;
    z << x, y.cwiseQuotient(pair.s_y);
    return z;
}

StateVector state_part(const StepVector& z)
{
    return z.head<kNumStates>();
}

AlgebraicVector algebraic_part(const StepVector& z, const ScalingPair& pair)
{
    return pair.s_y.cwiseProduct(z.tail<kNumSpecies>());
}

StepVector step_residual(const StepVector& z_next, const StateVector& x_k, const InputVector& u_k, double dt,
                         const ModelParameters& p, const ScalingPair& pair)
{
    const StateVector x = state_part(z_next);
    const AlgebraicVector y = algebraic_part(z_next, pair);
    StepVector R;
    R << x - x_k - reactor::rhs_f(x, y, u_k, p) * dt, pair.s_g.cwiseProduct(equilibrium::residual_g(x, y, p));
    return R;
}

StepMatrix step_jacobian(const StepVector& z_next, const StateVector& /*x_k*/, const InputVector& u_k, double dt,
                         const ModelParameters& p, const ScalingPair& pair)
{
    const StateVector x = state_part(z_next);
    const AlgebraicVector y = algebraic_part(z_next, pair);
    const auto fj = reactor::rhs_jacobian(x, y, u_k, p);
    const auto gj = equilibrium::jacobian_g(x, y, p);

    StepMatrix J;
    J.topLeftCorner<kNumStates, kNumStates>() =
        Eigen::Matrix<double, kNumStates, kNumStates>::Identity() - fj.d_dx * dt;
    J.topRightCorner<kNumStates, kNumSpecies>() = -fj.d_dy * pair.s_y.asDiagonal() * dt;
    J.bottomLeftCorner<kNumSpecies, kNumStates>() = pair.s_g.asDiagonal() * gj.d_dx;
    J.bottomRightCorner<kNumSpecies, kNumSpecies>() = pair.s_g.asDiagonal() * gj.d_dy * pair.s_y.asDiagonal();
    return J;
}

ControlTrajectory ControlTrajectory::constant(const InputVector& u, double horizon, int steps)
{
    if (!(horizon > 0.0) || steps < 1) {
        throw DomainError("constant control profile needs horizon > 0 and at least one step");
    }
    ControlTrajectory c;
    c.time.resize(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        c.time[k] = horizon * k / steps;
    }
    c.inputs.assign(steps, u);
    return c;
}

void ControlTrajectory::validate() const
{
    if (time.size() != inputs.size() + 1 || inputs.empty()) {
        throw DomainError("control grid must have one more time point than inputs");
    }
    for (std::size_t k = 0; k + 1 < time.size(); ++k) {
        if (!(time[k + 1] > time[k])) {
            throw DomainError("control time grid must be strictly increasing");
        }
    }
    for (const auto& u : inputs) {
        if (!((u.array() >= 0.0).all())) {
            throw DomainError("inlet flows must be >= 0");
        }
    }
}

StepResult solve_step_from(const StepVector& z_guess, const StateVector& x_k, const InputVector& u_k, double dt,
                           const ModelParameters& p, const ScalingPair& pair, const NewtonSettings& settings)
{
    if (!(dt > 0.0)) {
        throw DomainError("implicit Euler step: dt must be > 0");
    }
    auto residual = [&](const StepVector& z) { return step_residual(z, x_k, u_k, dt, p, pair); };
    auto jacobian = [&](const StepVector& z) { return step_jacobian(z, x_k, u_k, dt, p, pair); };
    const auto sol = absolute_newton_solve<kStepSize>(z_guess, residual, jacobian, settings);
    return {state_part(sol.z), algebraic_part(sol.z, pair), sol.iterations, sol.residual_norm, 1};
}

StepResult implicit_euler_step(const StateVector& x_k, const AlgebraicVector& y_k, const InputVector& u_k, double dt,
                               const ModelParameters& p, const ScalingPair& pair, const NewtonSettings& settings)
{
    return solve_step_from(pack_step(x_k, y_k, pair), x_k, u_k, dt, p, pair, settings);
}

StepResult advance(const StateVector& x_k, const AlgebraicVector& y_k, const InputVector& u_k, double dt,
                   const ModelParameters& p, const ScalingPair& pair, const IntegratorSettings& settings)
{
    try {
        return implicit_euler_step(x_k, y_k, u_k, dt, p, pair, settings.newton);
    } catch (const NonConvergenceError&) {
        if (!settings.retry_with_half_step) {
            throw;
        }
    } catch (const SingularJacobianError&) {
        if (!settings.retry_with_half_step) {
            throw;
        }
    }
    const StepResult first = implicit_euler_step(x_k, y_k, u_k, 0.5 * dt, p, pair, settings.newton);
    StepResult second = implicit_euler_step(first.x, first.y, u_k, 0.5 * dt, p, pair, settings.newton);
    second.iterations += first.iterations;
    second.residual_norm = std::max(first.residual_norm, second.residual_norm);
    second.substeps = 2;
    return second;
}

Trajectory integrate(const StateVector& x0, const AlgebraicVector& y0_guess, const ControlTrajectory& controls,
                     const ModelParameters& p, const ScalingPair& pair, const IntegratorSettings& settings)
{
    pair.validate();
    controls.validate();
    if (!((x0.array() >= 0.0).all())) {
        throw DomainError("integrate: initial state must be >= 0");
    }

    Trajectory traj;
    const int K = controls.steps();
    traj.time = controls.time;
    traj.u = controls.inputs;
    traj.x.reserve(K + 1);
    traj.y.reserve(K + 1);

    equilibrium::Speciation initial;
    try {
        initial = equilibrium::solve_speciation(x0, y0_guess.cwiseMax(1e-20), p, pair, settings.speciation);
    } catch (const std::runtime_error& e) {
        throw StepFailure(std::string("initial speciation failed: ") + e.what(), 0);
    }
    traj.x.push_back(x0);
    traj.y.push_back(initial.y);
    traj.iterations.push_back(initial.iterations);
    traj.residual_norm.push_back(initial.residual_norm);
    traj.substeps.push_back(1);

    for (int k = 0; k < K; ++k) {
        const double dt = controls.time[k + 1] - controls.time[k];
        StepResult step;
        try {
            step = advance(traj.x.back(), traj.y.back(), controls.inputs[k], dt, p, pair, settings);
        } catch (const std::runtime_error& e) {
            throw StepFailure("step " + std::to_string(k) + " failed: " + e.what(), k);
        }
        traj.x.push_back(step.x);
        traj.y.push_back(step.y);
        traj.iterations.push_back(step.iterations);
        traj.residual_norm.push_back(step.residual_norm);
        traj.substeps.push_back(step.substeps);
    }
    return traj;
}

} // namespace scp::integrator
