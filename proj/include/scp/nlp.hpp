#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scp::nlp
{

using Vector = Eigen::VectorXd;

/**
 * Optional structure for problems whose equality constraints determine a
 * subset of the variables (the dependent ones) once the others are fixed.
 * When present, minimize() keeps c(z) = 0 by construction and optimizes over
 * the free variables only.
 */
struct Elimination
{
    /// Indices of the free (independent) variables; all others are dependent.
    std::vector<Eigen::Index> free;
    /// Overwrites the dependent entries of z so that c(z) = 0, using their current values as a warm start.
    /// Returns false when no consistent completion was found.
    std::function<bool(Vector& z)> complete;
    /// Returns mu (size m) solving J_dep(z)^T mu = rhs restricted to the dependent entries (rhs has size n).
    std::function<Vector(const Vector& z, const Vector& rhs)> adjoint_solve;
    /// Optional. d z_rows / d z_free at a completed point, one row per requested dependent index.
    std::function<Eigen::MatrixXd(const Vector& z, const std::vector<Eigen::Index>& rows)> sensitivity;
};

/**
 * min f(z) s.t. c(z) = 0, lower <= z <= upper.
 *
 * The constraint Jacobian is only accessed through products.
 */
struct NlpProblem
{
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    /// Objective value; writes the gradient when the pointer is non-null.
    std::function<double(const Vector& z, Vector* gradient)> objective;
    std::function<Vector(const Vector& z)> constraints;
    /// J(z)^T v
    std::function<Vector(const Vector& z, const Vector& v)> jacobian_transpose_product;
    /// J(z) d
    std::function<Vector(const Vector& z, const Vector& d)> jacobian_product;
    /// Optional symmetric objective Hessian (n x n). With an Elimination that provides
    /// sensitivities, the reduced solver uses it for Gauss-Newton steps.
    std::function<Eigen::SparseMatrix<double>(const Vector& z)> objective_hessian;
    Vector lower;
    Vector upper;
    std::optional<Elimination> elimination;

    /// Throws std::invalid_argument for inconsistent sizes, missing evaluators, or unordered bounds.
    void validate() const;
};

struct SolverSettings
{
    double feas_tol = 1e-6;
    double opt_tol = 1e-5;
    double rho0 = 10.0;
    int max_outer = 30;
    int max_inner = 200;
    int memory = 10;
    double armijo = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    double penalty_growth = 10.0;
    double required_shrink = 0.25;
    /// Use objective_hessian and sensitivities when both are available.
    bool second_order = true;
    /// Called after every outer iteration with (outer index, objective, violation, stationarity).
    std::function<void(int, double, double, double)> progress;
};

enum class Termination { Converged, MaxOuterIterations, Stalled };

std::string to_string(Termination t);

struct SolverReport
{
    Termination reason = Termination::MaxOuterIterations;
    int outer_iterations = 0;
    int inner_iterations = 0;
    int evaluations = 0;
    double objective = 0.0;
    double constraint_violation = 0.0;   ///< ||c(z*)||_inf
    double bound_violation = 0.0;        ///< max bound excess of z* (nonzero only for dependent variables)
    double stationarity = 0.0;           ///< ||P(z - grad L) - z||_inf; reduced space when eliminating, Newton-scaled in second-order mode
    double wall_time = 0.0;              ///< seconds
};

struct Solution
{
    Vector z;
    Vector multipliers;
    SolverReport report;
};

/// Objective or constraint evaluation produced a non-finite value at an accepted point.
class EvaluationError : public std::runtime_error
{
public:
    EvaluationError(const std::string& what, Vector point)
        : std::runtime_error(what)
        , point_(std::move(point))
    {
    }

    const Vector& point() const noexcept { return point_; }

private:
    Vector point_;
};

/**
 * Augmented Lagrangian outer loop (lambda <- lambda + rho c, rho *= growth when
 * ||c|| fails to shrink by required_shrink) around a projected L-BFGS inner
 * minimization with Armijo backtracking. With an Elimination, the equality
 * constraints are satisfied by completion and the multipliers act on the bounds
 * of the dependent variables instead. If the problem also supplies an objective
 * Hessian and sensitivities, the inner solver is a projected Newton method on the
 * reduced Gauss-Newton Hessian (constraint curvature neglected) instead of L-BFGS.
 */
Solution minimize(const NlpProblem& problem, const Vector& z0, const SolverSettings& settings = {});

/// Projection of z onto [lower, upper].
Vector project(const Vector& z, const Vector& lower, const Vector& upper);

struct GradientCheck
{
    double objective_error = 0.0;
    double constraint_error = 0.0;
    double max_error = 0.0;
};

/**
 * Central differences with step h * max(1, |z_i|) against the supplied
 * objective gradient and Jacobian columns. Error per entry is
 * |fd - analytic| / max(|fd|, |analytic|, 1).
 */
GradientCheck check_gradients(const NlpProblem& problem, const Vector& z, double h = 1e-6);

} // namespace scp::nlp
