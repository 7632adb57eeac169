#pragma once

#include "scp/errors.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <string>

namespace scp
{

struct NewtonSettings
{
    double tol = 1e-9;          ///< on the infinity norm of the residual
    int max_iter = 50;
    double step_rtol = 1e-10;   ///< componentwise relative step accepted as converged
    double max_condition = 1e14;
};

template <int N>
struct NewtonResult
{
    Eigen::Matrix<double, N, 1> z;
    int iterations = 0;
    double residual_norm = 0.0;
};

/**
 * Solves J dz = -r after equilibrating the rows of J. Throws SingularJacobianError
 * when the reciprocal condition estimate of the equilibrated matrix falls below
 * 1 / max_condition.
 */
template <int N>
Eigen::Matrix<double, N, 1> newton_direction(Eigen::Matrix<double, N, N> J, Eigen::Matrix<double, N, 1> r,
                                             double max_condition)
{
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        const double row_max = J.row(i).cwiseAbs().maxCoeff();
        if (!(row_max > 0.0) || !std::isfinite(row_max)) {
            throw SingularJacobianError("Jacobian row " + std::to_string(i) + " is zero or non-finite",
                                        std::numeric_limits<double>::infinity());
        }
        J.row(i) /= row_max;
        r[i] /= row_max;
    }
    const Eigen::PartialPivLU<Eigen::Matrix<double, N, N>> lu(J);
    const double rcond = lu.rcond();
    if (!(rcond * max_condition >= 1.0)) {
        throw SingularJacobianError("Jacobian condition estimate exceeds limit", rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    return -lu.solve(r);
}

/**
 * Newton iteration with the entry-wise absolute value applied to every iterate,
 * z <- |z + dz|, so all iterates stay non-negative. Monotone convergence is not
 * guaranteed.
 *
 * Once ||R||_inf <= tol the iteration continues while the residual still at
 * least halves per step, so roots are polished down to rounding level; it stops
 * when the last step was below step_rtol componentwise, the residual stagnates,
 * or max_iter is reached (still converged).
 */
template <int N, typename Residual, typename Jacobian>
NewtonResult<N> absolute_newton_solve(Eigen::Matrix<double, N, 1> z0, Residual&& residual, Jacobian&& jacobian,
                                      const NewtonSettings& settings)
{
    using Vec = Eigen::Matrix<double, N, 1>;
    using Mat = Eigen::Matrix<double, N, N>;

    Vec z = z0.cwiseAbs();
    bool step_small = false;
    double previous_norm = INFINITY;
    double norm = INFINITY;

    for (int it = 0;; ++it) {
        const Vec r = residual(z);
        norm = r.template lpNorm<Eigen::Infinity>();
        if (!std::isfinite(norm)) {
            throw NonConvergenceError("non-finite residual", z, norm, it);
        }
        if (norm <= settings.tol &&
            (norm == 0.0 || step_small || norm > 0.5 * previous_norm || it >= settings.max_iter)) {
            return {z, it, norm};
        }
        if (it >= settings.max_iter) {
            break;
        }

        const Mat J = jacobian(z);
        const Vec dz = newton_direction<N>(J, r, settings.max_condition);
        Vec next = (z + dz).cwiseAbs();

        step_small = ((next - z).cwiseAbs().array() <= settings.step_rtol * next.cwiseAbs().array()).all();
        previous_norm = norm;
        z = next;
    }
    throw NonConvergenceError("absolute Newton did not converge in " + std::to_string(settings.max_iter) +
                                  " iterations",
                              z, norm, settings.max_iter);
}

} // namespace scp
