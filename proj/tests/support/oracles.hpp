#pragma once

#include "scp/components.hpp"
#include "scp/parameters.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>

namespace scp::testing
{

/// Liquid totals that fix the speciation.
struct Totals
{
    double c_N = 0.0;
    double c_C = 0.0;
    double c_NO = 0.0;
    double c_Na = 0.0;

    StateVector state() const
    {
        StateVector x = StateVector::Zero();
        x[idx(State::N)] = c_N;
        x[idx(State::C)] = c_C;
        x[idx(State::NO)] = c_NO;
        x[idx(State::Na)] = c_Na;
        return x;
    }
};

/// Species in closed form once [H3O+] = h is known.
inline AlgebraicVector species_at(double h, const Totals& t, const ModelParameters& p)
{
    AlgebraicVector y;
    const double oh = p.K_eW / h;
    y[idx(Species::H3O)] = h;
    y[idx(Species::OH)] = oh;
    // [NH4+][OH-] = K_eN [NH3]
    y[idx(Species::NH4)] = t.c_N * p.K_eN / (p.K_eN + oh);
    y[idx(Species::NH3)] = t.c_N * oh / (p.K_eN + oh);
    const double k1 = p.K_eC1;
    const double k12 = k1 * p.K_eC2 / h;
    const double k123 = k12 * p.K_eC3 / h;
    const double co2 = t.c_C / (1.0 + k1 + k12 + k123);
    y[idx(Species::CO2)] = co2;
    y[idx(Species::H2CO3)] = k1 * co2;
    y[idx(Species::HCO3)] = k12 * co2;
    y[idx(Species::CO3)] = k123 * co2;
    return y;
}

/// Physical charge balance, increasing in h.
inline double proton_condition(double h, const Totals& t, const ModelParameters& p)
{
    const AlgebraicVector y = species_at(h, t, p);
    return h + y[idx(Species::NH4)] + t.c_Na - y[idx(Species::OH)] - y[idx(Species::HCO3)] -
           2.0 * y[idx(Species::CO3)] - t.c_NO;
}

/// [H3O+] by bisection in log10 h over [1e-16, 10].
inline double bisect_h(const Totals& t, const ModelParameters& p)
{
    double lo = -16.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (proton_condition(std::pow(10.0, mid), t, p) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return std::pow(10.0, 0.5 * (lo + hi));
}

inline double relative_difference(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Central differences with step rel * max(|x_j|, floor_j); an empty floor means purely relative steps.
template <typename F>
Eigen::MatrixXd central_jacobian(F&& f, const Eigen::VectorXd& x, double rel = 1e-6,
                                 const Eigen::VectorXd& floor = Eigen::VectorXd())
{
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = rel * std::max(std::abs(x[j]), floor.size() ? floor[j] : 0.0);
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

/// Richardson extrapolation of two central differences (steps h and h/2): fourth-order accurate.
template <typename F>
Eigen::MatrixXd richardson_jacobian(F&& f, const Eigen::VectorXd& x, double rel = 1e-3,
                                    const Eigen::VectorXd& floor = Eigen::VectorXd())
{
    const Eigen::MatrixXd coarse = central_jacobian(f, x, rel, floor);
    const Eigen::MatrixXd fine = central_jacobian(f, x, 0.5 * rel, floor);
    return (4.0 * fine - coarse) / 3.0;
}

/**
 * Largest entry-wise error |a - b| / max(|a|, |b|), where entries smaller than
 * `negligible` times the largest magnitude in their row are compared absolutely
 * against that row scale instead.
 */
inline double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double negligible = 1e-10)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double row_scale = std::max(a.row(i).cwiseAbs().maxCoeff(), b.row(i).cwiseAbs().maxCoeff());
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double scale = std::max({std::abs(a(i, j)), std::abs(b(i, j)), negligible * row_scale});
            if (scale > 0.0) {
                worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
            }
        }
    }
    return worst;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(std::log10(lo), std::log10(hi));
    return std::pow(10.0, d(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Strictly positive state with totals in [1e-4, 1] M and dissolved gases near realistic levels.
inline StateVector random_state(std::mt19937_64& rng)
{
    StateVector x;
    x[idx(State::X)] = log_uniform(rng, 1e-3, 1.0);
    x[idx(State::S)] = log_uniform(rng, 1e-5, 1e-2);
    x[idx(State::O)] = log_uniform(rng, 1e-5, 1e-2);
    x[idx(State::N)] = log_uniform(rng, 1e-4, 1.0);
    x[idx(State::C)] = log_uniform(rng, 1e-4, 1.0);
    x[idx(State::NO)] = log_uniform(rng, 1e-4, 1e-1);
    x[idx(State::Na)] = log_uniform(rng, 1e-4, 1e-1);
    x[idx(State::Sg)] = log_uniform(rng, 1e-3, 1e-1);
    x[idx(State::Og)] = log_uniform(rng, 1e-3, 1e-1);
    x[idx(State::Cg)] = log_uniform(rng, 1e-3, 1e-1);
    return x;
}

/// Oracle speciation of x perturbed entry-wise by factors in [1/2, 2]: strictly positive, with
/// the terms of each equilibrium row of comparable size.
inline AlgebraicVector random_species_near_root(std::mt19937_64& rng, const StateVector& x,
                                                const ModelParameters& p)
{
    const Totals t{x[idx(State::N)], x[idx(State::C)], x[idx(State::NO)], x[idx(State::Na)]};
    AlgebraicVector y = species_at(bisect_h(t, p), t, p);
    for (int i = 0; i < kNumSpecies; ++i) {
        y[i] *= std::pow(2.0, uniform(rng, -1.0, 1.0));
    }
    return y;
}

} // namespace scp::testing
