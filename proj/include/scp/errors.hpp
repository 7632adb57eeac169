#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace scp
{

/// Raised when an input violates a documented precondition (negative concentration, bad scale, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Raised for malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Newton iteration exhausted its budget. Carries the last iterate for diagnosis.
class NonConvergenceError : public std::runtime_error
{
public:
    NonConvergenceError(const std::string& what, Eigen::VectorXd last_iterate, double residual_norm, int iterations)
        : std::runtime_error(what)
        , last_iterate_(std::move(last_iterate))
        , residual_norm_(residual_norm)
        , iterations_(iterations)
    {
    }

    const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }
    double residual_norm() const noexcept { return residual_norm_; }
    int iterations() const noexcept { return iterations_; }

private:
    Eigen::VectorXd last_iterate_;
    double residual_norm_;
    int iterations_;
};

/// Linear solve refused because the Jacobian condition estimate exceeds the configured limit.
class SingularJacobianError : public std::runtime_error
{
public:
    SingularJacobianError(const std::string& what, double condition_estimate)
        : std::runtime_error(what)
        , condition_estimate_(condition_estimate)
    {
    }

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Integration failed at a given step, wrapping the underlying solver failure.
class StepFailure : public std::runtime_error
{
public:
    StepFailure(const std::string& what, int step_index)
        : std::runtime_error(what)
        , step_index_(step_index)
    {
    }

    int step_index() const noexcept { return step_index_; }

private:
    int step_index_;
};

} // namespace scp
