#include "scp/nlp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

namespace scp::nlp
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const Vector& v)
{
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

/// Limited-memory inverse Hessian approximation applied on a subset of coordinates.
class LbfgsMemory
{
public:
    explicit LbfgsMemory(int capacity)
        : capacity_(capacity)
    {
    }

    bool empty() const { return pairs_.empty(); }
    void clear() { pairs_.clear(); }

    void push(Vector s, Vector y)
    {
        const double sy = s.dot(y);
        if (!(sy > 1e-12 * s.norm() * y.norm()) || !std::isfinite(sy)) {
            return;
        }
        pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
        if (static_cast<int>(pairs_.size()) > capacity_) {
            pairs_.pop_front();
        }
    }

    /// -H g on the free coordinates (mask = 1), zero elsewhere.
    Vector direction(const Vector& g, const Vector& mask) const
    {
        Vector q = g.cwiseProduct(mask);
        std::vector<double> alpha(pairs_.size());
        for (int i = static_cast<int>(pairs_.size()) - 1; i >= 0; --i) {
            const auto& p = pairs_[i];
            alpha[i] = p.rho * p.s.cwiseProduct(mask).dot(q);
            q -= alpha[i] * p.y.cwiseProduct(mask);
        }
        if (!pairs_.empty()) {
            const auto& last = pairs_.back();
            q *= last.s.dot(last.y) / last.y.squaredNorm();
        }
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            const auto& p = pairs_[i];
            const double beta = p.rho * p.y.cwiseProduct(mask).dot(q);
            q += (alpha[i] - beta) * p.s.cwiseProduct(mask);
        }
        return -q.cwiseProduct(mask);
    }

private:
    struct Pair
    {
        Vector s, y;
        double rho;
    };
    int capacity_;
    std::deque<Pair> pairs_;
};

/// Bound-constrained smooth function seen by the inner solver.
struct InnerProblem
{
    Vector lower, upper;
    /// Value and gradient at v, or nullopt when the point cannot be evaluated.
    std::function<std::optional<double>(const Vector& v, Vector& gradient)> evaluate;
    /// Notifies that the most recent evaluation was accepted as the new iterate.
    std::function<void()> accept;
    /// Optional Hessian approximation at the accepted iterate.
    std::function<Eigen::MatrixXd()> hessian;
};

struct InnerState
{
    Vector v;
    double f = 0.0;
    Vector g;
};

struct InnerOutcome
{
    int iterations = 0;
    int evaluations = 0;
    bool stalled = false;
};

double projected_gradient_norm(const Vector& v, const Vector& g, const Vector& lo, const Vector& hi)
{
    return inf_norm(project(v - g, lo, hi) - v);
}

InnerOutcome projected_lbfgs(const InnerProblem& prob, InnerState& state, double tol, const SolverSettings& s)
{
    InnerOutcome out;
    LbfgsMemory memory(s.memory);
    const Eigen::Index n = state.v.size();
    Vector trial_grad(n);

    for (int it = 0; it < s.max_inner; ++it) {
        const double pg = projected_gradient_norm(state.v, state.g, prob.lower, prob.upper);
        if (pg <= tol) {
            break;
        }

        // Variables held at a bound with the gradient pushing outward.
        const double eps_active = std::min(1e-8, pg);
        Vector mask = Vector::Ones(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool at_lower = state.v[i] - prob.lower[i] <= eps_active && state.g[i] > 0.0;
            const bool at_upper = prob.upper[i] - state.v[i] <= eps_active && state.g[i] < 0.0;
            if (at_lower || at_upper) {
                mask[i] = 0.0;
            }
        }

        Vector d = memory.direction(state.g, mask);
        if (!(state.g.dot(d) < 0.0) || !d.allFinite()) {
            memory.clear();
            d = -state.g.cwiseProduct(mask);
        }
        if (!(inf_norm(d) > 0.0)) {
            // every descent direction is blocked by bounds: take a projected gradient step
            d = -state.g;
        }

        double t = memory.empty() ? std::min(1.0, 1.0 / inf_norm(d)) : 1.0;
        bool accepted = false;
        Vector trial;
        double f_trial = 0.0;
        for (int b = 0; b < s.max_backtracks; ++b, t *= s.backtrack) {
            trial = project(state.v + t * d, prob.lower, prob.upper);
            const Vector step = trial - state.v;
            if (!(inf_norm(step) > 0.0)) {
                break;
            }
            ++out.evaluations;
            const auto value = prob.evaluate(trial, trial_grad);
            if (!value || !std::isfinite(*value) || !trial_grad.allFinite()) {
                continue;
            }
            const double decrease = state.g.dot(step);
            if (*value <= state.f + s.armijo * decrease && *value <= state.f) {
                f_trial = *value;
                accepted = true;
                break;
            }
        }
        ++out.iterations;

        if (!accepted) {
            if (!memory.empty()) {
                memory.clear();
                continue;
            }
            out.stalled = true;
            break;
        }

        prob.accept();
        memory.push(trial - state.v, trial_grad - state.g);
        state.v = trial;
        state.f = f_trial;
        state.g = trial_grad;
    }
    return out;
}

/// Free/active split: variables held at a bound with the gradient pushing outward are active.
std::vector<Eigen::Index> free_coordinates(const Vector& v, const Vector& g, const Vector& lo, const Vector& hi,
                                           double eps)
{
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const bool at_lower = v[i] - lo[i] <= eps && g[i] > 0.0;
        const bool at_upper = hi[i] - v[i] <= eps && g[i] < 0.0;
        if (!at_lower && !at_upper) {
            free.push_back(i);
        }
    }
    return free;
}

/**
 * Projected Newton with Levenberg-Marquardt damping on the free block. The
 * damping is scaled by the Hessian diagonal, so the step is invariant to
 * diagonal rescaling of the variables.
 */
InnerOutcome projected_newton(const InnerProblem& prob, InnerState& state, double tol, const SolverSettings& s)
{
    InnerOutcome out;
    const Eigen::Index n = state.v.size();
    Vector trial_grad(n);
    double damping = 1e-8;
    Eigen::MatrixXd B;
    bool fresh = false;

    for (int it = 0; it < s.max_inner; ++it) {
        if (!fresh) {
            B = prob.hessian();
            fresh = true;
        }
        const Vector scale = B.diagonal().cwiseAbs().unaryExpr([](double d) { return d > 1e-12 ? 1.0 / d : 1.0; });
        const double pg = projected_gradient_norm(state.v, state.g.cwiseProduct(scale), prob.lower, prob.upper);
        if (pg <= tol) {
            break;
        }
        const auto free = free_coordinates(state.v, state.g, prob.lower, prob.upper, std::min(1e-8, pg));

        const auto nf = static_cast<Eigen::Index>(free.size());
        Vector d = Vector::Zero(n);
        if (nf > 0) {
            Eigen::MatrixXd M(nf, nf);
            Vector rhs(nf);
            for (Eigen::Index a = 0; a < nf; ++a) {
                rhs[a] = -state.g[free[a]];
                for (Eigen::Index b = 0; b < nf; ++b) {
                    M(a, b) = B(free[a], free[b]);
                }
            }
            const Vector diag = M.diagonal().cwiseAbs().cwiseMax(1e-12 * std::max(1.0, inf_norm(M.diagonal())));
            Vector dF;
            for (; damping < 1e12; damping *= 10.0) {
                Eigen::MatrixXd A = M;
                A.diagonal() += damping * diag;
                Eigen::LLT<Eigen::MatrixXd> llt(A);
                if (llt.info() == Eigen::Success) {
                    dF = llt.solve(rhs);
                    if (dF.allFinite() && rhs.dot(dF) > 0.0) {
                        break;
                    }
                }
            }
            if (dF.size() != nf) {
                out.stalled = true;
                break;
            }
            for (Eigen::Index a = 0; a < nf; ++a) {
                d[free[a]] = dF[a];
            }
        } else {
            d = -state.g;
        }

        double t = 1.0;
        bool accepted = false;
        int backtracks = 0;
        Vector trial;
        double f_trial = 0.0;
        for (; backtracks < s.max_backtracks; ++backtracks, t *= s.backtrack) {
            trial = project(state.v + t * d, prob.lower, prob.upper);
            const Vector step = trial - state.v;
            if (!(inf_norm(step) > 0.0)) {
                break;
            }
            ++out.evaluations;
            const auto value = prob.evaluate(trial, trial_grad);
            if (!value || !std::isfinite(*value) || !trial_grad.allFinite()) {
                continue;
            }
            if (*value <= state.f + s.armijo * state.g.dot(step) && *value <= state.f) {
                f_trial = *value;
                accepted = true;
                break;
            }
        }
        ++out.iterations;

        if (!accepted) {
            damping *= 100.0;
            if (damping >= 1e12) {
                out.stalled = true;
                break;
            }
            continue;
        }
        damping = backtracks == 0 ? std::max(1e-12, 0.1 * damping) : damping * (backtracks > 2 ? 10.0 : 1.0);

        prob.accept();
        state.v = trial;
        state.f = f_trial;
        state.g = trial_grad;
        fresh = false;
    }
    return out;
}

struct Candidate
{
    Vector z;
    Vector multipliers;
    double objective = kInf;
    double violation = kInf;
    double stationarity = kInf;
};

bool better(const Candidate& a, const Candidate& b, double feas_tol)
{
    const bool fa = a.violation <= feas_tol;
    const bool fb = b.violation <= feas_tol;
    if (fa != fb) {
        return fa;
    }
    if (fa) {
        return a.objective < b.objective;
    }
    return a.violation < b.violation;
}

Solution finish(const NlpProblem& prob, const Candidate& best, Termination reason, SolverReport report,
                std::chrono::steady_clock::time_point start)
{
    Solution sol;
    sol.z = best.z;
    sol.multipliers = best.multipliers;
    report.reason = reason;
    report.objective = prob.objective(best.z, nullptr);
    report.constraint_violation = prob.m > 0 ? inf_norm(prob.constraints(best.z)) : 0.0;
    report.bound_violation =
        std::max(inf_norm((prob.lower - best.z).cwiseMax(0.0)), inf_norm((best.z - prob.upper).cwiseMax(0.0)));
    report.stationarity = best.stationarity;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.report = report;
    return sol;
}

Solution minimize_full_space(const NlpProblem& prob, const Vector& z0, const SolverSettings& s)
{
    const auto start = std::chrono::steady_clock::now();
    SolverReport report;

    Vector z = project(z0, prob.lower, prob.upper);
    Vector lambda = Vector::Zero(prob.m);
    double rho = s.rho0;

    Vector grad(prob.n);
    const double f0 = prob.objective(z, &grad);
    Vector c = prob.constraints(z);
    if (!std::isfinite(f0) || !grad.allFinite() || !c.allFinite()) {
        throw EvaluationError("non-finite objective or constraints at the initial point", z);
    }
    double previous_violation = inf_norm(c);

    auto evaluate_merit = [&](const Vector& v, Vector& g) -> std::optional<double> {
        const double f = prob.objective(v, &g);
        const Vector cv = prob.constraints(v);
        if (!std::isfinite(f) || !cv.allFinite()) {
            return std::nullopt;
        }
        const Vector weights = lambda + rho * cv;
        g += prob.jacobian_transpose_product(v, weights);
        return f + lambda.dot(cv) + 0.5 * rho * cv.squaredNorm();
    };

    InnerProblem inner{prob.lower, prob.upper, evaluate_merit, [] {}, {}};
    Candidate best;
    Termination reason = Termination::MaxOuterIterations;
    int unchanged = 0;

    for (int outer = 1; outer <= s.max_outer; ++outer) {
        InnerState state;
        state.v = z;
        state.g.resize(prob.n);
        const auto merit = evaluate_merit(z, state.g);
        if (!merit) {
            throw EvaluationError("non-finite merit at an accepted iterate", z);
        }
        state.f = *merit;
        const auto out = projected_lbfgs(inner, state, s.opt_tol, s);
        report.inner_iterations += out.iterations;
        report.evaluations += out.evaluations + 1;
        report.outer_iterations = outer;

        unchanged = (state.v == z) ? unchanged + 1 : 0;
        z = state.v;
        c = prob.constraints(z);
        const double violation = inf_norm(c);
        lambda += rho * c;

        const double f = prob.objective(z, &grad);
        const Vector lagrangian_grad = grad + prob.jacobian_transpose_product(z, lambda);
        const double stationarity = projected_gradient_norm(z, lagrangian_grad, prob.lower, prob.upper);

        Candidate current{z, lambda, f, violation, stationarity};
        if (better(current, best, s.feas_tol) || best.z.size() == 0) {
            best = current;
        }
        if (s.progress) {
            s.progress(outer, f, violation, stationarity);
        }
        if (violation <= s.feas_tol && stationarity <= s.opt_tol) {
            best = current;
            reason = Termination::Converged;
            break;
        }
        if (unchanged >= 2) {
            reason = Termination::Stalled;
            break;
        }
        if (violation > s.required_shrink * previous_violation) {
            rho *= s.penalty_growth;
        }
        previous_violation = violation;
    }
    return finish(prob, best, reason, report, start);
}

/// Reduced-space variant: equality constraints enforced by completion, dependent bounds by multipliers.
Solution minimize_reduced(const NlpProblem& prob, const Vector& z0, const SolverSettings& s)
{
    const auto start = std::chrono::steady_clock::now();
    const Elimination& elim = *prob.elimination;
    const auto nf = static_cast<Eigen::Index>(elim.free.size());
    SolverReport report;

    std::vector<bool> is_free(prob.n, false);
    for (auto i : elim.free) {
        is_free[i] = true;
    }
    std::vector<Eigen::Index> dependent;
    for (Eigen::Index i = 0; i < prob.n; ++i) {
        if (!is_free[i]) {
            dependent.push_back(i);
        }
    }

    Vector lo(nf), hi(nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
        lo[j] = prob.lower[elim.free[j]];
        hi[j] = prob.upper[elim.free[j]];
    }
    auto gather = [&](const Vector& z) {
        Vector v(nf);
        for (Eigen::Index j = 0; j < nf; ++j) {
            v[j] = z[elim.free[j]];
        }
        return v;
    };
    auto scatter = [&](Vector& z, const Vector& v) {
        for (Eigen::Index j = 0; j < nf; ++j) {
            z[elim.free[j]] = v[j];
        }
    };

    Vector z = z0;
    scatter(z, project(gather(z0), lo, hi));
    if (!elim.complete(z)) {
        throw EvaluationError("initial point could not be completed to a feasible point", z);
    }

    // Multipliers for l_i - z_i <= 0 and z_i - u_i <= 0 on dependent variables.
    Vector mu_lower = Vector::Zero(prob.n);
    Vector mu_upper = Vector::Zero(prob.n);
    double rho = s.rho0;

    auto bound_violation = [&](const Vector& zz) {
        double v = 0.0;
        for (auto i : dependent) {
            v = std::max({v, prob.lower[i] - zz[i], zz[i] - prob.upper[i]});
        }
        return v;
    };

    // Merit value and full-space gradient for the current multipliers (rho_eff = 0 gives the Lagrangian).
    auto merit = [&](const Vector& zz, Vector& g, bool lagrangian) -> double {
        double value = prob.objective(zz, &g);
        for (auto i : dependent) {
            if (std::isfinite(prob.lower[i])) {
                const double gi = prob.lower[i] - zz[i];
                const double w = lagrangian ? mu_lower[i] : std::max(0.0, mu_lower[i] + rho * gi);
                if (!lagrangian) {
                    value += (w * w - mu_lower[i] * mu_lower[i]) / (2.0 * rho);
                }
                g[i] -= w;
            }
            if (std::isfinite(prob.upper[i])) {
                const double gi = zz[i] - prob.upper[i];
                const double w = lagrangian ? mu_upper[i] : std::max(0.0, mu_upper[i] + rho * gi);
                if (!lagrangian) {
                    value += (w * w - mu_upper[i] * mu_upper[i]) / (2.0 * rho);
                }
                g[i] += w;
            }
        }
        return value;
    };

    Vector full_grad(prob.n);
    auto reduced_gradient = [&](const Vector& zz, const Vector& g_full, Vector* adjoint_out) {
        Vector rhs = g_full;
        for (auto i : elim.free) {
            rhs[i] = 0.0;
        }
        const Vector adj = elim.adjoint_solve(zz, rhs);
        const Vector correction = prob.jacobian_transpose_product(zz, adj);
        Vector red(nf);
        for (Eigen::Index j = 0; j < nf; ++j) {
            red[j] = g_full[elim.free[j]] - correction[elim.free[j]];
        }
        if (adjoint_out) {
            *adjoint_out = adj;
        }
        return red;
    };

    // Z^T H Z plus rho z_i^T z_i for every active bound term, Z = dz/dz_free restricted to the rows that matter.
    std::vector<Eigen::Index> position(prob.n, -1);
    for (Eigen::Index j = 0; j < nf; ++j) {
        position[elim.free[j]] = j;
    }
    auto reduced_hessian = [&](const Vector& zz) -> Eigen::MatrixXd {
        const Eigen::SparseMatrix<double> H = prob.objective_hessian(zz);
        struct Entry
        {
            Eigen::Index i, j;
            double v;
        };
        std::vector<Entry> entries;
        for (int k = 0; k < H.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator e(H, k); e; ++e) {
                if (e.value() != 0.0) {
                    entries.push_back({e.row(), e.col(), e.value()});
                }
            }
        }
        for (auto i : dependent) {
            double c = 0.0;
            if (std::isfinite(prob.lower[i]) && mu_lower[i] + rho * (prob.lower[i] - zz[i]) > 0.0) {
                c += rho;
            }
            if (std::isfinite(prob.upper[i]) && mu_upper[i] + rho * (zz[i] - prob.upper[i]) > 0.0) {
                c += rho;
            }
            if (c > 0.0) {
                entries.push_back({i, i, c});
            }
        }

        // Sensitivity rows for every dependent variable that carries curvature.
        std::vector<Eigen::Index> sens_of(prob.n, -1);
        std::vector<Eigen::Index> dep_rows;
        for (const auto& e : entries) {
            for (auto i : {e.i, e.j}) {
                if (position[i] < 0 && sens_of[i] < 0) {
                    sens_of[i] = static_cast<Eigen::Index>(dep_rows.size());
                    dep_rows.push_back(i);
                }
            }
        }
        const Eigen::MatrixXd S = dep_rows.empty() ? Eigen::MatrixXd(0, nf) : elim.sensitivity(zz, dep_rows);

        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nf, nf);
        // Dependent-dependent part: Z_d^T H_dd Z_d, as a rank update when H_dd is a nonnegative diagonal.
        const auto nd = static_cast<Eigen::Index>(dep_rows.size());
        Eigen::MatrixXd Hdd = Eigen::MatrixXd::Zero(nd, nd);
        bool diagonal = true;
        for (const auto& e : entries) {
            const bool di = position[e.i] < 0;
            const bool dj = position[e.j] < 0;
            if (di && dj) {
                Hdd(sens_of[e.i], sens_of[e.j]) += e.v;
                diagonal = diagonal && e.i == e.j;
            } else if (!di && !dj) {
                B(position[e.i], position[e.j]) += e.v;
            } else if (di) {
                B.col(position[e.j]) += e.v * S.row(sens_of[e.i]).transpose();
            } else {
                B.row(position[e.i]) += e.v * S.row(sens_of[e.j]);
            }
        }
        if (nd > 0) {
            if (diagonal && (Hdd.diagonal().array() >= 0.0).all()) {
                const Eigen::MatrixXd W = Hdd.diagonal().cwiseSqrt().asDiagonal() * S;
                Eigen::MatrixXd R = Eigen::MatrixXd::Zero(nf, nf);
                R.selfadjointView<Eigen::Lower>().rankUpdate(W.transpose());
                B += R.selfadjointView<Eigen::Lower>();
            } else {
                B += S.transpose() * (Hdd * S);
            }
        }
        return 0.5 * (B + B.transpose());
    };

    Vector accepted_z = z;
    Vector last_trial_z = z;
    auto evaluate = [&](const Vector& v, Vector& g) -> std::optional<double> {
        last_trial_z = accepted_z;
        scatter(last_trial_z, v);
        if (!elim.complete(last_trial_z)) {
            return std::nullopt;
        }
        const double value = merit(last_trial_z, full_grad, false);
        if (!std::isfinite(value) || !full_grad.allFinite()) {
            return std::nullopt;
        }
        g = reduced_gradient(last_trial_z, full_grad, nullptr);
        return value;
    };
    InnerProblem inner{lo, hi, evaluate, [&] { accepted_z = last_trial_z; }, {}};
    if (s.second_order && prob.objective_hessian && elim.sensitivity) {
        inner.hessian = [&] { return reduced_hessian(accepted_z); };
    }

    {
        const double f0 = merit(z, full_grad, false);
        if (!std::isfinite(f0) || !full_grad.allFinite()) {
            throw EvaluationError("non-finite objective at the initial point", z);
        }
    }

    double previous_violation = bound_violation(z);
    Candidate best;
    Termination reason = Termination::MaxOuterIterations;
    int unchanged = 0;

    for (int outer = 1; outer <= s.max_outer; ++outer) {
        accepted_z = z;
        InnerState state;
        state.v = gather(z);
        state.g.resize(nf);
        const auto f_start = evaluate(state.v, state.g);
        if (!f_start) {
            throw EvaluationError("accepted iterate could not be re-evaluated", z);
        }
        accepted_z = last_trial_z;
        state.f = *f_start;
        // Loose inner solves while the multipliers are still moving.
        const double inner_tol = inner.hessian ? std::max(s.opt_tol, 1e-2 * std::pow(0.1, outer - 1)) : s.opt_tol;
        const auto out = inner.hessian ? projected_newton(inner, state, inner_tol, s)
                                       : projected_lbfgs(inner, state, s.opt_tol, s);
        report.inner_iterations += out.iterations;
        report.evaluations += out.evaluations + 1;
        report.outer_iterations = outer;

        unchanged = (accepted_z == z && inner_tol <= s.opt_tol) ? unchanged + 1 : 0;
        z = accepted_z;
        const double violation = bound_violation(z);
        for (auto i : dependent) {
            if (std::isfinite(prob.lower[i])) {
                mu_lower[i] = std::max(0.0, mu_lower[i] + rho * (prob.lower[i] - z[i]));
            }
            if (std::isfinite(prob.upper[i])) {
                mu_upper[i] = std::max(0.0, mu_upper[i] + rho * (z[i] - prob.upper[i]));
            }
        }

        Vector lag_grad(prob.n);
        merit(z, lag_grad, true);
        Vector adjoint;
        const Vector red = reduced_gradient(z, lag_grad, &adjoint);
        double stationarity = 0.0;
        if (inner.hessian) {
            // Newton-scaled: the projected step along -D^{-1} g, D = diag of the reduced Hessian.
            const Vector D = reduced_hessian(z).diagonal().cwiseAbs();
            const Vector scale = D.unaryExpr([](double d) { return d > 1e-12 ? 1.0 / d : 1.0; });
            stationarity = projected_gradient_norm(gather(z), red.cwiseProduct(scale), lo, hi);
        } else {
            stationarity = projected_gradient_norm(gather(z), red, lo, hi);
        }
        const double f = prob.objective(z, nullptr);
        const double eq_violation = inf_norm(prob.constraints(z));

        Candidate current{z, -adjoint, f, std::max(violation, eq_violation), stationarity};
        if (better(current, best, s.feas_tol) || best.z.size() == 0) {
            best = current;
        }
        if (s.progress) {
            s.progress(outer, f, current.violation, stationarity);
        }
        if (current.violation <= s.feas_tol && stationarity <= s.opt_tol) {
            best = current;
            reason = Termination::Converged;
            break;
        }
        if (unchanged >= 2) {
            reason = Termination::Stalled;
            break;
        }
        if (violation > s.required_shrink * previous_violation) {
            rho *= s.penalty_growth;
        }
        previous_violation = violation;
    }
    return finish(prob, best, reason, report, start);
}

} // namespace

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::Converged:
        return "converged";
    case Termination::MaxOuterIterations:
        return "max_outer_iterations";
    case Termination::Stalled:
        return "stalled";
    }
    return "unknown";
}

void NlpProblem::validate() const
{
    if (n <= 0 || m < 0 || m > n) {
        throw std::invalid_argument("NlpProblem: need n > 0 and 0 <= m <= n");
    }
    if (!objective || (m > 0 && (!constraints || !jacobian_transpose_product))) {
        throw std::invalid_argument("NlpProblem: missing evaluator");
    }
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("NlpProblem: bound vectors must have size n");
    }
    if (!((lower.array() <= upper.array()).all())) {
        throw std::invalid_argument("NlpProblem: lower bound exceeds upper bound");
    }
    if (elimination) {
        if (!elimination->complete || !elimination->adjoint_solve) {
            throw std::invalid_argument("NlpProblem: elimination needs complete and adjoint_solve");
        }
        for (auto i : elimination->free) {
            if (i < 0 || i >= n) {
                throw std::invalid_argument("NlpProblem: free index out of range");
            }
        }
    }
}

Vector project(const Vector& z, const Vector& lower, const Vector& upper)
{
    return z.cwiseMax(lower).cwiseMin(upper);
}

Solution minimize(const NlpProblem& problem, const Vector& z0, const SolverSettings& settings)
{
    problem.validate();
    if (z0.size() != problem.n) {
        throw std::invalid_argument("minimize: start point has wrong size");
    }
    if (problem.elimination) {
        return minimize_reduced(problem, z0, settings);
    }
    return minimize_full_space(problem, z0, settings);
}

GradientCheck check_gradients(const NlpProblem& problem, const Vector& z, double h)
{
    problem.validate();
    GradientCheck out;
    Vector grad(problem.n);
    problem.objective(z, &grad);

    auto entry_error = [](double fd, double an) {
        return std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1.0});
    };

    for (Eigen::Index i = 0; i < problem.n; ++i) {
        const double step = h * std::max(1.0, std::abs(z[i]));
        Vector zp = z, zm = z;
        zp[i] += step;
        zm[i] -= step;
        const double fd = (problem.objective(zp, nullptr) - problem.objective(zm, nullptr)) / (zp[i] - zm[i]);
        out.objective_error = std::max(out.objective_error, entry_error(fd, grad[i]));

        if (problem.m > 0) {
            const Vector fd_col = (problem.constraints(zp) - problem.constraints(zm)) / (zp[i] - zm[i]);
            Vector unit = Vector::Zero(problem.n);
            unit[i] = 1.0;
            Vector an_col;
            if (problem.jacobian_product) {
                an_col = problem.jacobian_product(z, unit);
            } else {
                an_col.resize(problem.m);
                for (Eigen::Index r = 0; r < problem.m; ++r) {
                    Vector e = Vector::Zero(problem.m);
                    e[r] = 1.0;
                    an_col[r] = problem.jacobian_transpose_product(z, e)[i];
                }
            }
            for (Eigen::Index r = 0; r < problem.m; ++r) {
                out.constraint_error = std::max(out.constraint_error, entry_error(fd_col[r], an_col[r]));
            }
        }
    }
    out.max_error = std::max(out.objective_error, out.constraint_error);
    return out;
}

} // namespace scp::nlp
