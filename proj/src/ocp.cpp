#include "scp/ocp.hpp"

#include "scp/errors.hpp"
#include "scp/reactor.hpp"
#include "scp/units.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

namespace scp::ocp
{

namespace
{

constexpr double kLn10 = 2.302585092994045684;
constexpr int kX = idx(State::X);
constexpr int kH = idx(Species::H3O);

using Vector = Eigen::VectorXd;
using integrator::StepVector;

AlgebraicVector powers_of(const AlgebraicVector& alpha)
{
    return alpha.unaryExpr([](double a) { return std::pow(10.0, -a); });
}

// Blocks of the step residual k (1..K): A = d/dx_k, B = d/dalpha_k, U = d/du_{k-1}.
struct Block
{
    Eigen::Matrix<double, 18, 10> A;
    Eigen::Matrix<double, 18, 8> B;
    Eigen::Matrix<double, 18, 6> U;
    Eigen::PartialPivLU<Eigen::Matrix<double, 18, 18>> dependent_lu;
};

class Transcription
{
    using StateMatrix = Eigen::Matrix<double, 10, 10>;

public:
    Transcription(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                  const TranscriptionOptions& options)
        : cfg_(cfg)
        , p_(p)
        , options_(options)
        , layout_(cfg.steps)
        , dt_(cfg.dt())
    {
        pair_.s_g = pair.s_g;
        pair_.s_y = AlgebraicVector::Ones();
    }

    const DecisionLayout& layout() const { return layout_; }
    const equilibrium::ScalingPair& pair() const { return pair_; }

    StateVector x_at(const Vector& z, int k) const
    {
        return k == 0 ? cfg_.x0 : StateVector(z.segment<10>(layout_.state(k)));
    }
    AlgebraicVector alpha_at(const Vector& z, int k) const { return z.segment<8>(layout_.exponent(k)); }
    InputVector u_at(const Vector& z, int k) const { return z.segment<6>(layout_.input(k)); }

    double objective(const Vector& z, Vector* grad) const
    {
        const auto& ind = reactor::PhaseIndicators::standard();
        const int K = layout_.K;
        const double mX = kBiomassMolarMass;
        double profit = 0.0, cost = 0.0, ph = 0.0, du = 0.0;
        if (grad) {
            grad->setZero(layout_.size());
        }
        for (int k = 1; k <= K; ++k) {
            const InputVector u = u_at(z, k - 1);
            const double xX = z[layout_.state(k, kX)];
            const double Fl = ind.e_l.dot(u);
            profit += cfg_.p_X * mX * xX * Fl * dt_;
            cost += cfg_.p_F.dot(u) * dt_;
            const double dev = cfg_.pH_target - z[layout_.exponent(k, kH)];
            ph += 0.5 * cfg_.Q_pH * dev * dev * dt_;
            if (grad) {
                (*grad)[layout_.state(k, kX)] += -cfg_.alpha_eco * cfg_.p_X * mX * Fl * dt_;
                grad->segment<6>(layout_.input(k - 1)) +=
                    cfg_.alpha_eco * (cfg_.p_F - cfg_.p_X * mX * xX * ind.e_l) * dt_;
                (*grad)[layout_.exponent(k, kH)] += -cfg_.alpha_pH * cfg_.Q_pH * dev * dt_;
            }
        }
        for (int k = 0; k < K; ++k) {
            const InputVector d = u_at(z, k) - (k == 0 ? cfg_.u0 : u_at(z, k - 1));
            du += 0.5 * d.dot(cfg_.Q_du.cwiseProduct(d)) / dt_;
            if (grad) {
                const InputVector w = cfg_.alpha_du * cfg_.Q_du.cwiseProduct(d) / dt_;
                grad->segment<6>(layout_.input(k)) += w;
                if (k > 0) {
                    grad->segment<6>(layout_.input(k - 1)) -= w;
                }
            }
        }
        const double ctg = cfg_.p_X * mX * p_.V * (z[layout_.state(K, kX)] - cfg_.x0[kX]);
        if (grad) {
            (*grad)[layout_.state(K, kX)] += -cfg_.alpha_eco * cfg_.p_X * mX * p_.V;
        }
        const double eco = cost - profit - ctg;
        return cfg_.alpha_eco * eco + cfg_.alpha_pH * ph + cfg_.alpha_du * du;
    }

    /// Exact objective Hessian: pH curvature on alpha_H, profit cross terms x_X/u, input-move penalty.
    Eigen::SparseMatrix<double> objective_hessian(const Vector& /*z*/) const
    {
        const auto& ind = reactor::PhaseIndicators::standard();
        const int K = layout_.K;
        const double cross = -cfg_.alpha_eco * cfg_.p_X * kBiomassMolarMass * dt_;
        std::vector<Eigen::Triplet<double>> h;
        h.reserve(static_cast<std::size_t>(K) * 32);
        for (int k = 1; k <= K; ++k) {
            h.emplace_back(layout_.exponent(k, kH), layout_.exponent(k, kH), cfg_.alpha_pH * cfg_.Q_pH * dt_);
            for (int f = 0; f < kNumFeeds; ++f) {
                if (ind.e_l[f] != 0.0) {
                    h.emplace_back(layout_.state(k, kX), layout_.input(k - 1, f), cross * ind.e_l[f]);
                    h.emplace_back(layout_.input(k - 1, f), layout_.state(k, kX), cross * ind.e_l[f]);
                }
            }
        }
        for (int k = 0; k < K; ++k) {
            for (int f = 0; f < kNumFeeds; ++f) {
                const double w = cfg_.alpha_du * cfg_.Q_du[f] / dt_;
                h.emplace_back(layout_.input(k, f), layout_.input(k, f), w);
                if (k > 0) {
                    h.emplace_back(layout_.input(k - 1, f), layout_.input(k - 1, f), w);
                    h.emplace_back(layout_.input(k, f), layout_.input(k - 1, f), -w);
                    h.emplace_back(layout_.input(k - 1, f), layout_.input(k, f), -w);
                }
            }
        }
        Eigen::SparseMatrix<double> H(layout_.size(), layout_.size());
        H.setFromTriplets(h.begin(), h.end());
        return H;
    }

    /// d(dependent rows)/d(inputs) by a forward sweep over the block-bidiagonal step Jacobian.
    Eigen::MatrixXd sensitivity(const Vector& z, const std::vector<Eigen::Index>& rows) const
    {
        const auto blocks = blocks_at(z);
        const int K = layout_.K;
        const Eigen::Index nf = 6 * static_cast<Eigen::Index>(K);
        const Eigen::Index n_states = 10 * static_cast<Eigen::Index>(K);

        std::vector<std::vector<std::pair<Eigen::Index, int>>> wanted(K + 1);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Eigen::Index i = rows[r];
            if (i < 0 || i >= layout_.constraint_count()) {
                throw DomainError("sensitivity: row is not a dependent variable");
            }
            const bool state = i < n_states;
            const Eigen::Index local = state ? i : i - n_states;
            const int k = static_cast<int>(local / (state ? 10 : 8)) + 1;
            const int offset = static_cast<int>(state ? local % 10 : 10 + local % 8);
            wanted[k].emplace_back(static_cast<Eigen::Index>(r), offset);
        }

        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), nf);
        Eigen::MatrixXd previous = Eigen::MatrixXd::Zero(10, nf);
        Eigen::MatrixXd rhs(18, nf);
        for (int k = 1; k <= K; ++k) {
            const Eigen::Index cols = 6 * static_cast<Eigen::Index>(k);
            const Block& b = (*blocks)[k - 1];
            auto r = rhs.leftCols(cols);
            r.setZero();
            r.topRows(10).leftCols(cols - 6) = previous.leftCols(cols - 6);
            r.rightCols(6) = -b.U;
            const Eigen::MatrixXd S = b.dependent_lu.solve(r);
            for (const auto& [row, offset] : wanted[k]) {
                out.row(row).head(cols) = S.row(offset);
            }
            previous.leftCols(cols) = S.topRows(10);
        }
        return out;
    }

    Vector constraints(const Vector& z) const
    {
        Vector c(layout_.constraint_count());
        for_each_step([&](int k) {
            StepVector zz;
            zz << x_at(z, k), powers_of(alpha_at(z, k));
            c.segment<18>(18 * (k - 1)) =
                integrator::step_residual(zz, x_at(z, k - 1), u_at(z, k - 1), dt_, p_, pair_);
        });
        return c;
    }

    Vector jacobian_transpose_product(const Vector& z, const Vector& v) const
    {
        const auto blocks = blocks_at(z);
        Vector out = Vector::Zero(layout_.size());
        for (int k = 1; k <= layout_.K; ++k) {
            const Block& b = (*blocks)[k - 1];
            const auto vk = v.segment<18>(18 * (k - 1));
            out.segment<10>(layout_.state(k)) += b.A.transpose() * vk;
            out.segment<8>(layout_.exponent(k)) += b.B.transpose() * vk;
            out.segment<6>(layout_.input(k - 1)) += b.U.transpose() * vk;
            if (k > 1) {
                out.segment<10>(layout_.state(k - 1)) -= vk.head<10>();
            }
        }
        return out;
    }

    Vector jacobian_product(const Vector& z, const Vector& d) const
    {
        const auto blocks = blocks_at(z);
        Vector out(layout_.constraint_count());
        for (int k = 1; k <= layout_.K; ++k) {
            const Block& b = (*blocks)[k - 1];
            Eigen::Matrix<double, 18, 1> r = b.A * d.segment<10>(layout_.state(k)) +
                                             b.B * d.segment<8>(layout_.exponent(k)) +
                                             b.U * d.segment<6>(layout_.input(k - 1));
            if (k > 1) {
                r.head<10>() -= d.segment<10>(layout_.state(k - 1));
            }
            out.segment<18>(18 * (k - 1)) = r;
        }
        return out;
    }

    bool complete(Vector& z) const
    {
        StateVector x_prev = cfg_.x0;
        AlgebraicVector y_prev = y0();
        for (int k = 1; k <= layout_.K; ++k) {
            const InputVector u = u_at(z, k - 1);
            StepVector guess;
            guess << z.segment<10>(layout_.state(k)).cwiseMax(0.0), powers_of(alpha_at(z, k));
            const auto step = solve_step(guess, x_prev, y_prev, u);
            if (!step) {
                return false;
            }
            z.segment<10>(layout_.state(k)) = step->x;
            z.segment<8>(layout_.exponent(k)) = exponents_of(step->y);
            x_prev = step->x;
            y_prev = step->y;
        }
        return true;
    }

    Vector adjoint_solve(const Vector& z, const Vector& rhs) const
    {
        const auto blocks = blocks_at(z);
        Vector mu(layout_.constraint_count());
        Eigen::Matrix<double, 10, 1> carry = Eigen::Matrix<double, 10, 1>::Zero();
        for (int k = layout_.K; k >= 1; --k) {
            Eigen::Matrix<double, 18, 1> r;
            r << rhs.segment<10>(layout_.state(k)) + carry, rhs.segment<8>(layout_.exponent(k));
            const Eigen::Matrix<double, 18, 1> mk = (*blocks)[k - 1].dependent_lu.transpose().solve(r);
            mu.segment<18>(18 * (k - 1)) = mk;
            carry = mk.head<10>();
        }
        return mu;
    }

    const AlgebraicVector& y0() const
    {
        std::call_once(y0_once_, [this] {
            y0_ = equilibrium::solve_speciation(cfg_.x0, equilibrium::default_initial_guess(cfg_.x0), p_, pair_,
                                                options_.integrator.speciation)
                      .y;
        });
        return y0_;
    }

private:
    template <typename F>
    void for_each_step(F&& body) const
    {
        const int K = layout_.K;
        const int threads = std::clamp(options_.threads, 1, K);
        if (threads == 1) {
            for (int k = 1; k <= K; ++k) {
                body(k);
            }
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int k = 1 + t; k <= K; k += threads) {
                    body(k);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::optional<integrator::StepResult> solve_step(const StepVector& guess, const StateVector& x_prev,
                                                     const AlgebraicVector& y_prev, const InputVector& u) const
    {
        const auto& newton = options_.integrator.newton;
        auto attempt = [&](const StepVector& start, double dt) -> std::optional<integrator::StepResult> {
            try {
                return integrator::solve_step_from(start, x_prev, u, dt, p_, pair_, newton);
            } catch (const NonConvergenceError&) {
            } catch (const SingularJacobianError&) {
            }
            return std::nullopt;
        };
        if (guess.allFinite()) {
            if (auto r = attempt(guess, dt_)) {
                return r;
            }
        }
        const StepVector previous = integrator::pack_step(x_prev, y_prev, pair_);
        if (auto r = attempt(previous, dt_)) {
            return r;
        }
        if (!options_.integrator.retry_with_half_step) {
            return std::nullopt;
        }
        try {
            const auto half = integrator::advance(x_prev, y_prev, u, 0.5 * dt_, p_, pair_, options_.integrator);
            const auto full = integrator::advance(half.x, half.y, u, 0.5 * dt_, p_, pair_, options_.integrator);
            return attempt(integrator::pack_step(full.x, full.y, pair_), dt_);
        } catch (const NonConvergenceError&) {
        } catch (const SingularJacobianError&) {
        }
        return std::nullopt;
    }

    Block block(const Vector& z, int k) const
    {
        const StateVector x = x_at(z, k);
        const AlgebraicVector y = powers_of(alpha_at(z, k));
        const InputVector u = u_at(z, k - 1);
        const auto fj = reactor::rhs_jacobian(x, y, u, p_);
        const auto gj = equilibrium::jacobian_g(x, y, p_);
        const AlgebraicVector dy_dalpha = -kLn10 * y;

        Block b;
        b.A.topRows<10>() = StateMatrix::Identity() - fj.d_dx * dt_;
        b.A.bottomRows<8>() = pair_.s_g.asDiagonal() * gj.d_dx;
        b.B.topRows<10>() = -fj.d_dy * dy_dalpha.asDiagonal() * dt_;
        b.B.bottomRows<8>() = pair_.s_g.asDiagonal() * gj.d_dy * dy_dalpha.asDiagonal();
        b.U.topRows<10>() = -fj.d_du * dt_;
        b.U.bottomRows<8>().setZero();
        Eigen::Matrix<double, 18, 18> D;
        D << b.A, b.B;
        b.dependent_lu.compute(D);
        return b;
    }

    std::shared_ptr<const std::vector<Block>> blocks_at(const Vector& z) const
    {
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            if (cached_blocks_ && cached_z_.size() == z.size() && cached_z_ == z) {
                return cached_blocks_;
            }
        }
        auto blocks = std::make_shared<std::vector<Block>>(layout_.K);
        for_each_step([&](int k) { (*blocks)[k - 1] = block(z, k); });
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cached_z_ = z;
        cached_blocks_ = blocks;
        return blocks;
    }

    OcpConfig cfg_;
    ModelParameters p_;
    TranscriptionOptions options_;
    DecisionLayout layout_;
    double dt_;
    equilibrium::ScalingPair pair_;

    mutable std::once_flag y0_once_;
    mutable AlgebraicVector y0_;
    mutable std::mutex cache_mutex_;
    mutable Vector cached_z_;
    mutable std::shared_ptr<const std::vector<Block>> cached_blocks_;
};

} // namespace

OcpConfig OcpConfig::laboratory()
{
    OcpConfig cfg;
    StateVector grams;
    grams << 2.00, 2.31e-2, 3.77e-2, 4.03e-1, 9.10e-1, 3.07e-3, 2.23e-7, 6.29e-1, 1.11, 1.05;
    cfg.x0 = to_molar(grams);
    cfg.u0 << 1.0e-2, 6.84e-5, 6.71e-7, 5.62e-11, 8.96e-3, 8.53e-3;
    cfg.x_max[idx(State::X)] = 20.0 / kBiomassMolarMass;
    cfg.x_max[idx(State::N)] = 1.0;
    return cfg;
}

void OcpConfig::validate() const
{
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("ocp: horizon must be > 0");
    }
    if (steps < 2) {
        throw DomainError("ocp: steps must be >= 2");
    }
    if (!(alpha_eco >= 0.0) || !(alpha_pH >= 0.0) || !(alpha_du >= 0.0) || !(Q_pH >= 0.0) ||
        !((Q_du.array() >= 0.0).all())) {
        throw DomainError("ocp: weights must be >= 0");
    }
    if (!((p_F.array() >= 0.0).all()) || !(p_X >= 0.0)) {
        throw DomainError("ocp: prices must be >= 0");
    }
    if (!((x_min.array() <= x_max.array()).all()) || !((alpha_min.array() <= alpha_max.array()).all()) ||
        !((u_min.array() <= u_max.array()).all())) {
        throw DomainError("ocp: lower bounds must not exceed upper bounds");
    }
    if (!((x0.array() >= 0.0).all()) || !x0.allFinite()) {
        throw DomainError("ocp: x0 must be finite and >= 0");
    }
    if (!((u0.array() >= 0.0).all()) || !u0.allFinite()) {
        throw DomainError("ocp: u0 must be finite and >= 0");
    }
}

ObjectiveBreakdown objective_terms(const DiscreteTrajectory& traj, const OcpConfig& cfg, const ModelParameters& p)
{
    const int K = static_cast<int>(traj.u.size());
    if (K < 1 || traj.x.size() != traj.u.size() + 1 || traj.y.size() != traj.x.size()) {
        throw DomainError("objective_terms: trajectory needs K inputs and K+1 points");
    }
    const auto& ind = reactor::PhaseIndicators::standard();
    const double dt = cfg.horizon / K;
    const double mX = kBiomassMolarMass;
    ObjectiveBreakdown o;
    for (int k = 1; k <= K; ++k) {
        const InputVector& u = traj.u[k - 1];
        o.phi_profit += cfg.p_X * mX * traj.x[k][kX] * ind.e_l.dot(u) * dt;
        o.phi_cost += cfg.p_F.dot(u) * dt;
        const double dev = cfg.pH_target - equilibrium::ph_of(traj.y[k]);
        o.phi_pH += 0.5 * cfg.Q_pH * dev * dev * dt;
    }
    for (int k = 0; k < K; ++k) {
        const InputVector d = traj.u[k] - (k == 0 ? cfg.u0 : traj.u[k - 1]);
        o.phi_du += 0.5 * d.dot(cfg.Q_du.cwiseProduct(d)) / dt;
    }
    o.phi_ctg = cfg.p_X * mX * p.V * (traj.x[K][kX] - traj.x[0][kX]);
    o.phi_eco = o.phi_cost - o.phi_profit - o.phi_ctg;
    o.phi_total = cfg.alpha_eco * o.phi_eco + cfg.alpha_pH * o.phi_pH + cfg.alpha_du * o.phi_du;
    return o;
}

AlgebraicVector exponents_of(const AlgebraicVector& y)
{
    return y.unaryExpr([](double v) { return -std::log10(std::max(v, 1e-300)); });
}

Eigen::VectorXd pack(const DiscreteTrajectory& traj, const DecisionLayout& layout)
{
    const int K = layout.K;
    if (static_cast<int>(traj.u.size()) != K || static_cast<int>(traj.x.size()) != K + 1 ||
        traj.y.size() != traj.x.size()) {
        throw DomainError("pack: trajectory does not match the decision layout");
    }
    Vector z(layout.size());
    for (int k = 1; k <= K; ++k) {
        z.segment<10>(layout.state(k)) = traj.x[k];
        z.segment<8>(layout.exponent(k)) = exponents_of(traj.y[k]);
        z.segment<6>(layout.input(k - 1)) = traj.u[k - 1];
    }
    return z;
}

DiscreteTrajectory unpack(const Eigen::VectorXd& z, const DecisionLayout& layout, const OcpConfig& cfg,
                          const AlgebraicVector& y0)
{
    if (z.size() != layout.size()) {
        throw DomainError("unpack: decision vector has the wrong size");
    }
    DiscreteTrajectory t;
    t.x.push_back(cfg.x0);
    t.y.push_back(y0);
    for (int k = 1; k <= layout.K; ++k) {
        t.x.emplace_back(z.segment<10>(layout.state(k)));
        t.y.push_back(powers_of(z.segment<8>(layout.exponent(k))));
        t.u.emplace_back(z.segment<6>(layout.input(k - 1)));
    }
    return t;
}

nlp::NlpProblem transcribe(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                           const TranscriptionOptions& options)
{
    cfg.validate();
    pair.validate();
    auto t = std::make_shared<const Transcription>(cfg, p, pair, options);
    const DecisionLayout& layout = t->layout();

    nlp::NlpProblem prob;
    prob.n = layout.size();
    prob.m = layout.constraint_count();
    prob.objective = [t](const Vector& z, Vector* g) { return t->objective(z, g); };
    prob.constraints = [t](const Vector& z) { return t->constraints(z); };
    prob.jacobian_transpose_product = [t](const Vector& z, const Vector& v) {
        return t->jacobian_transpose_product(z, v);
    };
    prob.jacobian_product = [t](const Vector& z, const Vector& d) { return t->jacobian_product(z, d); };

    prob.lower.resize(prob.n);
    prob.upper.resize(prob.n);
    for (int k = 1; k <= layout.K; ++k) {
        prob.lower.segment<10>(layout.state(k)) = cfg.x_min;
        prob.upper.segment<10>(layout.state(k)) = cfg.x_max;
        prob.lower.segment<8>(layout.exponent(k)) = cfg.alpha_min;
        prob.upper.segment<8>(layout.exponent(k)) = cfg.alpha_max;
        prob.lower.segment<6>(layout.input(k - 1)) = cfg.u_min;
        prob.upper.segment<6>(layout.input(k - 1)) = cfg.u_max;
    }

    nlp::Elimination elim;
    for (int k = 0; k < layout.K; ++k) {
        for (int f = 0; f < kNumFeeds; ++f) {
            elim.free.push_back(layout.input(k, f));
        }
    }
    elim.complete = [t](Vector& z) { return t->complete(z); };
    elim.adjoint_solve = [t](const Vector& z, const Vector& rhs) { return t->adjoint_solve(z, rhs); };
    elim.sensitivity = [t](const Vector& z, const std::vector<Eigen::Index>& rows) { return t->sensitivity(z, rows); };
    prob.objective_hessian = [t](const Vector& z) { return t->objective_hessian(z); };
    prob.elimination = std::move(elim);
    return prob;
}

Eigen::VectorXd initial_guess(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                              const TranscriptionOptions& options)
{
    cfg.validate();
    const DecisionLayout layout(cfg.steps);
    equilibrium::ScalingPair unscaled{pair.s_g, AlgebraicVector::Ones()};
    const auto traj = integrator::integrate(cfg.x0, equilibrium::default_initial_guess(cfg.x0),
                                            integrator::ControlTrajectory::constant(cfg.u0, cfg.horizon, cfg.steps),
                                            p, unscaled, options.integrator);
    Vector z = pack({traj.x, traj.y, traj.u}, layout);
    const Transcription t(cfg, p, pair, options);
    if (!t.complete(z)) {
        throw StepFailure("initial guess could not be made consistent", 0);
    }
    return z;
}

OcpSolution solve_ocp(const OcpConfig& cfg, const ModelParameters& p, const equilibrium::ScalingPair& pair,
                      const nlp::SolverSettings& settings, const TranscriptionOptions& options)
{
    const Transcription t(cfg, p, pair, options);
    const Vector z0 = initial_guess(cfg, p, pair, options);
    const auto problem = transcribe(cfg, p, pair, options);
    auto sol = nlp::minimize(problem, z0, settings);

    OcpSolution out;
    out.z = sol.z;
    out.report = sol.report;
    out.trajectory = unpack(sol.z, t.layout(), cfg, t.y0());
    out.controls.time.resize(cfg.steps + 1);
    for (int k = 0; k <= cfg.steps; ++k) {
        out.controls.time[k] = cfg.horizon * k / cfg.steps;
    }
    out.controls.inputs = out.trajectory.u;
    out.objective = objective_terms(out.trajectory, cfg, p);
    return out;
}

} // namespace scp::ocp
