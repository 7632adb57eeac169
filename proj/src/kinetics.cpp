#include "scp/kinetics.hpp"

#include "scp/errors.hpp"

namespace scp::kinetics
{

namespace
{

void require_non_negative(double value, const char* name)
{
    if (!(value >= 0.0)) {
        throw DomainError(std::string("kinetics: ") + name + " must be >= 0");
    }
}

// Rates r and their partial derivatives with respect to (c_S, c_O, c_NH4, c_X).
struct RateTerms
{
    double r1, r2;
    double dr1_dS, dr1_dO, dr1_dNH4, dr1_dX;
    double dr2_dS, dr2_dO, dr2_dNH4, dr2_dX;
};

RateTerms rate_terms(double cS, double cO, double cNH4, double cX, const ModelParameters& p)
{
    const double inhibited_KS = p.K_S * (1.0 + cNH4 / p.K_Nox);
    const double denS = inhibited_KS + cS;
    const double denO = p.K_O + cO;
    const double denN = p.K_N + cNH4;

    const double muS = cS / denS;
    const double muO = cO / denO;
    const double muN = cNH4 / denN;

    const double dmuS_dS = inhibited_KS / (denS * denS);
    const double dmuS_dNH4 = -cS * (p.K_S / p.K_Nox) / (denS * denS);
    const double dmuO_dO = p.K_O / (denO * denO);
    const double dmuN_dNH4 = p.K_N / (denN * denN);

    const double mu2 = p.mu_max * muS * muO * muN;
    const double dmu2_dS = p.mu_max * dmuS_dS * muO * muN;
    const double dmu2_dO = p.mu_max * muS * dmuO_dO * muN;
    const double dmu2_dNH4 = p.mu_max * muO * (dmuS_dNH4 * muN + muS * dmuN_dNH4);

    const double slope = catabolic_slope(p);
    const double mu1 = slope * mu2 + p.m / (2.0 * p.delta);

    RateTerms t{};
    t.r1 = mu1 * cX;
    t.r2 = mu2 * cX;
    t.dr1_dS = slope * dmu2_dS * cX;
    t.dr1_dO = slope * dmu2_dO * cX;
    t.dr1_dNH4 = slope * dmu2_dNH4 * cX;
    t.dr1_dX = mu1;
    t.dr2_dS = dmu2_dS * cX;
    t.dr2_dO = dmu2_dO * cX;
    t.dr2_dNH4 = dmu2_dNH4 * cX;
    t.dr2_dX = mu2;
    return t;
}

} // namespace

const StoichiometricMatrix& stoichiometric_matrix()
{
    static const StoichiometricMatrix S = [] {
        StoichiometricMatrix m = StoichiometricMatrix::Zero();
        m(0, idx(State::S)) = -1.0;
        m(0, idx(State::O)) = -1.0;
        m(0, idx(State::C)) = 1.0;
        m(1, idx(State::X)) = 1.0;
        m(1, idx(State::S)) = -1.0;
        m(1, idx(State::O)) = -1.0;
        m(1, idx(State::N)) = -0.2;
        return m;
    }();
    return S;
}

double catabolic_slope(const ModelParameters& p)
{
    return p.alpha / (2.0 * p.delta) + 8.0 / 20.0;
}

SpecificRates specific_growth_rates(double c_S, double c_O, double c_NH4, const ModelParameters& p)
{
    require_non_negative(c_S, "c_S");
    require_non_negative(c_O, "c_O");
    require_non_negative(c_NH4, "c_NH4");
    SpecificRates s;
    s.muS = c_S / (p.K_S * (1.0 + c_NH4 / p.K_Nox) + c_S);
    s.muO = c_O / (p.K_O + c_O);
    s.muN = c_NH4 / (p.K_N + c_NH4);
    return s;
}

GrowthRates growth_rates(double c_S, double c_O, double c_NH4, double c_X, const ModelParameters& p)
{
    require_non_negative(c_X, "c_X");
    const SpecificRates s = specific_growth_rates(c_S, c_O, c_NH4, p);
    GrowthRates g;
    g.muS = s.muS;
    g.muO = s.muO;
    g.muN = s.muN;
    g.mu2 = p.mu_max * s.muS * s.muO * s.muN;
    g.mu1 = catabolic_slope(p) * g.mu2 + p.m / (2.0 * p.delta);
    return g;
}

ProductionVector production_rates(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p)
{
    const RateTerms t = rate_terms(x[idx(State::S)], x[idx(State::O)], y[idx(Species::NH4)], x[idx(State::X)], p);
    const Eigen::Vector2d r(t.r1, t.r2);
    return stoichiometric_matrix().transpose() * r;
}

ProductionJacobian production_jacobian(const StateVector& x, const AlgebraicVector& y, const ModelParameters& p)
{
    const RateTerms t = rate_terms(x[idx(State::S)], x[idx(State::O)], y[idx(Species::NH4)], x[idx(State::X)], p);

    // dr/dx (2x10) and dr/dy (2x8), then chain through S^T.
    Eigen::Matrix<double, kNumReactions, kNumStates> dr_dx = Eigen::Matrix<double, kNumReactions, kNumStates>::Zero();
    dr_dx(0, idx(State::X)) = t.dr1_dX;
    dr_dx(0, idx(State::S)) = t.dr1_dS;
    dr_dx(0, idx(State::O)) = t.dr1_dO;
    dr_dx(1, idx(State::X)) = t.dr2_dX;
    dr_dx(1, idx(State::S)) = t.dr2_dS;
    dr_dx(1, idx(State::O)) = t.dr2_dO;

    Eigen::Matrix<double, kNumReactions, kNumSpecies> dr_dy = Eigen::Matrix<double, kNumReactions, kNumSpecies>::Zero();
    dr_dy(0, idx(Species::NH4)) = t.dr1_dNH4;
    dr_dy(1, idx(Species::NH4)) = t.dr2_dNH4;

    const auto& S = stoichiometric_matrix();
    return {S.transpose() * dr_dx, S.transpose() * dr_dy};
}

} // namespace scp::kinetics
