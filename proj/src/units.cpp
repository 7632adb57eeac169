#include "scp/units.hpp"

#include "scp/errors.hpp"

namespace scp
{

MolarMassTable MolarMassTable::standard()
{
    MolarMassTable t;
    auto& g = t.grams_per_mol;
    g[idx(State::X)] = kBiomassMolarMass;
    g[idx(State::S)] = 16.043;
    g[idx(State::O)] = 31.998;
    g[idx(State::N)] = 17.03;
    g[idx(State::C)] = 44.009;
    g[idx(State::NO)] = 62.004;
    g[idx(State::Na)] = 22.990;
    g[idx(State::Sg)] = g[idx(State::S)];
    g[idx(State::Og)] = g[idx(State::O)];
    g[idx(State::Cg)] = g[idx(State::C)];
    return t;
}

StateVector to_molar(const StateVector& conc_g_per_l, const MolarMassTable& table)
{
    for (int i = 0; i < kNumStates; ++i) {
        if (!(conc_g_per_l[i] >= 0.0)) {
            throw DomainError("to_molar: concentration of " + std::string(kStateNames[i]) + " must be >= 0");
        }
    }
    return conc_g_per_l.cwiseQuotient(table.grams_per_mol);
}

StateVector from_molar(const StateVector& state, const MolarMassTable& table)
{
    return state.cwiseProduct(table.grams_per_mol);
}

} // namespace scp
