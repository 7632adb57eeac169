#pragma once

#include "scp/components.hpp"

namespace scp
{

/// Molar masses (g/mol) per state component. Gas states share their dissolved counterpart's mass.
struct MolarMassTable
{
    StateVector grams_per_mol;

    static MolarMassTable standard();

    double operator[](State s) const { return grams_per_mol[idx(s)]; }
};

/// Biomass CH1.8O0.5N0.2 from standard atomic masses.
inline constexpr double kBiomassMolarMass = 12.011 + 1.8 * 1.008 + 0.5 * 15.999 + 0.2 * 14.007;

/// g/L to mol/L. Throws DomainError on negative entries.
StateVector to_molar(const StateVector& conc_g_per_l, const MolarMassTable& table = MolarMassTable::standard());

/// mol/L to g/L.
StateVector from_molar(const StateVector& state, const MolarMassTable& table = MolarMassTable::standard());

} // namespace scp
