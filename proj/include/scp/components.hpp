#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string_view>

namespace scp
{

inline constexpr int kNumStates = 10;
inline constexpr int kNumSpecies = 8;
inline constexpr int kNumFeeds = 6;
inline constexpr int kNumReactions = 2;
inline constexpr int kNumTransfer = 3;

/// Differential state components, in storage order.
enum class State : int { X = 0, S, O, N, C, NO, Na, Sg, Og, Cg };

/// Equilibrium species (algebraic variables), in storage order.
enum class Species : int { H3O = 0, OH, NH3, NH4, CO2, H2CO3, HCO3, CO3 };

/// Inlet streams, in storage order.
enum class Feed : int { W = 0, N, NO, Na, S, O };

/// Components exchanged between the gas and the liquid phase.
enum class Transfer : int { S = 0, O, C };

constexpr int idx(State s) { return static_cast<int>(s); }
constexpr int idx(Species s) { return static_cast<int>(s); }
constexpr int idx(Feed f) { return static_cast<int>(f); }
constexpr int idx(Transfer t) { return static_cast<int>(t); }

using StateVector = Eigen::Matrix<double, kNumStates, 1>;
using AlgebraicVector = Eigen::Matrix<double, kNumSpecies, 1>;
using InputVector = Eigen::Matrix<double, kNumFeeds, 1>;
using TransferVector = Eigen::Matrix<double, kNumTransfer, 1>;

inline constexpr std::array<std::string_view, kNumStates> kStateNames = {
    "X", "S", "O", "N", "C", "NO", "Na", "S_g", "O_g", "C_g"};
inline constexpr std::array<std::string_view, kNumSpecies> kSpeciesNames = {
    "H3O+", "OH-", "NH3", "NH4+", "CO2", "H2CO3", "HCO3-", "CO3--"};
inline constexpr std::array<std::string_view, kNumFeeds> kFeedNames = {
    "W", "N", "NO", "Na", "S", "O"};

/// Dissolved-only state components {X, N, NO, Na}.
inline constexpr std::array<State, 4> kLiquidOnlyStates = {State::X, State::N, State::NO, State::Na};
/// Components present both dissolved and as gas {S, O, C}.
inline constexpr std::array<State, 3> kGasExchangeStates = {State::S, State::O, State::C};
/// Gas-phase counterparts of kGasExchangeStates, same order.
inline constexpr std::array<State, 3> kGasPhaseStates = {State::Sg, State::Og, State::Cg};
inline constexpr std::array<Feed, 4> kLiquidFeeds = {Feed::W, Feed::N, Feed::NO, Feed::Na};
inline constexpr std::array<Feed, 2> kGasFeeds = {Feed::S, Feed::O};

constexpr bool is_gas_phase(State s)
{
    return s == State::Sg || s == State::Og || s == State::Cg;
}

constexpr bool is_gas_feed(Feed f)
{
    return f == Feed::S || f == Feed::O;
}

std::optional<State> state_from_name(std::string_view name);
std::optional<Species> species_from_name(std::string_view name);
std::optional<Feed> feed_from_name(std::string_view name);

} // namespace scp
