#include "scp/components.hpp"

namespace scp
{

namespace
{

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name)
{
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == name) {
            return static_cast<Enum>(i);
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<State> state_from_name(std::string_view name) { return lookup<State>(kStateNames, name); }

std::optional<Species> species_from_name(std::string_view name) { return lookup<Species>(kSpeciesNames, name); }

std::optional<Feed> feed_from_name(std::string_view name) { return lookup<Feed>(kFeedNames, name); }

} // namespace scp
