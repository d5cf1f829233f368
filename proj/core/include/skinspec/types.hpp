#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace skinspec {

enum class Group : std::uint8_t { healthy = 0, pancreatic = 1, sepsis = 2 };
inline constexpr std::size_t kGroupCount = 3;
inline constexpr std::array<Group, kGroupCount> kAllGroups = {
    Group::healthy, Group::pancreatic, Group::sepsis};

enum class Site : std::uint8_t { hand = 0, thigh = 1 };

std::string_view to_string(Group g);
std::string_view to_string(Site s);

// Throw ValidationError on anything outside the closed label sets.
Group parse_group(std::string_view text);
Site parse_site(std::string_view text);

constexpr std::size_t index_of(Group g) { return static_cast<std::size_t>(g); }

// Per-group quantities indexed by index_of(Group).
template <typename T>
using PerGroup = std::array<T, kGroupCount>;

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS][Z]" (space separator also
// accepted). Returns nullopt for blank input; throws on malformed text.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

}  // namespace skinspec
