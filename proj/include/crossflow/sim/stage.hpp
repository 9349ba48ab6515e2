#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace crossflow::sim {

// Stages of the border-crossing pipeline, left to right. Relocated and
// SelfSettled are terminal pools.
enum class Stage : std::size_t {
    WantToLeave = 0,
    AtBorder,
    Processing,
    Sheltered,
    Relocated,
    SelfSettled,
};

inline constexpr std::size_t kStageCount = 6;

inline constexpr std::array<Stage, kStageCount> kAllStages = {
    Stage::WantToLeave, Stage::AtBorder,  Stage::Processing,
    Stage::Sheltered,   Stage::Relocated, Stage::SelfSettled,
};

constexpr std::size_t index(Stage s) { return static_cast<std::size_t>(s); }

constexpr bool is_terminal(Stage s) { return s == Stage::Relocated || s == Stage::SelfSettled; }

// CamelCase display name ("AtBorder").
std::string_view stage_name(Stage s);

// snake_case key used in scenario files ("at_border").
std::string_view stage_key(Stage s);

// Accepts either form.
std::optional<Stage> parse_stage(std::string_view text);

}  // namespace crossflow::sim
