#include "crossflow/sim/stage.hpp"

namespace crossflow::sim {

namespace {

constexpr std::array<std::string_view, kStageCount> kNames = {
    "WantToLeave", "AtBorder", "Processing", "Sheltered", "Relocated", "SelfSettled",
};

constexpr std::array<std::string_view, kStageCount> kKeys = {
    "want_to_leave", "at_border", "processing", "sheltered", "relocated", "self_settled",
};

}  // namespace

std::string_view stage_name(Stage s) { return kNames[index(s)]; }

std::string_view stage_key(Stage s) { return kKeys[index(s)]; }

std::optional<Stage> parse_stage(std::string_view text) {
    for (Stage s : kAllStages) {
        if (text == kNames[index(s)] || text == kKeys[index(s)]) return s;
    }
    return std::nullopt;
}

}  // namespace crossflow::sim
