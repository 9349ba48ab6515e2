#include "crossflow/sim/analysis.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crossflow::sim {

std::optional<Overflow> shelter_overflow(const SimulationTrace& trace, double shelter_capacity) {
    if (std::isinf(shelter_capacity) && shelter_capacity > 0) return std::nullopt;
    std::optional<Overflow> result;
    for (const auto& st : trace.states) {
        const double excess = st[Stage::Sheltered] - shelter_capacity;
        if (!(st[Stage::Sheltered] > shelter_capacity)) continue;
        if (!result) {
            result = Overflow{st.day, excess, st.day};
        } else if (excess > result->peak_exceedance) {
            result->peak_exceedance = excess;
            result->peak_day = st.day;
        }
    }
    return result;
}

std::vector<Bottleneck> bottlenecks(const SimulationTrace& trace, double tolerance) {
    if (trace.states.size() < 2) {
        throw ValidationError("trace", "bottleneck analysis needs at least two days of trace");
    }
    const std::size_t last = trace.states.size() - 1;
    const std::size_t first = last / 2;
    const double span = static_cast<double>(last - first);

    std::vector<Bottleneck> out;
    for (Stage s : kAllStages) {
        if (is_terminal(s)) continue;
        const double growth = (trace.states[last][s] - trace.states[first][s]) / span;
        if (growth > tolerance) out.push_back({s, growth});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Bottleneck& a, const Bottleneck& b) { return a.growth_per_day > b.growth_per_day; });
    return out;
}

std::vector<TriggerHit> evaluate_triggers(const SimulationTrace& trace,
                                          const std::vector<ContingencyRule>& rules) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        const std::string field = "rules[" + std::to_string(i) + "]";
        if (!seen.insert(r.id).second) throw ValidationError(field + ".id", "duplicate rule id '" + r.id + "'");
        if (!(r.threshold >= 0.0)) throw ValidationError(field + ".threshold", "threshold must be >= 0");
    }

    std::vector<TriggerHit> hits;
    for (const auto& r : rules) {
        for (const auto& st : trace.states) {
            if (st[r.metric] > r.threshold) {
                hits.push_back({r.id, st.day});
                break;
            }
        }
    }
    return hits;
}

}  // namespace crossflow::sim
