#include "crossflow/forecast/target.hpp"

#include "crossflow/common/error.hpp"

#include <limits>

namespace crossflow::forecast {

void validate(const TargetSpec& spec) {
    if (spec.window < 1) throw ValidationError("target.window", "window must be >= 1");
    if (spec.horizon < 1) throw ValidationError("target.horizon", "horizon must be >= 1");
}

DailySeries build_target(const DailySeries& arrivals, const TargetSpec& spec) {
    validate(spec);
    const auto w = static_cast<std::size_t>(spec.window);
    if (arrivals.size() < w) {
        throw ValidationError("arrivals", "need at least " + std::to_string(w) + " days of arrivals, got " +
                                              std::to_string(arrivals.size()));
    }
    DailySeries out;
    out.start = add_days(arrivals.start, spec.window - 1);
    out.name = arrivals.name + "_ma" + std::to_string(spec.window);
    out.units = arrivals.units;
    out.values.reserve(arrivals.size() - w + 1);
    for (std::size_t end = w; end <= arrivals.size(); ++end) {
        double sum = 0.0;
        for (std::size_t i = end - w; i < end; ++i) sum += arrivals.values[i];
        // NaN propagates through the sum, marking the day missing.
        out.values.push_back(sum / static_cast<double>(w));
    }
    return out;
}

}  // namespace crossflow::forecast
