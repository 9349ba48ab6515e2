#include "crossflow/forecast/cv.hpp"

#include "crossflow/common/error.hpp"

#include <string>

namespace crossflow::forecast {

std::vector<Fold> blocked_cv_split(std::size_t n, int k) {
    if (k < 2) throw ValidationError("cv.folds", "need at least 2 folds");
    const auto folds = static_cast<std::size_t>(k);
    if (n < 2 * folds) {
        throw ValidationError("cv.folds", "blocked CV needs n >= 2k rows (n=" + std::to_string(n) +
                                              ", k=" + std::to_string(k) + ")");
    }
    std::vector<Fold> out(folds);
    const std::size_t base = n / folds;
    const std::size_t extra = n % folds;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < folds; ++b) {
        const std::size_t size = base + (b < extra ? 1 : 0);
        const std::size_t n_train = (4 * size) / 5;  // floor(0.8 * size)
        for (std::size_t i = 0; i < size; ++i) {
            (i < n_train ? out[b].train : out[b].validation).push_back(begin + i);
        }
        begin += size;
    }
    return out;
}

}  // namespace crossflow::forecast
