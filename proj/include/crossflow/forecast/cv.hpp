#pragma once

#include <cstddef>
#include <vector>

namespace crossflow::forecast {

struct CvConfig {
    int folds = 10;
};

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// Blocked time-series split. Rows are cut into `k` contiguous blocks in time
// order (the first n % k blocks one row longer); within each block the first
// floor(0.8 * size) rows train and the remainder validate. Requires n >= 2k.
std::vector<Fold> blocked_cv_split(std::size_t n, int k);

}  // namespace crossflow::forecast
