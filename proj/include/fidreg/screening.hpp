#pragma once

#include "fidreg/types.hpp"

namespace fidreg {

/// Absolute Pearson correlation of each (mean-centered) column with the
/// centered response. Zero-variance columns score exactly 0.
Vector marginal_scores(const Dataset& d);

/// Sure independence screening: the `keep` columns with the largest marginal
/// scores, in decreasing-score order, ties broken by lower column index.
std::vector<Index> sis_screen(const Dataset& d, Index keep);

/// min(p, max(1, floor(n / ln n))) — the usual O(n) screening size.
Index default_keep(Index n, Index p);

}  // namespace fidreg
