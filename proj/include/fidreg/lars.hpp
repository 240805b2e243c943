#pragma once

#include "fidreg/types.hpp"

namespace fidreg {

/// One breakpoint of the LASSO solution path. `beta` holds the coefficients
/// at the moment `active` became the active set, in the coordinates of the
/// unit-norm-scaled design handed to lars_path. `max_abs_corr` is the common
/// absolute correlation of the active variables with the residual there.
struct LarsStep {
  std::vector<Index> active;  // sorted column indices into the screened design
  Vector beta;                // length = number of screened columns
  double max_abs_corr = 0.0;
};

struct LarsPath {
  std::vector<LarsStep> steps;  // steps[0] is the empty set at beta = 0
  bool truncated = false;       // a singular active Gram matrix ended the path early
};

/// Least angle regression with the LASSO modification (coefficients crossing
/// zero leave the active set). Columns are rescaled to unit Euclidean norm
/// internally; active sets are unaffected by the caller's column scaling of
/// interest only through that normalization. The path stops once the active
/// set reaches min(max_steps, #columns, n - 2) variables or the residual
/// correlation falls below 1e-12 * |y|.
LarsPath lars_path(const Matrix& x_screened, const Vector& y, Index max_steps);

/// The candidate model class: every distinct active set along the LASSO path,
/// relabeled to original column indices, plus the empty model.
struct CandidateClass {
  std::vector<ModelId> models;    // deduplicated, lexicographically sorted
  std::vector<Index> screen_map;  // screened-space index -> original column
  bool path_truncated = false;
};

/// Runs lars_path on the screened columns of d and collects the candidate
/// class. Supports larger than min(size_cap, n - 2) are dropped.
CandidateClass build_candidates(const Dataset& d, const std::vector<Index>& screened,
                                Index size_cap, Index max_steps);

}  // namespace fidreg
