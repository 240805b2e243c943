#pragma once

#include "fidreg/types.hpp"

namespace fidreg {

/// Ordinary least squares on the columns selected by m, via thin Householder
/// QR (never explicit normal equations). Throws RankDeficientError when the
/// triangular factor has a diagonal entry below 1e-10 times its largest one.
/// The empty model yields empty coefficients, rss = |y|^2 and an empty factor.
ModelFit fit_model(const Dataset& d, const ModelId& m);

/// Fitted mean x_row' beta at a full-length predictor row (off-support
/// entries of x_row are ignored).
double mean_at(const ModelFit& fit, Eigen::Ref<const Vector> x_row);

/// Columns of x selected by m, in support order.
Matrix select_columns(const Matrix& x, const ModelId& m);

}  // namespace fidreg
