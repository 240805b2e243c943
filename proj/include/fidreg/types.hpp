#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace fidreg {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A candidate submodel's design block is numerically rank deficient.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model's residual sum of squares is non-positive or non-finite
/// (saturated fit); the model cannot be scored or sampled from.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every candidate model was dropped; nothing left to normalize over.
class EmptyClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer draws than the documented floor for stable percentile summaries.
class TooFewDrawsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable regression data: n x p design matrix and length-n response.
class Dataset {
 public:
  Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() != y_.size())
      throw std::invalid_argument("Dataset: x has " + std::to_string(x_.rows()) +
                                  " rows but y has length " + std::to_string(y_.size()));
    if (x_.rows() < 3) throw std::invalid_argument("Dataset: need n >= 3 observations");
    if (x_.cols() < 1) throw std::invalid_argument("Dataset: need p >= 1 predictors");
    if (!x_.allFinite() || !y_.allFinite())
      throw std::invalid_argument("Dataset: non-finite entries");
  }

  Index n() const { return x_.rows(); }
  Index p() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }

 private:
  Matrix x_;
  Vector y_;
};

/// A candidate model: a strictly increasing set of predictor column indices.
/// Dataset-dependent constraints (indices < p, size <= n - 2) are checked at
/// fit time, not here.
class ModelId {
 public:
  ModelId() = default;  // the empty model

  explicit ModelId(std::vector<Index> support) : support_(std::move(support)) {
    std::sort(support_.begin(), support_.end());
    if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
      throw std::invalid_argument("ModelId: duplicate column index");
    if (!support_.empty() && support_.front() < 0)
      throw std::invalid_argument("ModelId: negative column index");
  }

  ModelId(std::initializer_list<Index> support) : ModelId(std::vector<Index>(support)) {}

  Index size() const { return static_cast<Index>(support_.size()); }
  bool empty() const { return support_.empty(); }
  const std::vector<Index>& support() const { return support_; }

  bool contains(Index j) const {
    return std::binary_search(support_.begin(), support_.end(), j);
  }

  friend bool operator==(const ModelId& a, const ModelId& b) {
    return a.support_ == b.support_;
  }
  /// Lexicographic order on supports; the empty model sorts first.
  friend bool operator<(const ModelId& a, const ModelId& b) {
    return a.support_ < b.support_;
  }

 private:
  std::vector<Index> support_;
};

/// Least-squares artifacts for one model: ML coefficients, residual sum of
/// squares, and the upper-triangular factor R with R^T R = X_M^T X_M.
struct ModelFit {
  ModelId model;
  Vector beta_ml;   // length |M|
  double rss = 0.0;
  Matrix r_factor;  // |M| x |M|, upper triangular
};

}  // namespace fidreg
