#include "fidreg/leastsq.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace fidreg {

Matrix select_columns(const Matrix& x, const ModelId& m) {
  Matrix xm(x.rows(), m.size());
  Index k = 0;
  for (Index j : m.support()) xm.col(k++) = x.col(j);
  return xm;
}

ModelFit fit_model(const Dataset& d, const ModelId& m) {
  const Index n = d.n();
  if (!m.empty()) {
    if (m.support().back() >= d.p())
      throw std::invalid_argument("fit_model: column index " +
                                  std::to_string(m.support().back()) +
                                  " out of range for p = " + std::to_string(d.p()));
    if (m.size() > n - 2)
      throw std::invalid_argument("fit_model: |M| = " + std::to_string(m.size()) +
                                  " exceeds n - 2 = " + std::to_string(n - 2));
  }

  ModelFit fit;
  fit.model = m;
  if (m.empty()) {
    fit.beta_ml = Vector(0);
    fit.r_factor = Matrix(0, 0);
    fit.rss = d.y().squaredNorm();
    return fit;
  }

  const Index k = m.size();
  Matrix xm = select_columns(d.x(), m);
  Eigen::HouseholderQR<Matrix> qr(xm);
  Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  const double dmax = r.diagonal().cwiseAbs().maxCoeff();
  // Relative tolerance fixed at 1e-10: a smaller pivot means the submodel is
  // numerically collinear and must be dropped by the caller.
  if (dmax == 0.0 || r.diagonal().cwiseAbs().minCoeff() < 1e-10 * dmax)
    throw RankDeficientError("fit_model: rank-deficient design for submodel of size " +
                             std::to_string(k));

  fit.beta_ml = qr.solve(d.y());
  fit.rss = (d.y() - xm * fit.beta_ml).squaredNorm();
  fit.r_factor = std::move(r);
  return fit;
}

double mean_at(const ModelFit& fit, Eigen::Ref<const Vector> x_row) {
  double acc = 0.0;
  Index k = 0;
  for (Index j : fit.model.support()) acc += x_row[j] * fit.beta_ml[k++];
  return acc;
}

}  // namespace fidreg
