#include "fidreg/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fidreg {

Vector marginal_scores(const Dataset& d) {
  const Index p = d.p();
  Vector yc = d.y().array() - d.y().mean();
  const double sy = yc.norm();
  Vector scores = Vector::Zero(p);
  if (sy == 0.0) return scores;
  for (Index j = 0; j < p; ++j) {
    Vector xc = d.x().col(j).array() - d.x().col(j).mean();
    const double sx = xc.norm();
    if (sx == 0.0) continue;
    scores[j] = std::min(1.0, std::abs(xc.dot(yc)) / (sx * sy));
  }
  return scores;
}

std::vector<Index> sis_screen(const Dataset& d, Index keep) {
  if (keep < 1 || keep > d.p())
    throw std::invalid_argument("sis_screen: keep must be in [1, p]");
  Vector scores = marginal_scores(d);
  std::vector<Index> order(d.p());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(keep);
  return order;
}

Index default_keep(Index n, Index p) {
  auto k = static_cast<Index>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
  return std::min(p, std::max(Index{1}, k));
}

}  // namespace fidreg
