#include "cpg/chart.hpp"

#include <random>
#include <stdexcept>

namespace cpg {

JVec seeds(const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  JVec s;
  s.reserve(n);
  for (int i = 0; i < n; ++i) s.push_back(Jet::seed(i, x[i], n, order));
  return s;
}

std::vector<std::vector<double>> sample_points(const Chart& chart, const GridSpec& grid) {
  const int n = chart.dim;
  std::vector<std::vector<double>> pts;
  if (grid.per_axis > 0) {
    std::vector<int> idx(n, 0);
    const int m = grid.per_axis;
    auto coord = [&](int axis, int k) {
      if (m == 1) return 0.5 * (chart.lo[axis] + chart.hi[axis]);
      return chart.lo[axis] + (chart.hi[axis] - chart.lo[axis]) * k / (m - 1.0);
    };
    while (true) {
      std::vector<double> p(n);
      for (int a = 0; a < n; ++a) p[a] = coord(a, idx[a]);
      pts.push_back(std::move(p));
      int a = 0;
      while (a < n && ++idx[a] == m) idx[a++] = 0;
      if (a == n) break;
    }
  }
  std::mt19937_64 rng(grid.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < grid.random; ++k) {
    std::vector<double> p(n);
    for (int a = 0; a < n; ++a) p[a] = chart.lo[a] + (chart.hi[a] - chart.lo[a]) * u(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

Point::Point(const Chart& chart, std::vector<double> x, int order)
    : chart_(&chart), x_(std::move(x)), order_(order) {
  if (static_cast<int>(x_.size()) != chart.dim) throw std::invalid_argument("point dimension");
  f_ = chart.eval(x_, order);
}

}  // namespace cpg
