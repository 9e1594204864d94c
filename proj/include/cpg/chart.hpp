#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cpg/linalg.hpp"

namespace cpg {

// Jet-valued tensor fields at one chart point. J and omega are empty for
// projective (real) structures; v is empty when no vector field is attached.
struct Fields {
  JMat g;      // g_ab
  JMat J;      // J^a_b
  JMat omega;  // omega_ab = omega(d_a, d_b) = g(J d_a, d_b)
  JMat A;      // A^a_b
  JVec v;      // v^a
};

struct ConstantEigen {
  double value = 0.0;
  int multiplicity = 1;  // complex multiplicity (Kahler) or real (projective)
};

struct Chart {
  std::string name;
  int dim = 0;
  bool kahler = true;
  std::vector<std::string> coords;
  std::vector<double> lo, hi;
  int ell = 0;  // number of non-constant eigenvalues (complex count)
  std::vector<ConstantEigen> constants;
  std::function<Fields(const std::vector<double>& x, int order)> eval;
  std::vector<std::string> notes;
};

JVec seeds(const std::vector<double>& x, int order);

struct GridSpec {
  int per_axis = 5;
  int random = 64;
  std::uint64_t seed = 1;
};

std::vector<std::vector<double>> sample_points(const Chart& chart, const GridSpec& grid);

// One sample with lazily computed derived quantities.
class Point {
 public:
  Point(const Chart& chart, std::vector<double> x, int order);

  const Chart& chart() const { return *chart_; }
  const std::vector<double>& x() const { return x_; }
  int dim() const { return chart_->dim; }
  int order() const { return order_; }
  const Fields& f() const { return f_; }

  template <class T, class Make>
  const T& memo(const std::string& key, Make make) {
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, std::any(T(make()))).first;
    return std::any_cast<const T&>(it->second);
  }

 private:
  const Chart* chart_;
  std::vector<double> x_;
  int order_;
  Fields f_;
  std::map<std::string, std::any> cache_;
};

}  // namespace cpg
