#pragma once

#include "cpinn/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

namespace cpinn::test {

/// Deterministic stream of uniforms for test data.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return rng_.uniform(n_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Eigen::VectorXd point(int d) {
    Eigen::VectorXd p(d);
    for (int i = 0; i < d; ++i) p(i) = uniform();
    return p;
  }
  Eigen::MatrixXd points(Eigen::Index m, int d) {
    Eigen::MatrixXd X(m, d);
    for (Eigen::Index i = 0; i < m; ++i) X.row(i) = point(d).transpose();
    return X;
  }
  Eigen::VectorXd vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  /// Random point on the boundary of [0,1]^d.
  Eigen::VectorXd boundary_point(int d) {
    Eigen::VectorXd p = point(d);
    const int face = static_cast<int>(uniform() * 2 * d) % (2 * d);
    p(face / 2) = face % 2;
    return p;
  }

 private:
  CounterRng rng_;
  std::uint64_t n_ = 0;
};

// Random element of P_r (total degree <= r-1) in d variables.
struct RandomPoly {
  int d;
  std::vector<std::vector<int>> exps;
  std::vector<double> coef;

  RandomPoly(int r, int d_, Draws& draws) : d(d_) {
    std::vector<int> e(d, 0);
    enumerate(e, 0, r - 1, draws);
  }
  void enumerate(std::vector<int>& e, int axis, int left, Draws& draws) {
    if (axis == d) {
      exps.push_back(e);
      coef.push_back(draws.uniform(-1.0, 1.0));
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[axis] = p;
      enumerate(e, axis + 1, left - p, draws);
    }
    e[axis] = 0;
  }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    double s = 0.0;
    for (std::size_t t = 0; t < exps.size(); ++t) {
      double m = coef[t];
      for (int a = 0; a < d; ++a) m *= std::pow(x(a), exps[t][a]);
      s += m;
    }
    return s;
  }
};

}  // namespace cpinn::test
