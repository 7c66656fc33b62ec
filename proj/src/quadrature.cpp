#include "cpinn/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace cpinn {

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 128) throw std::invalid_argument("unsupported quadrature order");
  // Jacobi matrix of the Legendre recurrence on [-1, 1]
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = b;
    jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(i, 0) = 0.5 * (es.eigenvalues()(i) + 1.0);
    const double v = es.eigenvectors()(0, i);
    rule.weights(i) = v * v;  // 2 v^2 on [-1,1], halved for [0,1]
  }
  return rule;
}

QuadratureRule simplex_rule(int dim, int n) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("simplex rule: dimension must be 1, 2 or 3");
  const QuadratureRule gl = gauss_legendre(n);
  if (dim == 1) return gl;

  const QuadratureRule lower = simplex_rule(dim - 1, n);
  QuadratureRule rule;
  const Eigen::Index m = gl.size() * lower.size();
  rule.points.resize(m, dim);
  rule.weights.resize(m);
  Eigen::Index q = 0;
  // xi_0 = t, (xi_1..) = (1 - t) * eta with eta on the lower simplex
  for (Eigen::Index i = 0; i < gl.size(); ++i) {
    const double t = gl.points(i, 0);
    const double scale = 1.0 - t;
    const double jac = std::pow(scale, dim - 1);
    for (Eigen::Index j = 0; j < lower.size(); ++j, ++q) {
      rule.points(q, 0) = t;
      rule.points.row(q).tail(dim - 1) = scale * lower.points.row(j);
      rule.weights(q) = gl.weights(i) * lower.weights(j) * jac;
    }
  }
  return rule;
}

}  // namespace cpinn
