#pragma once

#include <Eigen/Dense>

namespace cpinn {

/// Quadrature rule: points as rows, weights aligned with the rows.
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

/// Gauss-Legendre rule with n points on [0, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(int n);

/// Collapsed (Duffy) Gauss-Legendre rule on the reference simplex
/// {xi >= 0, sum(xi) <= 1} of dimension dim in {1, 2, 3}, with n points per
/// direction. Weights sum to 1/dim!. Exact for polynomials of degree <= 2n - dim.
QuadratureRule simplex_rule(int dim, int n);

}  // namespace cpinn
