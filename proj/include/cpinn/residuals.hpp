#pragma once

// Least-squares view of the quadratic-structured losses: a residual vector r
// whose squared norm is the loss, and its exact parameter Jacobian.
//
// Row order: domain residuals (site order), then H^{1/2} pair residuals
// (i < j, ascending), then boundary L_2 residuals. The original/weighted loss
// has no pair block.
//
// For ConsistentTau with tau != 2 the domain block is reweighted (IRLS):
// r_i = sqrt(c) w_i (lap v + f)(x_i), w_i = max(|res_i|, 1e-8)^{(tau-2)/2},
// c = S^{2/tau - 1} / m~, S = (1/m~) sum |res_i|^tau, with the weights frozen
// at the current parameters. Then |r|^2 equals the loss and J^T r equals half
// its gradient.

#include "cpinn/loss.hpp"
#include "cpinn/network.hpp"

#include <Eigen/Dense>

namespace cpinn {

inline constexpr double kIrlsFloor = 1e-8;

/// Per-block scalings of the residual vector at the current parameters.
struct ResidualWeights {
  Eigen::VectorXd domain;  // multiplies lap v + f at each interior site
  double boundary = 0.0;   // multiplies v - g at each boundary site
  bool pairs = false;      // H^{1/2} pair block present
};

ResidualWeights residual_weights(const SiteResiduals& res, const CollocationData& data, const LossVariant& variant);

Eigen::VectorXd residual_vector(const Network& net, const CollocationData& data, const LossVariant& variant);

/// Exact d r / d params, rows in residual order.
Eigen::MatrixXd param_jacobian(const Network& net, const CollocationData& data, const LossVariant& variant);

/// J^T J and J^T r assembled block-wise without forming the pair rows:
/// the pair block contributes J_b^T K J_b with K the weighted graph Laplacian
/// of the boundary sites, K_ij = -2 / (m-^2 |z_i - z_j|^d).
struct GaussNewtonSystem {
  Eigen::MatrixXd gram;
  Eigen::VectorXd half_gradient;  // J^T r
  double loss = 0.0;              // the variant's loss at the current parameters
};

GaussNewtonSystem gauss_newton_system(const Network& net, const CollocationData& data, const LossVariant& variant);

/// Graph Laplacian of the pair weights 2 / (m-^2 |z_i - z_j|^d).
Eigen::MatrixXd pair_kernel(const Eigen::MatrixXd& sites, int d);

}  // namespace cpinn
