#pragma once

// Discrete norms over data sites: normalized counting-measure L_tau on the
// domain, L_2 on the boundary, and the pair-sum H^{1/2} seminorm and norm.

#include <Eigen/Dense>

#include <limits>

namespace cpinn {

/// Values attached to an ordered set of sites (rows of `sites`).
struct SampledField {
  Eigen::MatrixXd sites;  // m x d
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  int dim() const { return static_cast<int>(sites.cols()); }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// [ (1/m) sum |v_j|^tau ]^{1/tau}; max |v_j| for tau = infinity.
double discrete_lp(const Eigen::Ref<const Eigen::VectorXd>& values, double tau);
double discrete_lp(const SampledField& field, double tau);

/// [ (1/m) sum |g_j|^2 ]^{1/2}
double discrete_l2_boundary(const SampledField& field);

/// [ (1/m^2) sum_{i != j} |g_i - g_j|^2 / |z_i - z_j|^d ]^{1/2}, summed over
/// i < j in ascending (i, j) order and doubled. Throws on duplicate sites.
double discrete_h12_semi(const SampledField& field, int d);
double discrete_h12_semi(const Eigen::MatrixXd& sites, const Eigen::Ref<const Eigen::VectorXd>& values, int d);

double discrete_h12_norm(const SampledField& field, int d);

/// max_i (1/m) sum_{j != i} |z_i - z_j|^{-d}: the row bound of the pair kernel.
double kernel_row_bound(const Eigen::MatrixXd& sites, int d);

}  // namespace cpinn
