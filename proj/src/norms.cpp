#include "cpinn/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace cpinn {

namespace {

double distance_power(const Eigen::MatrixXd& sites, Eigen::Index i, Eigen::Index j, int d) {
  const double dist2 = (sites.row(i) - sites.row(j)).squaredNorm();
  if (dist2 == 0.0) throw std::invalid_argument("duplicate sites in pair sum");
  return d == 2 ? dist2 : std::pow(dist2, 0.5 * d);
}

}  // namespace

double discrete_lp(const Eigen::Ref<const Eigen::VectorXd>& values, double tau) {
  if (values.size() == 0) throw std::invalid_argument("discrete norm of an empty field");
  if (std::isinf(tau) && tau > 0) return values.cwiseAbs().maxCoeff();
  if (!(tau >= 1.0)) throw std::invalid_argument("discrete_lp requires tau >= 1");
  const double m = static_cast<double>(values.size());
  if (tau == 2.0) return std::sqrt(values.squaredNorm() / m);
  if (tau == 1.0) return values.cwiseAbs().sum() / m;
  // scale by the max to avoid overflow/underflow in |v|^tau
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  const double s = (values.cwiseAbs() / peak).array().pow(tau).sum() / m;
  return peak * std::pow(s, 1.0 / tau);
}

double discrete_lp(const SampledField& field, double tau) { return discrete_lp(field.values, tau); }

double discrete_l2_boundary(const SampledField& field) { return discrete_lp(field.values, 2.0); }

double discrete_h12_semi(const Eigen::MatrixXd& sites, const Eigen::Ref<const Eigen::VectorXd>& values, int d) {
  const Eigen::Index m = values.size();
  if (m < 2) throw std::invalid_argument("discrete H^1/2 seminorm needs at least two sites");
  if (sites.rows() != m) throw std::invalid_argument("site/value count mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double diff = values(i) - values(j);
      sum += diff * diff / distance_power(sites, i, j, d);
    }
  }
  const double mm = static_cast<double>(m);
  return std::sqrt(2.0 * sum / (mm * mm));
}

double discrete_h12_semi(const SampledField& field, int d) { return discrete_h12_semi(field.sites, field.values, d); }

double discrete_h12_norm(const SampledField& field, int d) {
  return discrete_l2_boundary(field) + discrete_h12_semi(field, d);
}

double kernel_row_bound(const Eigen::MatrixXd& sites, int d) {
  const Eigen::Index m = sites.rows();
  if (m < 2) throw std::invalid_argument("kernel bound needs at least two sites");
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double w = 1.0 / distance_power(sites, i, j, d);
      rows(i) += w;
      rows(j) += w;
    }
  }
  return rows.maxCoeff() / static_cast<double>(m);
}

}  // namespace cpinn
