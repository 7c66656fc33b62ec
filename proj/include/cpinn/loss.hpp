#pragma once

// PINN loss functions evaluated from a field oracle and collocation data:
//   original / weighted    (1/m~) sum (lap v + f)^2 + (lambda/m-) sum (v - g)^2
//   consistent, exponent t ||lap v + f||*_{L_t}^2 + |g - v|*_{H^1/2}^2 + ||g - v||*_{L_2}^2
//   L*                     ||f + lap v||*_{L_gamma} + ||g - v||*_{H^1/2}  (times 1 + ln m~ on the
//                          domain term when d = 2)

#include "cpinn/geometry.hpp"
#include "cpinn/network.hpp"
#include "cpinn/norms.hpp"

#include <Eigen/Dense>

#include <string>
#include <variant>

namespace cpinn {

struct CollocationData {
  SampledField interior;  // sites x_i, values f_i
  SampledField boundary;  // sites z_i, values g_i
  int d = 2;

  Eigen::Index m_tilde() const { return interior.size(); }
  Eigen::Index m_bar() const { return boundary.size(); }
  void validate() const;
};

/// Anything that can report v(p) and lap v(p). The batch forms default to
/// looping over rows.
class FieldOracle {
 public:
  virtual ~FieldOracle() = default;
  virtual double value(const Eigen::Ref<const Eigen::VectorXd>& p) const = 0;
  virtual double laplacian(const Eigen::Ref<const Eigen::VectorXd>& p) const = 0;
  virtual Eigen::VectorXd values(const Eigen::MatrixXd& sites) const;
  virtual Eigen::VectorXd laplacians(const Eigen::MatrixXd& sites) const;
};

/// Network as a field oracle, evaluated through the batched jet path.
class NetworkOracle final : public FieldOracle {
 public:
  explicit NetworkOracle(const Network& net) : net_(net) {}
  double value(const Eigen::Ref<const Eigen::VectorXd>& p) const override;
  double laplacian(const Eigen::Ref<const Eigen::VectorXd>& p) const override;
  Eigen::VectorXd values(const Eigen::MatrixXd& sites) const override;
  Eigen::VectorXd laplacians(const Eigen::MatrixXd& sites) const override;

 private:
  const Network& net_;
};

struct OriginalWeighted {
  double lambda = 1.0;
};
struct ConsistentTau {
  double tau = 2.0;
};
struct LStar {};

using LossVariant = std::variant<OriginalWeighted, ConsistentTau, LStar>;

void validate(const LossVariant& variant);
std::string describe(const LossVariant& variant);

/// Residuals at the data sites: domain lap v(x_i) + f_i, boundary v(z_i) - g_i.
struct SiteResiduals {
  Eigen::VectorXd domain;
  Eigen::VectorXd boundary;
};

SiteResiduals site_residuals(const FieldOracle& v, const CollocationData& data);

/// 2d/(d+2) for d >= 3; 1 + 1/ln(m~) for d = 2.
double gamma_choice(int d, Eigen::Index m_tilde);

/// m-^{1/(d-1)}
double lambda_weight(Eigen::Index m_bar, int d);

double loss_original(const SiteResiduals& res, const CollocationData& data, double lambda);
double loss_consistent_tau(const SiteResiduals& res, const CollocationData& data, double tau);
double loss_lstar(const SiteResiduals& res, const CollocationData& data);
double loss_value(const SiteResiduals& res, const CollocationData& data, const LossVariant& variant);

double loss_original(const FieldOracle& v, const CollocationData& data, double lambda);
double loss_consistent_tau(const FieldOracle& v, const CollocationData& data, double tau);
double loss_lstar(const FieldOracle& v, const CollocationData& data);
double loss_value(const FieldOracle& v, const CollocationData& data, const LossVariant& variant);

}  // namespace cpinn
