#include "cpinn/loss.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cpinn {

void CollocationData::validate() const {
  if (interior.size() == 0 || boundary.size() == 0) throw std::invalid_argument("empty collocation data");
  if (interior.sites.rows() != interior.size() || boundary.sites.rows() != boundary.size())
    throw std::invalid_argument("collocation sites and values are misaligned");
  if (interior.dim() != d || boundary.dim() != d) throw std::invalid_argument("collocation site dimension mismatch");
}

Eigen::VectorXd FieldOracle::values(const Eigen::MatrixXd& sites) const {
  Eigen::VectorXd out(sites.rows());
  for (Eigen::Index i = 0; i < sites.rows(); ++i) out(i) = value(sites.row(i).transpose());
  return out;
}

Eigen::VectorXd FieldOracle::laplacians(const Eigen::MatrixXd& sites) const {
  Eigen::VectorXd out(sites.rows());
  for (Eigen::Index i = 0; i < sites.rows(); ++i) out(i) = laplacian(sites.row(i).transpose());
  return out;
}

double NetworkOracle::value(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return forward(net_, p.transpose(), false).value(0);
}
double NetworkOracle::laplacian(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return forward(net_, p.transpose(), true).lap(0);
}
Eigen::VectorXd NetworkOracle::values(const Eigen::MatrixXd& sites) const { return forward(net_, sites, false).value; }
Eigen::VectorXd NetworkOracle::laplacians(const Eigen::MatrixXd& sites) const { return forward(net_, sites, true).lap; }

void validate(const LossVariant& variant) {
  if (const auto* w = std::get_if<OriginalWeighted>(&variant); w && !(w->lambda > 0.0))
    throw std::invalid_argument("boundary weight lambda must be > 0");
  if (const auto* c = std::get_if<ConsistentTau>(&variant); c && !(c->tau >= 1.0))
    throw std::invalid_argument("domain exponent tau must be >= 1");
}

std::string describe(const LossVariant& variant) {
  std::ostringstream os;
  if (const auto* w = std::get_if<OriginalWeighted>(&variant))
    os << "L_sq,lambda=" << w->lambda;
  else if (const auto* c = std::get_if<ConsistentTau>(&variant))
    os << "L*_sq,tau=" << c->tau;
  else
    os << "L*";
  return os.str();
}

SiteResiduals site_residuals(const FieldOracle& v, const CollocationData& data) {
  data.validate();
  SiteResiduals r;
  r.domain = v.laplacians(data.interior.sites) + data.interior.values;
  r.boundary = v.values(data.boundary.sites) - data.boundary.values;
  return r;
}

double gamma_choice(int d, Eigen::Index m_tilde) {
  if (d < 2) throw std::invalid_argument("gamma_choice: d must be >= 2");
  if (d >= 3) return 2.0 * d / (d + 2.0);
  if (m_tilde < 3) throw std::invalid_argument("gamma_choice: d = 2 needs m~ >= 3");
  return 1.0 + 1.0 / std::log(static_cast<double>(m_tilde));
}

double lambda_weight(Eigen::Index m_bar, int d) {
  if (m_bar < 1) throw std::invalid_argument("lambda_weight: m- must be >= 1");
  if (d < 2) throw std::invalid_argument("lambda_weight: d must be >= 2");
  return std::pow(static_cast<double>(m_bar), 1.0 / (d - 1));
}

double loss_original(const SiteResiduals& res, const CollocationData& data, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("boundary weight lambda must be > 0");
  (void)data;
  if (res.domain.size() == 0 || res.boundary.size() == 0) throw std::invalid_argument("empty collocation data");
  return res.domain.squaredNorm() / static_cast<double>(res.domain.size()) +
         lambda * res.boundary.squaredNorm() / static_cast<double>(res.boundary.size());
}

double loss_consistent_tau(const SiteResiduals& res, const CollocationData& data, double tau) {
  if (!(tau >= 1.0)) throw std::invalid_argument("domain exponent tau must be >= 1");
  const double dom = discrete_lp(res.domain, tau);
  const double semi = discrete_h12_semi(data.boundary.sites, res.boundary, data.d);
  const double l2 = discrete_lp(res.boundary, 2.0);
  return dom * dom + semi * semi + l2 * l2;
}

double loss_lstar(const SiteResiduals& res, const CollocationData& data) {
  const Eigen::Index mt = data.m_tilde();
  const double gamma = gamma_choice(data.d, mt);
  double dom = discrete_lp(res.domain, gamma);
  if (data.d == 2) dom *= 1.0 + std::log(static_cast<double>(mt));
  const double bnd = discrete_lp(res.boundary, 2.0) + discrete_h12_semi(data.boundary.sites, res.boundary, data.d);
  return dom + bnd;
}

double loss_value(const SiteResiduals& res, const CollocationData& data, const LossVariant& variant) {
  validate(variant);
  if (const auto* w = std::get_if<OriginalWeighted>(&variant)) return loss_original(res, data, w->lambda);
  if (const auto* c = std::get_if<ConsistentTau>(&variant)) return loss_consistent_tau(res, data, c->tau);
  return loss_lstar(res, data);
}

double loss_original(const FieldOracle& v, const CollocationData& data, double lambda) {
  return loss_original(site_residuals(v, data), data, lambda);
}
double loss_consistent_tau(const FieldOracle& v, const CollocationData& data, double tau) {
  return loss_consistent_tau(site_residuals(v, data), data, tau);
}
double loss_lstar(const FieldOracle& v, const CollocationData& data) { return loss_lstar(site_residuals(v, data), data); }
double loss_value(const FieldOracle& v, const CollocationData& data, const LossVariant& variant) {
  return loss_value(site_residuals(v, data), data, variant);
}

}  // namespace cpinn
