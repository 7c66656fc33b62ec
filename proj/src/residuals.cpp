#include "cpinn/residuals.hpp"

#include <cmath>
#include <stdexcept>

namespace cpinn {

namespace {

void require_quadratic(const LossVariant& variant) {
  validate(variant);
  if (std::holds_alternative<LStar>(variant))
    throw std::invalid_argument("L* is not a sum of squares; use a squared variant for least-squares training");
}

SiteResiduals residuals_from(const JetTape& dom, const JetTape& bnd, const CollocationData& data) {
  return {dom.lap + data.interior.values, bnd.value - data.boundary.values};
}

double pair_distance_power(const Eigen::MatrixXd& sites, Eigen::Index i, Eigen::Index j, int d) {
  const double dist2 = (sites.row(i) - sites.row(j)).squaredNorm();
  if (dist2 == 0.0) throw std::invalid_argument("duplicate sites in pair sum");
  return d == 2 ? dist2 : std::pow(dist2, 0.5 * d);
}

}  // namespace

ResidualWeights residual_weights(const SiteResiduals& res, const CollocationData& data, const LossVariant& variant) {
  require_quadratic(variant);
  const double mt = static_cast<double>(data.m_tilde());
  const double mb = static_cast<double>(data.m_bar());
  ResidualWeights w;
  if (const auto* ow = std::get_if<OriginalWeighted>(&variant)) {
    w.domain = Eigen::VectorXd::Constant(data.m_tilde(), 1.0 / std::sqrt(mt));
    w.boundary = std::sqrt(ow->lambda / mb);
    return w;
  }
  const double tau = std::get<ConsistentTau>(variant).tau;
  w.pairs = true;
  w.boundary = 1.0 / std::sqrt(mb);
  if (tau == 2.0) {
    w.domain = Eigen::VectorXd::Constant(data.m_tilde(), 1.0 / std::sqrt(mt));
    return w;
  }
  const Eigen::ArrayXd mag = res.domain.array().abs();
  const double s = mag.pow(tau).sum() / mt;
  const double c = s > 0.0 ? std::pow(s, 2.0 / tau - 1.0) / mt : 0.0;
  w.domain = (std::sqrt(c) * mag.max(kIrlsFloor).pow(0.5 * (tau - 2.0))).matrix();
  return w;
}

Eigen::VectorXd residual_vector(const Network& net, const CollocationData& data, const LossVariant& variant) {
  require_quadratic(variant);
  data.validate();
  const JetTape dom = forward(net, data.interior.sites, true);
  const JetTape bnd = forward(net, data.boundary.sites, false);
  const SiteResiduals res = residuals_from(dom, bnd, data);
  const ResidualWeights w = residual_weights(res, data, variant);

  const Eigen::Index mt = data.m_tilde(), mb = data.m_bar();
  const Eigen::Index npairs = w.pairs ? mb * (mb - 1) / 2 : 0;
  Eigen::VectorXd r(mt + npairs + mb);
  r.head(mt) = w.domain.cwiseProduct(res.domain);
  Eigen::Index row = mt;
  if (w.pairs) {
    const double scale = std::sqrt(2.0) / static_cast<double>(mb);
    for (Eigen::Index i = 0; i < mb; ++i)
      for (Eigen::Index j = i + 1; j < mb; ++j)
        r(row++) = scale * (res.boundary(i) - res.boundary(j)) /
                   std::sqrt(pair_distance_power(data.boundary.sites, i, j, data.d));
  }
  r.tail(mb) = w.boundary * res.boundary;
  return r;
}

Eigen::MatrixXd param_jacobian(const Network& net, const CollocationData& data, const LossVariant& variant) {
  require_quadratic(variant);
  data.validate();
  const JetTape dom = forward(net, data.interior.sites, true);
  const JetTape bnd = forward(net, data.boundary.sites, false);
  const SiteResiduals res = residuals_from(dom, bnd, data);
  const ResidualWeights w = residual_weights(res, data, variant);

  const Eigen::Index mt = data.m_tilde(), mb = data.m_bar();
  const Eigen::Index npairs = w.pairs ? mb * (mb - 1) / 2 : 0;
  const Eigen::Index P = net.params.size();
  const Eigen::MatrixXd Jd = parameter_jacobian(net, dom, Eigen::VectorXd::Zero(mt), w.domain);
  const Eigen::MatrixXd Jb = parameter_jacobian(net, bnd, Eigen::VectorXd::Ones(mb), Eigen::VectorXd::Zero(mb));

  Eigen::MatrixXd J(mt + npairs + mb, P);
  J.topRows(mt) = Jd;
  Eigen::Index row = mt;
  if (w.pairs) {
    const double scale = std::sqrt(2.0) / static_cast<double>(mb);
    for (Eigen::Index i = 0; i < mb; ++i)
      for (Eigen::Index j = i + 1; j < mb; ++j)
        J.row(row++) = scale / std::sqrt(pair_distance_power(data.boundary.sites, i, j, data.d)) *
                       (Jb.row(i) - Jb.row(j));
  }
  J.bottomRows(mb) = w.boundary * Jb;
  return J;
}

Eigen::MatrixXd pair_kernel(const Eigen::MatrixXd& sites, int d) {
  const Eigen::Index m = sites.rows();
  const double mm = static_cast<double>(m);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double w = 2.0 / (mm * mm * pair_distance_power(sites, i, j, d));
      K(i, j) = -w;
      K(j, i) = -w;
      K(i, i) += w;
      K(j, j) += w;
    }
  }
  return K;
}

GaussNewtonSystem gauss_newton_system(const Network& net, const CollocationData& data, const LossVariant& variant) {
  require_quadratic(variant);
  data.validate();
  const JetTape dom = forward(net, data.interior.sites, true);
  const JetTape bnd = forward(net, data.boundary.sites, false);
  const SiteResiduals res = residuals_from(dom, bnd, data);
  const ResidualWeights w = residual_weights(res, data, variant);

  const Eigen::Index mt = data.m_tilde(), mb = data.m_bar();
  const Eigen::Index P = net.params.size();
  const Eigen::MatrixXd Jd = parameter_jacobian(net, dom, Eigen::VectorXd::Zero(mt), w.domain);
  const Eigen::MatrixXd Jb = parameter_jacobian(net, bnd, Eigen::VectorXd::Ones(mb), Eigen::VectorXd::Zero(mb));

  GaussNewtonSystem sys;
  sys.gram = Eigen::MatrixXd::Zero(P, P);
  sys.gram.selfadjointView<Eigen::Lower>().rankUpdate(Jd.transpose());
  const Eigen::VectorXd rd = w.domain.cwiseProduct(res.domain);
  sys.half_gradient = Jd.transpose() * rd;

  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(mb, mb) * (w.boundary * w.boundary);
  if (w.pairs) M += pair_kernel(data.boundary.sites, data.d);
  const Eigen::MatrixXd MJb = M * Jb;
  sys.gram.triangularView<Eigen::Lower>() += Jb.transpose() * MJb;
  sys.gram = sys.gram.selfadjointView<Eigen::Lower>();
  sys.half_gradient += MJb.transpose() * res.boundary;
  sys.loss = loss_value(res, data, variant);
  return sys;
}

}  // namespace cpinn
