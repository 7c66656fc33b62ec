#include "cpinn/optim.hpp"

#include "cpinn/residuals.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <string>

namespace cpinn {

void TrainConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("train: steps must be >= 1");
  if (!(damping >= 0.0)) throw std::invalid_argument("train: damping must be >= 0");
  if (!(eta_max > 0.0)) throw std::invalid_argument("train: eta_max must be > 0");
  if (ls_steps < 0) throw std::invalid_argument("train: line-search grid must be nonempty");
  if (!(eig_cutoff >= 0.0 && eig_cutoff < 1.0)) throw std::invalid_argument("train: eig_cutoff must lie in [0, 1)");
}

std::vector<double> TrainConfig::line_search_grid() const {
  std::vector<double> grid;
  for (int i = 0; i <= ls_steps; ++i) grid.push_back(std::ldexp(eta_max, -i));
  return grid;
}

DivergenceError::DivergenceError(int step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

Eigen::VectorXd pseudo_inverse_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of the Gram matrix failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  if (top == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd coef = es.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < coef.size(); ++i) coef(i) = lambda(i) >= cutoff * top ? coef(i) / lambda(i) : 0.0;
  return es.eigenvectors() * coef;
}

namespace {

double evaluate_loss(const Network& net, const CollocationData& data, const LossVariant& variant) {
  const NetworkOracle oracle(net);
  return loss_value(oracle, data, variant);
}

}  // namespace

StepResult engd_step(const Network& net, const CollocationData& data, const LossVariant& variant,
                     const TrainConfig& cfg, int step_index) {
  const GaussNewtonSystem sys = gauss_newton_system(net, data, variant);
  if (!std::isfinite(sys.loss)) throw DivergenceError(step_index, "non-finite loss");

  const std::vector<Eigen::Index>& active = cfg.trainable;
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(net.params.size());
  if (active.empty()) {
    Eigen::MatrixXd G = sys.gram;
    G.diagonal().array() += cfg.damping;
    direction = pseudo_inverse_solve(G, sys.half_gradient, cfg.eig_cutoff);
  } else {
    const Eigen::Index n = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd G(n, n);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i) = sys.half_gradient(active[i]);
      for (Eigen::Index j = 0; j < n; ++j) G(i, j) = sys.gram(active[i], active[j]);
    }
    G.diagonal().array() += cfg.damping;
    const Eigen::VectorXd sub = pseudo_inverse_solve(G, g, cfg.eig_cutoff);
    for (Eigen::Index i = 0; i < n; ++i) direction(active[i]) = sub(i);
  }

  StepResult out;
  out.prev_loss = sys.loss;
  const std::vector<double> grid = cfg.line_search_grid();
  double best_loss = 0.0;
  double best_eta = -1.0;
  Network trial = net;
  for (double eta : grid) {
    trial.params = net.params - eta * direction;
    const double l = evaluate_loss(trial, data, variant);
    // strict improvement keeps ties at the larger step
    if (std::isfinite(l) && (best_eta < 0.0 || l < best_loss)) {
      best_loss = l;
      best_eta = eta;
    }
  }
  if (best_eta < 0.0 || !(best_loss < sys.loss)) {
    out.fallback = true;
    best_eta = grid.back();
    trial.params = net.params - best_eta * direction;
    best_loss = evaluate_loss(trial, data, variant);
  }
  if (!std::isfinite(best_loss)) throw DivergenceError(step_index, "non-finite loss after update");
  out.net = net;
  out.net.params = net.params - best_eta * direction;
  out.step_size = best_eta;
  out.loss = best_loss;
  return out;
}

TrainReport train(const Network& net, const CollocationData& data, const LossVariant& variant,
                  const TrainConfig& cfg) {
  cfg.validate();
  validate(variant);
  const auto t0 = std::chrono::steady_clock::now();
  TrainReport report;
  report.final = net;
  report.initial_loss = evaluate_loss(net, data, variant);
  report.loss_trace.reserve(static_cast<std::size_t>(cfg.steps));
  for (int s = 0; s < cfg.steps; ++s) {
    StepResult step = engd_step(report.final, data, variant, cfg, s);
    report.loss_trace.push_back(step.loss);
    report.step_sizes.push_back(step.step_size);
    report.fallback.push_back(step.fallback);
    report.final = std::move(step.net);
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace cpinn
