#pragma once

// Energy natural gradient descent: Gauss-Newton direction from the Gram
// matrix J^T J of the residual Jacobian, pseudo-inverted through a symmetric
// eigendecomposition, followed by a grid line search.

#include "cpinn/loss.hpp"
#include "cpinn/network.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace cpinn {

struct TrainConfig {
  int steps = 500;
  double damping = 1e-8;     // added to the Gram diagonal
  double eta_max = 1.0;      // line-search grid eta_max * 2^-i, i = 0..ls_steps
  int ls_steps = 30;
  double eig_cutoff = 1e-10; // eigenvalues below eig_cutoff * lambda_max are discarded
  std::uint64_t seed = 0;
  /// Indices of the parameters being trained; empty trains all of them.
  std::vector<Eigen::Index> trainable;

  void validate() const;
  std::vector<double> line_search_grid() const;
};

/// Non-finite loss during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int step, const std::string& what);
  int step() const { return step_; }

 private:
  int step_;
};

struct StepResult {
  Network net;
  double step_size = 0.0;
  double loss = 0.0;       // loss after the update
  double prev_loss = 0.0;  // loss before the update
  bool fallback = false;   // no grid member decreased the loss
};

/// G^+ g with G symmetric: eigenvalues below cutoff * lambda_max are dropped.
Eigen::VectorXd pseudo_inverse_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double cutoff);

StepResult engd_step(const Network& net, const CollocationData& data, const LossVariant& variant,
                     const TrainConfig& cfg, int step_index = 0);

struct TrainReport {
  std::vector<double> loss_trace;  // loss after each step
  std::vector<double> step_sizes;
  std::vector<bool> fallback;
  double initial_loss = 0.0;
  Network final;
  double wall_time = 0.0;

  bool operator==(const TrainReport& o) const {
    return loss_trace == o.loss_trace && step_sizes == o.step_sizes && fallback == o.fallback &&
           initial_loss == o.initial_loss && final.params == o.final.params;
  }
};

TrainReport train(const Network& net, const CollocationData& data, const LossVariant& variant,
                  const TrainConfig& cfg);

}  // namespace cpinn
