#pragma once

// The three Poisson test problems on (0,1)^2. Right-hand sides and boundary
// data are derived from the closed-form solutions through the jet machinery.

#include "cpinn/jet.hpp"
#include "cpinn/loss.hpp"
#include "cpinn/network.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace cpinn {

enum class ProblemId { exp1 = 1, exp2 = 2, exp3 = 3 };

/// u(x, y) on any scalar type.
template <typename T>
T exact_solution(ProblemId id, const T& x, const T& y) {
  using std::cos;
  using std::exp;
  using std::pow;
  switch (id) {
    case ProblemId::exp1:
      return exp(x) * cos(y);
    case ProblemId::exp2: {
      const double two_pi = 2.0 * std::numbers::pi;
      return exp(2.0 * (x + y)) * cos(two_pi * (y - x)) / (1.0 + 8.0 * x * x + y * y);
    }
    case ProblemId::exp3: {
      const T r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
      return 1000.0 * x * (1.0 - x) * y * (1.0 - y) * pow(r2, 2.25);
    }
  }
  return T(0.0);
}

struct Problem {
  ProblemId id = ProblemId::exp1;
  std::string name;
  Architecture arch;                 // network used in the experiment
  int steps = 500;                   // training iterations
  std::vector<int> points_per_axis;  // table rows

  Jet2d jet(const Eigen::Vector2d& p) const;
  double u(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  Eigen::Vector2d grad_u(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  /// f = -lap u
  double f(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  /// g = u restricted to the boundary
  double g(const Eigen::Ref<const Eigen::VectorXd>& p) const { return u(p); }
};

Problem make_problem(ProblemId id);
ProblemId parse_problem_id(int n);

/// The exact solution as a field oracle.
class ExactOracle final : public FieldOracle {
 public:
  explicit ExactOracle(const Problem& problem) : problem_(problem) {}
  double value(const Eigen::Ref<const Eigen::VectorXd>& p) const override { return problem_.u(p); }
  double laplacian(const Eigen::Ref<const Eigen::VectorXd>& p) const override { return -problem_.f(p); }

 private:
  const Problem& problem_;
};

/// Collocation data on the uniform n x n grid: every grid point carries f
/// (m~ = n^2) and the 4(n-1) boundary points carry g.
CollocationData make_collocation(const Problem& problem, int points_per_axis);

/// Batched value and gradient of a candidate solution at the rows of X.
using ValueGradField = std::function<void(const Eigen::MatrixXd& X, Eigen::VectorXd& value, Eigen::MatrixXd& grad)>;

ValueGradField value_grad_of(const Network& net);

/// [ sum (|v - u|^2 + |grad v - grad u|^2) / sum (|u|^2 + |grad u|^2) ]^{1/2}
/// over the cell centres of a uniform n x n grid.
double h1_relative_error(const ValueGradField& v, const Problem& problem, int n = 500);
double h1_relative_error(const Network& net, const Problem& problem, int n = 500);

}  // namespace cpinn
