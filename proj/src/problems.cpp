#include "cpinn/problems.hpp"

#include "cpinn/geometry.hpp"

#include <stdexcept>

namespace cpinn {

Jet2d Problem::jet(const Eigen::Vector2d& p) const {
  const auto xy = coordinates<double, 2>(p);
  return exact_solution(id, xy[0], xy[1]);
}

double Problem::u(const Eigen::Ref<const Eigen::VectorXd>& p) const { return exact_solution(id, p(0), p(1)); }

Eigen::Vector2d Problem::grad_u(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return jet(Eigen::Vector2d(p(0), p(1))).grad;
}

double Problem::f(const Eigen::Ref<const Eigen::VectorXd>& p) const { return -jet(Eigen::Vector2d(p(0), p(1))).lap; }

Problem make_problem(ProblemId id) {
  Problem pr;
  pr.id = id;
  switch (id) {
    case ProblemId::exp1:
      pr.name = "harmonic";
      pr.arch = {2, 3, 5};
      pr.steps = 500;
      pr.points_per_axis = {5, 10, 15, 20};
      break;
    case ProblemId::exp2:
      pr.name = "smooth";
      pr.arch = {2, 3, 10};
      pr.steps = 500;
      pr.points_per_axis = {5, 10, 15, 20};
      break;
    case ProblemId::exp3:
      pr.name = "non-smooth";
      pr.arch = {2, 3, 15};
      pr.steps = 1000;
      pr.points_per_axis = {10, 20, 30, 40};
      break;
    default:
      throw std::invalid_argument("unknown problem id");
  }
  return pr;
}

ProblemId parse_problem_id(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("experiment must be 1, 2 or 3");
  return static_cast<ProblemId>(n);
}

CollocationData make_collocation(const Problem& problem, int points_per_axis) {
  const TensorGrid grid = uniform_grid(points_per_axis, 2);
  const BoundaryGrid bnd = boundary_of(grid);
  CollocationData data;
  data.d = 2;
  data.interior.sites = grid.points;
  data.interior.values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) data.interior.values(i) = problem.f(grid.points.row(i).transpose());
  data.boundary.sites = bnd.points;
  data.boundary.values.resize(bnd.size());
  for (Eigen::Index i = 0; i < bnd.size(); ++i) data.boundary.values(i) = problem.g(bnd.points.row(i).transpose());
  return data;
}

ValueGradField value_grad_of(const Network& net) {
  return [&net](const Eigen::MatrixXd& X, Eigen::VectorXd& value, Eigen::MatrixXd& grad) {
    JetTape t = forward(net, X, true);
    value = std::move(t.value);
    grad = std::move(t.grad);
  };
}

double h1_relative_error(const ValueGradField& v, const Problem& problem, int n) {
  if (n < 2) throw std::invalid_argument("h1_relative_error needs n >= 2");
  constexpr Eigen::Index kChunk = 4096;
  const Eigen::Index total = static_cast<Eigen::Index>(n) * n;
  double num = 0.0, den = 0.0;
  Eigen::MatrixXd X;
  Eigen::VectorXd val;
  Eigen::MatrixXd grad;
  for (Eigen::Index start = 0; start < total; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, total - start);
    X.resize(len, 2);
    for (Eigen::Index q = 0; q < len; ++q) {
      const Eigen::Index idx = start + q;
      X(q, 0) = (static_cast<double>(idx / n) + 0.5) / n;
      X(q, 1) = (static_cast<double>(idx % n) + 0.5) / n;
    }
    v(X, val, grad);
    for (Eigen::Index q = 0; q < len; ++q) {
      const Jet2d u = problem.jet(X.row(q).transpose());
      const double dv = val(q) - u.value;
      num += dv * dv + (grad.row(q).transpose() - u.grad).squaredNorm();
      den += u.value * u.value + u.grad.squaredNorm();
    }
  }
  if (den == 0.0) throw std::domain_error("h1_relative_error: exact solution has zero H1 norm");
  return std::sqrt(num / den);
}

double h1_relative_error(const Network& net, const Problem& problem, int n) {
  return h1_relative_error(value_grad_of(net), problem, n);
}

}  // namespace cpinn
