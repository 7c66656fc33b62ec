#pragma once

// Experiment drivers: PINN training runs over the four losses, result
// tables, interpolation convergence studies and discrete/continuous norm
// equivalence studies.

#include "cpinn/loss.hpp"
#include "cpinn/optim.hpp"
#include "cpinn/problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cpinn {

enum class LossKind { original, weighted, consistent_gamma, consistent_l2 };

/// Domain exponent used for the consistent-gamma loss in the 2-D experiments.
inline constexpr double kExperimentGamma = 1.1;

LossKind parse_loss_kind(const std::string& name);
std::string loss_name(LossKind kind);
const std::vector<LossKind>& all_loss_kinds();

/// original: lambda = 1; weighted: lambda = m-^{1/(d-1)};
/// consistent-gamma: tau = gamma; consistent-l2: tau = 2.
LossVariant variant_for(LossKind kind, const CollocationData& data, double gamma = kExperimentGamma);

struct RunSpec {
  ProblemId problem = ProblemId::exp1;
  int points_per_axis = 10;
  LossKind loss = LossKind::weighted;
  Architecture arch;
  int steps = 500;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  TrainConfig train;  // steps overridden by `steps`
  int eval_points = 500;
  double gamma = kExperimentGamma;
  std::string checkpoint_dir;  // when set, trained networks are saved there

  void validate() const;
};

/// Default setup for a problem and grid: the problem's network and step count.
RunSpec default_run_spec(ProblemId problem, int points_per_axis, LossKind loss);

struct ResultRow {
  Eigen::Index m_tilde = 0;
  Eigen::Index m_bar = 0;
  std::string loss;
  std::uint64_t seed = 0;
  double rel_h1_error = 0.0;
  double final_loss = 0.0;
  double wall_s = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct RunOutcome {
  std::vector<ResultRow> rows;
  std::vector<double> lstar;  // L* of each trained network, aligned with rows
  std::vector<Network> networks;
  std::vector<std::string> failures;  // seeds whose training diverged
};

RunOutcome run_experiment(const RunSpec& spec);

/// Row with the smallest relative H1 error.
const ResultRow& best_row(const std::vector<ResultRow>& rows);

/// Columns: m_tilde,m_bar,loss,seed,rel_h1_error,final_loss,wall_s
void emit_table(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> parse_table(std::istream& in);

/// Fraction of same-spec seed pairs in which the smaller L* comes with the
/// smaller H1 error.
double loss_error_agreement(const RunOutcome& outcome);

enum class StudyNorm { linf, l2 };
/// sinsin: prod sin(pi x_i); polynomial: a fixed element of P_r (degree r-1).
enum class TestFunction { sinsin, polynomial };

struct ConvergenceResult {
  std::vector<std::pair<int, double>> errors;
  double slope = 0.0;     // NaN when exact
  double expected = 0.0;  // in the 2^-k scale
  bool exact = false;     // errors at rounding level: the interpolant reproduces f
};

ConvergenceResult convergence_study(int r, StudyNorm norm, int k_min, int k_max, TestFunction fn, int d = 2);

struct EquivalenceBand {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread() const { return max_ratio / min_ratio; }
};

/// discrete_lp / quad_norm_lp over random piecewise-linear functions on G_{k,2}, d = 2.
EquivalenceBand lp_equivalence(double tau, int k_min, int k_max, int samples, std::uint64_t seed);
/// discrete_h12_semi / quad_h12_seminorm over random piecewise-linear boundary functions, d = 2.
EquivalenceBand h12_equivalence(int k_min, int k_max, int samples, std::uint64_t seed);

}  // namespace cpinn
