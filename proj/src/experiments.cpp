#include "cpinn/experiments.hpp"

#include "cpinn/geometry.hpp"
#include "cpinn/interp.hpp"
#include "cpinn/norms.hpp"
#include "cpinn/rates.hpp"
#include "cpinn/rng.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cpinn {

namespace {

constexpr const char* kHeader = "m_tilde,m_bar,loss,seed,rel_h1_error,final_loss,wall_s";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw std::invalid_argument("parse_table: bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("parse_table: bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string checkpoint_path(const RunSpec& spec, std::uint64_t seed) {
  std::ostringstream name;
  name << "exp" << static_cast<int>(spec.problem) << "_n" << spec.points_per_axis << "_" << loss_name(spec.loss) << "_L"
       << spec.arch.layers << "W" << spec.arch.width << "_seed" << seed << ".ckpt";
  return (std::filesystem::path(spec.checkpoint_dir) / name.str()).string();
}

}  // namespace

LossKind parse_loss_kind(const std::string& name) {
  if (name == "original") return LossKind::original;
  if (name == "weighted") return LossKind::weighted;
  if (name == "consistent-gamma") return LossKind::consistent_gamma;
  if (name == "consistent-l2") return LossKind::consistent_l2;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

std::string loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::original:
      return "original";
    case LossKind::weighted:
      return "weighted";
    case LossKind::consistent_gamma:
      return "consistent-gamma";
    case LossKind::consistent_l2:
      return "consistent-l2";
  }
  throw std::invalid_argument("unknown loss kind");
}

const std::vector<LossKind>& all_loss_kinds() {
  static const std::vector<LossKind> kinds{LossKind::original, LossKind::weighted, LossKind::consistent_gamma,
                                           LossKind::consistent_l2};
  return kinds;
}

LossVariant variant_for(LossKind kind, const CollocationData& data, double gamma) {
  switch (kind) {
    case LossKind::original:
      return OriginalWeighted{1.0};
    case LossKind::weighted:
      return OriginalWeighted{lambda_weight(data.m_bar(), data.d)};
    case LossKind::consistent_gamma:
      return ConsistentTau{gamma};
    case LossKind::consistent_l2:
      return ConsistentTau{2.0};
  }
  throw std::invalid_argument("unknown loss kind");
}

void RunSpec::validate() const {
  if (points_per_axis < 2) throw std::invalid_argument("points_per_axis must be >= 2");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (eval_points < 2) throw std::invalid_argument("eval_points must be >= 2");
  if (arch.d_in != 2) throw std::invalid_argument("experiments are two-dimensional");
  arch.validate();
  TrainConfig cfg = train;
  cfg.steps = steps;
  cfg.validate();
}

RunSpec default_run_spec(ProblemId problem, int points_per_axis, LossKind loss) {
  const Problem pr = make_problem(problem);
  RunSpec spec;
  spec.problem = problem;
  spec.points_per_axis = points_per_axis;
  spec.loss = loss;
  spec.arch = pr.arch;
  spec.steps = pr.steps;
  return spec;
}

RunOutcome run_experiment(const RunSpec& spec) {
  spec.validate();
  const Problem problem = make_problem(spec.problem);
  const CollocationData data = make_collocation(problem, spec.points_per_axis);
  const LossVariant variant = variant_for(spec.loss, data, spec.gamma);
  if (!spec.checkpoint_dir.empty()) std::filesystem::create_directories(spec.checkpoint_dir);

  RunOutcome out;
  for (const std::uint64_t seed : spec.seeds) {
    const auto start = std::chrono::steady_clock::now();
    TrainConfig cfg = spec.train;
    cfg.steps = spec.steps;
    cfg.seed = seed;
    ResultRow row;
    row.m_tilde = data.m_tilde();
    row.m_bar = data.m_bar();
    row.loss = loss_name(spec.loss);
    row.seed = seed;
    try {
      const TrainReport report = train(init(spec.arch, seed), data, variant, cfg);
      row.final_loss = report.loss_trace.empty() ? report.initial_loss : report.loss_trace.back();
      row.rel_h1_error = h1_relative_error(report.final, problem, spec.eval_points);
      out.lstar.push_back(loss_lstar(NetworkOracle(report.final), data));
      if (!spec.checkpoint_dir.empty()) save_checkpoint(report.final, checkpoint_path(spec, seed));
      out.networks.push_back(report.final);
    } catch (const DivergenceError& e) {
      row.final_loss = std::numeric_limits<double>::quiet_NaN();
      row.rel_h1_error = std::numeric_limits<double>::quiet_NaN();
      out.lstar.push_back(std::numeric_limits<double>::quiet_NaN());
      out.networks.push_back(init(spec.arch, seed));
      out.failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
    }
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.rows.push_back(row);
  }
  return out;
}

const ResultRow& best_row(const std::vector<ResultRow>& rows) {
  const ResultRow* best = nullptr;
  for (const ResultRow& r : rows)
    if (std::isfinite(r.rel_h1_error) && (!best || r.rel_h1_error < best->rel_h1_error)) best = &r;
  if (!best) throw std::runtime_error("no finite result rows");
  return *best;
}

void emit_table(const std::vector<ResultRow>& rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("emit_table: no rows");
  out << kHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.m_tilde << ',' << r.m_bar << ',' << r.loss << ',' << r.seed << ',' << fmt(r.rel_h1_error) << ','
        << fmt(r.final_loss) << ',' << fmt(r.wall_s) << '\n';
  }
  if (!out) throw std::runtime_error("emit_table: write failed");
}

std::vector<ResultRow> parse_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("parse_table: missing header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 7) throw std::invalid_argument("parse_table: expected 7 columns");
    ResultRow r;
    r.m_tilde = parse_int(cells[0]);
    r.m_bar = parse_int(cells[1]);
    r.loss = cells[2];
    r.seed = std::stoull(cells[3]);
    r.rel_h1_error = parse_double(cells[4]);
    r.final_loss = parse_double(cells[5]);
    r.wall_s = parse_double(cells[6]);
    rows.push_back(r);
  }
  return rows;
}

double loss_error_agreement(const RunOutcome& outcome) {
  int agree = 0, total = 0;
  const std::size_t n = outcome.rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const ResultRow& a = outcome.rows[i];
      const ResultRow& b = outcome.rows[j];
      if (a.loss != b.loss || a.m_tilde != b.m_tilde) continue;
      if (!std::isfinite(outcome.lstar[i]) || !std::isfinite(outcome.lstar[j])) continue;
      ++total;
      if ((outcome.lstar[i] < outcome.lstar[j]) == (a.rel_h1_error < b.rel_h1_error)) ++agree;
    }
  }
  return total == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(agree) / total;
}

ConvergenceResult convergence_study(int r, StudyNorm norm, int k_min, int k_max, TestFunction fn, int d) {
  if (k_max - k_min + 1 < 3) throw std::invalid_argument("convergence_study needs at least 3 levels");
  ScalarField f;
  if (fn == TestFunction::sinsin) {
    f = [](const Eigen::Ref<const Eigen::VectorXd>& p) {
      double v = 1.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) v *= std::sin(std::numbers::pi * p(i));
      return v;
    };
  } else {
    f = [r](const Eigen::Ref<const Eigen::VectorXd>& p) {
      double t = 0.25;
      for (Eigen::Index i = 0; i < p.size(); ++i) t += (i % 2 == 0 ? 0.7 : -0.4) * p(i);
      return std::pow(1.0 + t, r - 1) - 0.5 * p(0);
    };
  }

  ConvergenceResult res;
  double fscale = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const TensorGrid grid = interior_grid(k, r, d);
    const Eigen::VectorXd samples = sample(grid.points, f);
    fscale = std::max(fscale, samples.cwiseAbs().maxCoeff());
    const PiecewisePoly pp = interpolate(grid, samples);
    const double err = norm == StudyNorm::linf ? sampled_sup_error(pp, f) : quad_error_lp(pp, f, 2.0, r + 4);
    res.errors.emplace_back(k, err);
  }

  const SmoothnessClass cls{static_cast<double>(r), kInfinity, kInfinity, d};
  const RateQuery q{norm == StudyNorm::linf ? RateNorm::C : RateNorm::L_tau, cls, 2.0};
  res.expected = level_exponent(q, expected_rate(q).exponent);

  double max_err = 0.0;
  for (const auto& e : res.errors) max_err = std::max(max_err, e.second);
  res.exact = max_err <= 1e-12 * std::max(1.0, fscale);
  res.slope = res.exact ? std::numeric_limits<double>::quiet_NaN() : measure_rate(res.errors);
  return res;
}

namespace {

void widen(EquivalenceBand& band, double ratio, bool& first) {
  if (first) {
    band.min_ratio = band.max_ratio = ratio;
    first = false;
  } else {
    band.min_ratio = std::min(band.min_ratio, ratio);
    band.max_ratio = std::max(band.max_ratio, ratio);
  }
}

Eigen::VectorXd random_values(const CounterRng& rng, std::uint64_t& counter, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 2.0 * rng.uniform(counter++) - 1.0;
  return v;
}

}  // namespace

EquivalenceBand lp_equivalence(double tau, int k_min, int k_max, int samples, std::uint64_t seed) {
  if (samples < 1 || k_min > k_max) throw std::invalid_argument("lp_equivalence: empty study");
  const CounterRng rng(seed);
  std::uint64_t counter = 0;
  EquivalenceBand band;
  bool first = true;
  for (int k = k_min; k <= k_max; ++k) {
    const TensorGrid grid = interior_grid(k, 2, 2);
    auto mesh = std::make_shared<const SimplicialMesh>(kuhn_tucker_mesh(k, 2, Ambient::domain));
    auto basis = std::make_shared<const ReferenceBasis>(reference_basis(2, 2));
    for (int s = 0; s < samples; ++s) {
      const Eigen::VectorXd values = random_values(rng, counter, grid.size());
      const PiecewisePoly pp = interpolate(grid, values, mesh, basis);
      widen(band, discrete_lp(values, tau) / quad_norm_lp(pp, tau), first);
    }
  }
  return band;
}

EquivalenceBand h12_equivalence(int k_min, int k_max, int samples, std::uint64_t seed) {
  if (samples < 1 || k_min > k_max) throw std::invalid_argument("h12_equivalence: empty study");
  const CounterRng rng(seed);
  std::uint64_t counter = 0;
  EquivalenceBand band;
  bool first = true;
  for (int k = k_min; k <= k_max; ++k) {
    const BoundaryGrid bgrid = boundary_grid(k, 2, 2);
    auto mesh = std::make_shared<const SimplicialMesh>(kuhn_tucker_mesh(k, 2, Ambient::boundary));
    auto basis = std::make_shared<const ReferenceBasis>(reference_basis(2, 1));
    for (int s = 0; s < samples; ++s) {
      const Eigen::VectorXd values = random_values(rng, counter, bgrid.size());
      const PiecewisePoly bpp = boundary_interpolate(bgrid, values, mesh, basis);
      widen(band, discrete_h12_semi(bgrid.points, values, 2) / quad_h12_seminorm(bpp), first);
    }
  }
  return band;
}

}  // namespace cpinn
