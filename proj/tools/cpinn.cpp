// Command-line front end: grids, interpolation and norm studies, PINN training
// runs, result tables, heatmaps and the rate table.

#include "cpinn/experiments.hpp"
#include "cpinn/geometry.hpp"
#include "cpinn/plot.hpp"
#include "cpinn/rates.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

using namespace cpinn;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kInvalid = 2;

struct Options {
  std::string format = "csv";
  std::string out;

  int experiment = 1;
  std::string loss;
  int points_per_axis = 0;
  int layers = 0;
  int width = 0;
  int steps = 0;
  std::vector<std::uint64_t> seeds;
  std::string checkpoint_dir;
  std::string checkpoint;
  int eval_points = 500;

  int level = 1;
  int order = 2;
  int dim = 2;

  std::string norm = "linf";
  int k_min = 3;
  int k_max = 5;
  std::string function = "sinsin";

  std::vector<double> taus{1.0, 1.2, 2.0};
  int samples = 20;

  std::string field = "exact";
  int resolution = 200;

  std::string rate_norm = "C";
  double s = 2.0;
  double p = std::numeric_limits<double>::infinity();
  double tau = 2.0;
};

// Table output: every record is a flat map of column -> value. Non-finite
// numbers print as inf/nan in CSV and null in JSON.
using Record = std::vector<std::pair<std::string, json>>;

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void write_records(const std::vector<Record>& records, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    json arr = json::array();
    for (const Record& r : records) {
      json obj = json::object();
      for (const auto& [k, v] : r) obj[k] = v;
      arr.push_back(obj);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  if (records.empty()) return;
  for (std::size_t i = 0; i < records.front().size(); ++i) out << (i ? "," : "") << records.front()[i].first;
  out << "\n";
  for (const Record& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell(r[i].second);
    out << "\n";
  }
}

template <typename Writer>
void with_output(const Options& o, Writer&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot open " + o.out + " for writing");
  write(f);
  if (!f) throw std::runtime_error("write to " + o.out + " failed");
}

void write_rows(const std::vector<ResultRow>& rows, const Options& o) {
  with_output(o, [&](std::ostream& out) {
    if (o.format == "csv") {
      emit_table(rows, out);
      return;
    }
    std::vector<Record> records;
    for (const ResultRow& r : rows)
      records.push_back({{"m_tilde", r.m_tilde},
                         {"m_bar", r.m_bar},
                         {"loss", r.loss},
                         {"seed", r.seed},
                         {"rel_h1_error", r.rel_h1_error},
                         {"final_loss", r.final_loss},
                         {"wall_s", r.wall_s}});
    write_records(records, o, out);
  });
}

RunSpec spec_from(const Options& o, int points_per_axis, LossKind loss) {
  RunSpec spec = default_run_spec(parse_problem_id(o.experiment), points_per_axis, loss);
  if (o.layers) spec.arch.layers = o.layers;
  if (o.width) spec.arch.width = o.width;
  if (o.steps) spec.steps = o.steps;
  if (!o.seeds.empty()) spec.seeds = o.seeds;
  spec.eval_points = o.eval_points;
  spec.checkpoint_dir = o.checkpoint_dir;
  spec.validate();
  return spec;
}

void report_failures(const RunOutcome& outcome, bool& failed) {
  for (const std::string& f : outcome.failures) std::cerr << "diverged: " << f << "\n";
  failed = failed || !outcome.failures.empty();
}

int cmd_grid_info(const Options& o) {
  std::vector<Record> records;
  if (o.points_per_axis > 0) {
    const TensorGrid g = uniform_grid(o.points_per_axis, o.dim);
    const BoundaryGrid b = boundary_of(g);
    records.push_back({{"kind", "uniform"}, {"per_axis", g.per_axis}, {"d", g.d}, {"m_tilde", g.size()},
                       {"m_bar", b.size()}, {"spacing", g.spacing()}});
  } else {
    const TensorGrid g = interior_grid(o.level, o.order, o.dim);
    const BoundaryGrid b = boundary_of(g);
    records.push_back({{"kind", "dyadic"}, {"k", g.k}, {"r", g.r}, {"d", g.d}, {"per_axis", g.per_axis},
                       {"m_tilde", g.size()}, {"m_bar", b.size()}, {"spacing", g.spacing()}});
  }
  with_output(o, [&](std::ostream& out) { write_records(records, o, out); });
  return kOk;
}

int cmd_interp_convergence(const Options& o) {
  const StudyNorm norm = o.norm == "l2" ? StudyNorm::l2 : StudyNorm::linf;
  const TestFunction fn = o.function == "polynomial" ? TestFunction::polynomial : TestFunction::sinsin;
  const ConvergenceResult res = convergence_study(o.order, norm, o.k_min, o.k_max, fn, o.dim);
  std::vector<Record> records;
  for (const auto& [k, err] : res.errors)
    records.push_back({{"k", k}, {"error", err}, {"slope", res.slope}, {"expected", res.expected},
                       {"exact", res.exact}});
  with_output(o, [&](std::ostream& out) { write_records(records, o, out); });
  return std::isfinite(res.slope) || res.exact ? kOk : kNumerical;
}

int cmd_norm_equivalence(const Options& o) {
  const std::uint64_t seed = o.seeds.empty() ? 1 : o.seeds.front();
  std::vector<Record> records;
  auto add = [&](const std::string& name, const EquivalenceBand& b) {
    records.push_back(
        {{"norm", name}, {"min_ratio", b.min_ratio}, {"max_ratio", b.max_ratio}, {"spread", b.spread()}});
  };
  for (double t : o.taus) {
    std::ostringstream name;
    name << "L" << t;
    add(name.str(), lp_equivalence(t, o.k_min, o.k_max, o.samples, seed));
  }
  add("H12", h12_equivalence(o.k_min, o.k_max, o.samples, seed));
  with_output(o, [&](std::ostream& out) { write_records(records, o, out); });
  return kOk;
}

int cmd_train(const Options& o) {
  const Problem pr = make_problem(parse_problem_id(o.experiment));
  const int n = o.points_per_axis > 0 ? o.points_per_axis : pr.points_per_axis.front();
  const LossKind loss = parse_loss_kind(o.loss.empty() ? "weighted" : o.loss);
  const RunOutcome outcome = run_experiment(spec_from(o, n, loss));
  bool failed = false;
  report_failures(outcome, failed);
  write_rows(outcome.rows, o);
  return failed ? kNumerical : kOk;
}

int cmd_tables(const Options& o) {
  const Problem pr = make_problem(parse_problem_id(o.experiment));
  std::vector<int> sizes = pr.points_per_axis;
  if (o.points_per_axis > 0) sizes = {o.points_per_axis};
  std::vector<LossKind> losses = all_loss_kinds();
  if (!o.loss.empty()) losses = {parse_loss_kind(o.loss)};

  std::vector<ResultRow> rows;
  bool failed = false;
  for (int n : sizes) {
    for (LossKind loss : losses) {
      const RunOutcome outcome = run_experiment(spec_from(o, n, loss));
      report_failures(outcome, failed);
      rows.insert(rows.end(), outcome.rows.begin(), outcome.rows.end());
      if (outcome.rows.size() > 1) std::cerr << "agreement " << loss_name(loss) << " n=" << n << ": "
                                              << loss_error_agreement(outcome) << "\n";
    }
  }
  write_rows(rows, o);
  return failed ? kNumerical : kOk;
}

int cmd_plot(const Options& o) {
  if (o.out.empty()) throw std::invalid_argument("plot requires --out");
  const Problem pr = make_problem(parse_problem_id(o.experiment));
  Raster raster;
  std::string title;
  if (o.field == "exact") {
    raster = render(ScalarField([&pr](const Eigen::Ref<const Eigen::VectorXd>& p) { return pr.u(p); }), o.resolution);
    title = pr.name + " exact solution";
  } else {
    if (o.checkpoint.empty()) throw std::invalid_argument("--field " + o.field + " requires --checkpoint");
    const Network net = load_checkpoint(o.checkpoint);
    if (o.field == "network") {
      raster = render(net, o.resolution);
      title = pr.name + " network";
    } else {
      BatchField err = [&](const Eigen::MatrixXd& X) {
        Eigen::VectorXd v = forward(net, X, false).value;
        for (Eigen::Index i = 0; i < X.rows(); ++i) v(i) = std::abs(v(i) - pr.u(X.row(i).transpose()));
        return v;
      };
      raster = render(err, o.resolution);
      title = pr.name + " |network - exact|";
    }
  }
  if (!raster.values.allFinite()) {
    std::cerr << "field has non-finite values\n";
    return kNumerical;
  }
  emit_plot(raster, o.out, title);
  return kOk;
}

int cmd_rates(const Options& o) {
  static const std::map<std::string, RateNorm> names{{"C", RateNorm::C},
                                                     {"Ltau", RateNorm::L_tau},
                                                     {"H1", RateNorm::H1},
                                                     {"H-1", RateNorm::Hminus1},
                                                     {"H12", RateNorm::H12_boundary}};
  const RateQuery q{names.at(o.rate_norm), {o.s, o.p, std::numeric_limits<double>::infinity(), o.dim}, o.tau};
  const RateResult r = expected_rate(q);
  std::vector<Record> records{{{"norm", o.rate_norm}, {"s", o.s}, {"p", o.p}, {"d", o.dim},
                               {"tau", o.tau}, {"exponent", r.exponent}, {"log_factor", r.log_factor}}};
  with_output(o, [&](std::ostream& out) { write_records(records, o, out); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent PINN losses: collocation grids, interpolation studies and training runs", "cpinn"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value file; flags on the command line take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "Output path (stdout when omitted; required by plot)");

  const std::string run_group = "Training";
  app.add_option("--experiment", o.experiment, "Poisson problem")->check(CLI::IsMember({1, 2, 3}))->group(run_group);
  app.add_option("--loss", o.loss, "Loss (train defaults to weighted; tables runs all four)")
      ->check(CLI::IsMember({"original", "weighted", "consistent-gamma", "consistent-l2"}))
      ->group(run_group);
  app.add_option("--points-per-axis", o.points_per_axis, "Uniform collocation grid size n (n x n points)")
      ->check(CLI::Range(2, 1000))
      ->group(run_group);
  app.add_option("--layers", o.layers, "Network depth L")->check(CLI::Range(1, 100))->group(run_group);
  app.add_option("--width", o.width, "Network width W")->check(CLI::Range(1, 10000))->group(run_group);
  app.add_option("--steps", o.steps, "ENGD iterations")->check(CLI::Range(1, 1000000))->group(run_group);
  app.add_option("--seed", o.seeds, "Seed list, e.g. 1,2,3")->delimiter(',')->group(run_group);
  app.add_option("--eval-points", o.eval_points, "H1 error grid size per axis")
      ->check(CLI::Range(2, 10000))
      ->group(run_group);
  app.add_option("--checkpoint-dir", o.checkpoint_dir, "Save trained networks here")->group(run_group);

  const std::string study_group = "Grids and studies";
  app.add_option("--level", o.level, "Grid level k")->check(CLI::Range(0, 12))->group(study_group);
  app.add_option("--order", o.order, "Interpolation order r (degree r-1)")->check(CLI::Range(2, 6))->group(study_group);
  app.add_option("--dim", o.dim, "Dimension d")->check(CLI::Range(1, 6))->group(study_group);
  app.add_option("--norm", o.norm, "Convergence norm")->check(CLI::IsMember({"linf", "l2"}))->group(study_group);
  app.add_option("--k-min", o.k_min, "First level")->check(CLI::Range(0, 12))->group(study_group);
  app.add_option("--k-max", o.k_max, "Last level")->check(CLI::Range(0, 12))->group(study_group);
  app.add_option("--function", o.function, "Test function")
      ->check(CLI::IsMember({"sinsin", "polynomial"}))
      ->group(study_group);
  app.add_option("--tau", o.taus, "L_tau exponents (norm-equivalence)")->delimiter(',')->group(study_group);
  app.add_option("--samples", o.samples, "Random functions per level")->check(CLI::Range(1, 100000))->group(study_group);

  const std::string plot_group = "Plotting";
  app.add_option("--field", o.field, "exact, network or error")
      ->check(CLI::IsMember({"exact", "network", "error"}))
      ->group(plot_group);
  app.add_option("--checkpoint", o.checkpoint, "Trained network for --field network/error")->group(plot_group);
  app.add_option("--resolution", o.resolution, "Raster size")->check(CLI::Range(1, 4000))->group(plot_group);

  const std::string rate_group = "Rates";
  app.add_option("--rate-norm", o.rate_norm, "C, Ltau, H1, H-1 or H12")
      ->check(CLI::IsMember({"C", "Ltau", "H1", "H-1", "H12"}))
      ->group(rate_group);
  app.add_option("--s", o.s, "Smoothness s")->group(rate_group);
  app.add_option("--p", o.p, "Integrability p (inf allowed)")->group(rate_group);
  app.add_option("--rate-tau", o.tau, "tau for Ltau")->group(rate_group);

  std::map<std::string, int (*)(const Options&)> commands{
      {"grid-info", cmd_grid_info},   {"interp-convergence", cmd_interp_convergence},
      {"norm-equivalence", cmd_norm_equivalence}, {"train", cmd_train},
      {"tables", cmd_tables},         {"plot", cmd_plot},
      {"rates", cmd_rates}};
  const std::map<std::string, std::string> help{
      {"grid-info", "Point counts of a dyadic (--level/--order/--dim) or uniform (--points-per-axis) grid"},
      {"interp-convergence", "Interpolation error per level and fitted slope"},
      {"norm-equivalence", "Discrete/continuous norm ratio bands"},
      {"train", "Train one loss on one grid for each seed"},
      {"tables", "Train all losses over the experiment's grid sizes"},
      {"plot", "SVG heatmap of the exact solution, a trained network or their difference"},
      {"rates", "Expected convergence exponent"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return commands.at(name)(o);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
