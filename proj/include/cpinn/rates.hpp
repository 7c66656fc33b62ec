#pragma once

// Optimal-recovery rate exponents for Besov model classes B^s_q(L_p) on the
// unit cube, and least-squares measurement of empirical convergence orders.
//
// expected_rate returns the exponent in the sample-count scale (error ~ m^-a).
// On a dyadic level-k grid m ~ 2^{kd} (2^{k(d-1)} on the boundary), so the
// exponent in the 2^-k scale is d * a (resp. (d-1) * a); see level_exponent.

#include <limits>
#include <utility>
#include <vector>

namespace cpinn {

struct SmoothnessClass {
  double s = 1.0;
  double p = std::numeric_limits<double>::infinity();
  double q = std::numeric_limits<double>::infinity();
  int d = 2;
};

enum class RateNorm { C, L_tau, H1, Hminus1, H12_boundary };

struct RateQuery {
  RateNorm norm = RateNorm::C;
  SmoothnessClass cls;  // for H12_boundary: the barred parameters s-bar, p-bar
  double tau = 2.0;     // L_tau only
};

struct RateResult {
  double exponent = 0.0;
  bool log_factor = false;  // H^-1, d = 2, p <= 1: rate holds up to a log(m) factor
};

RateResult expected_rate(const RateQuery& query);

/// Exponent of the level scale 2^-k matching an m-scale exponent.
double level_exponent(const RateQuery& query, double m_exponent);

/// min(alpha_{-1}, beta): the H^1 recovery exponent for the solution given the
/// classes of f (interior) and g (boundary trace).
double solution_rate(const SmoothnessClass& f_class, const SmoothnessClass& g_class);

/// Least-squares slope of log2(error) against -k.
double measure_rate(const std::vector<std::pair<int, double>>& errors);

}  // namespace cpinn
