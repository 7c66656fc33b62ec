#include "cpinn/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpinn {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }
double pos(double x) { return std::max(x, 0.0); }

void check_class(const SmoothnessClass& c) {
  if (c.d < 2) throw std::invalid_argument("rate: d must be >= 2");
  if (!(c.p > 0.0) || !(c.q > 0.0)) throw std::invalid_argument("rate: p and q must be positive");
  if (!(c.s > 0.0)) throw std::invalid_argument("rate: s must be positive");
  if (!(c.s > c.d * inv(c.p))) throw std::invalid_argument("rate: class must embed in C (s > d/p)");
}

}  // namespace

RateResult expected_rate(const RateQuery& query) {
  const SmoothnessClass& c = query.cls;
  check_class(c);
  const double d = c.d;
  const double ip = inv(c.p);
  RateResult out;
  switch (query.norm) {
    case RateNorm::C:
      out.exponent = c.s / d - ip;
      break;
    case RateNorm::L_tau:
      if (!(query.tau > 0.0)) throw std::invalid_argument("rate: tau must be positive");
      out.exponent = c.s / d - pos(ip - inv(query.tau));
      break;
    case RateNorm::H1:
      if (c.p > 2.0) throw std::invalid_argument("rate: H^1 recovery requires p <= 2");
      out.exponent = (c.s - 1.0) / d - (ip - 0.5);
      break;
    case RateNorm::Hminus1: {
      const double inv_delta = 0.5 + 1.0 / d;
      out.exponent = c.s / d - pos(ip - inv_delta);
      out.log_factor = c.d == 2 && c.p <= 1.0;
      break;
    }
    case RateNorm::H12_boundary:
      if (c.p > 2.0) throw std::invalid_argument("rate: boundary recovery requires p-bar <= 2");
      out.exponent = (c.s - 1.0) / (d - 1.0) - d / (d - 1.0) * (ip - 0.5);
      break;
  }
  return out;
}

double level_exponent(const RateQuery& query, double m_exponent) {
  const int dim = query.norm == RateNorm::H12_boundary ? query.cls.d - 1 : query.cls.d;
  return dim * m_exponent;
}

double solution_rate(const SmoothnessClass& f_class, const SmoothnessClass& g_class) {
  const double alpha = expected_rate({RateNorm::Hminus1, f_class, 2.0}).exponent;
  const double beta = expected_rate({RateNorm::H12_boundary, g_class, 2.0}).exponent;
  return std::min(alpha, beta);
}

double measure_rate(const std::vector<std::pair<int, double>>& errors) {
  if (errors.size() < 3) throw std::invalid_argument("measure_rate needs at least 3 levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, e] : errors) {
    if (!(e > 0.0)) throw std::invalid_argument("measure_rate needs positive errors");
    const double x = -static_cast<double>(k);
    const double y = std::log2(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(errors.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("measure_rate needs distinct levels");
  return (n * sxy - sx * sy) / den;
}

}  // namespace cpinn
