#include "cpinn/rates.hpp"

#include <doctest.h>

#include <cmath>

using namespace cpinn;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rate(RateNorm norm, double s, double p, int d, double tau = 2.0) {
  return expected_rate({norm, {s, p, kInf, d}, tau}).exponent;
}

}  // namespace

TEST_CASE("rate table examples") {
  CHECK(rate(RateNorm::C, 2, kInf, 2) == doctest::Approx(1.0));
  CHECK(rate(RateNorm::Hminus1, 2, kInf, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(rate(RateNorm::H12_boundary, 2, 2, 2) == doctest::Approx(1.0));
  CHECK(rate(RateNorm::L_tau, 2.5, 1, 2, 2.0) == doctest::Approx(1.25 - 0.5));
  CHECK(rate(RateNorm::H1, 3, 2, 2) == doctest::Approx(1.0));
  CHECK(solution_rate({2, kInf, kInf, 3}, {2, 2, kInf, 3}) == doctest::Approx(std::min(2.0 / 3.0, 0.5)));
}

TEST_CASE("log factor flag") {
  CHECK(expected_rate({RateNorm::Hminus1, {2.5, 1.0, kInf, 2}}).log_factor);
  CHECK_FALSE(expected_rate({RateNorm::Hminus1, {2.5, 1.5, kInf, 2}}).log_factor);
  CHECK_FALSE(expected_rate({RateNorm::Hminus1, {3.5, 1.0, kInf, 3}}).log_factor);
}

TEST_CASE("rate parameter ranges are enforced") {
  CHECK_THROWS(rate(RateNorm::H1, 3, 4, 2));
  CHECK_THROWS(rate(RateNorm::H12_boundary, 3, 4, 2));
  CHECK_THROWS(rate(RateNorm::C, 1, 1, 2));  // s <= d/p
  CHECK_THROWS(rate(RateNorm::C, 2, kInf, 1));
  CHECK_THROWS(rate(RateNorm::L_tau, 2, kInf, 2, 0.0));
}

TEST_CASE("level exponent converts between scales") {
  const RateQuery q{RateNorm::C, {2, kInf, kInf, 2}, 2.0};
  CHECK(level_exponent(q, 1.0) == 2.0);
  const RateQuery b{RateNorm::H12_boundary, {2, 2, kInf, 3}, 2.0};
  CHECK(level_exponent(b, 0.5) == 1.0);
}

TEST_CASE("monotone in s and in 1/p") {
  for (RateNorm norm : {RateNorm::C, RateNorm::L_tau, RateNorm::H1, RateNorm::Hminus1, RateNorm::H12_boundary}) {
    for (int d = 2; d <= 4; ++d) {
      for (double p : {1.0, 1.25, 1.5, 2.0}) {
        double prev = -1e300;
        for (double s = 4.5; s <= 8.0; s += 0.5) {
          const double a = rate(norm, s, p, d, 1.5);
          CHECK(a >= prev);
          prev = a;
        }
      }
      for (double s : {4.5, 6.0}) {
        double prev = 1e300;
        for (double inv_p = 0.5; inv_p <= 1.0; inv_p += 0.05) {
          const double a = rate(norm, s, 1.0 / inv_p, d, 1.5);
          CHECK(a <= prev + 1e-15);
          prev = a;
        }
      }
    }
  }
}

TEST_CASE("H^-1 rate is s/d for p >= delta") {
  for (int d = 2; d <= 4; ++d) {
    const double delta = 1.0 / (0.5 + 1.0 / d);
    for (double p : {delta, delta + 0.3, 4.0, kInf})
      CHECK(rate(RateNorm::Hminus1, 3.5, p, d) == doctest::Approx(3.5 / d));
  }
}

TEST_CASE("measure_rate") {
  CHECK(measure_rate({{3, 1.0}, {4, 0.25}, {5, 1.0 / 16}}) == doctest::Approx(2.0));
  CHECK(measure_rate({{3, 0.3}, {4, 0.3}, {5, 0.3}}) == doctest::Approx(0.0));
  CHECK_THROWS(measure_rate({{3, 1.0}, {4, 0.5}}));
  CHECK_THROWS(measure_rate({{3, 1.0}, {4, 0.0}, {5, 0.1}}));
  CHECK_THROWS(measure_rate({{3, 1.0}, {3, 0.5}, {3, 0.1}}));
}
