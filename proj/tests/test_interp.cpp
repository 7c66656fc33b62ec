#include "cpinn/geometry.hpp"
#include "cpinn/interp.hpp"
#include "cpinn/quadrature.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cpinn;

namespace {

double sinsin(const Eigen::Ref<const Eigen::VectorXd>& p) {
  return std::sin(std::numbers::pi * p(0)) * std::sin(std::numbers::pi * p(1));
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const QuadratureRule q = gauss_legendre(5);
  CHECK(q.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  for (int p = 0; p <= 9; ++p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < q.weights.size(); ++i) s += q.weights(i) * std::pow(q.points(i, 0), p);
    CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
  }
}

TEST_CASE("simplex rules integrate monomials exactly") {
  // int_{T_0} x^a y^b = a! b! / (a+b+2)!
  const QuadratureRule q = simplex_rule(2, 6);
  CHECK(q.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
  auto fact = [](int n) { return std::tgamma(n + 1.0); };
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < q.weights.size(); ++i)
        s += q.weights(i) * std::pow(q.points(i, 0), a) * std::pow(q.points(i, 1), b);
      CHECK(s == doctest::Approx(fact(a) * fact(b) / fact(a + b + 2)).epsilon(1e-13));
    }
  const QuadratureRule q3 = simplex_rule(3, 4);
  CHECK(q3.weights.sum() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("reference basis examples") {
  const ReferenceBasis b = reference_basis(2, 2);
  REQUIRE(b.size() == 3);
  test::Draws draws(5);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Vector2d x(draws.uniform(), draws.uniform());
    // basis functions are barycentric coordinates 1-x-y, x, y at nodes (0,0), (1,0), (0,1)
    Eigen::VectorXd expected(3);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const Eigen::Vector2d nj = b.nodes.row(j).transpose();
      expected(j) = nj.isZero() ? 1.0 - x.sum() : (nj(0) == 1.0 ? x(0) : x(1));
    }
    CHECK((b.values(x) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK(reference_basis(2, 3).size() == 4);
  CHECK(reference_basis(3, 2).size() == 6);
  CHECK(lagrange_count(4, 3) == 20);
}

TEST_CASE("reference basis is nodal and a partition of unity") {
  test::Draws draws(17);
  for (int dim = 1; dim <= 3; ++dim) {
    for (int r = 2; r <= 6; ++r) {
      const ReferenceBasis b = reference_basis(r, dim);
      CHECK(b.size() == lagrange_count(r, dim));
      for (Eigen::Index i = 0; i < b.size(); ++i) {
        const Eigen::VectorXd v = b.values(b.nodes.row(i).transpose());
        for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(std::abs(v(j) - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
      for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd x = draws.point(dim);
        if (x.sum() > 1.0) x /= x.sum() * 1.01;
        CHECK(std::abs(b.values(x).sum() - 1.0) < 1e-10);
      }
    }
  }
  CHECK_THROWS(reference_basis(7, 2));
  CHECK_THROWS(reference_basis(1, 2));
}

TEST_CASE("interpolation reproduces constants and affine functions") {
  const TensorGrid g = interior_grid(1, 2, 2);
  const PiecewisePoly c = interpolate(g, Eigen::VectorXd::Constant(g.size(), 2.5));
  test::Draws draws(23);
  for (int t = 0; t < 50; ++t) CHECK(c.eval(draws.point(2)) == doctest::Approx(2.5).epsilon(1e-14));

  auto P = [](const Eigen::Ref<const Eigen::VectorXd>& x) { return 2.0 * x(0) - 3.0 * x(1) + 1.0; };
  const PiecewisePoly pp = interpolate(g, sample(g.points, P));
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd p = draws.point(2);
    CHECK(std::abs(pp.eval(p) - P(p)) < 1e-12);
  }
}

TEST_CASE("projector exactness on random P_r") {
  test::Draws draws(29);
  auto run = [&](int r, int k, int d) {
    const TensorGrid g = interior_grid(k, r, d);
    for (int s = 0; s < 50; ++s) {
      const test::RandomPoly P(r, d, draws);
      const PiecewisePoly pp = interpolate(g, sample(g.points, [&](const auto& x) { return P(x); }));
      double err = 0.0, scale = 0.0;
      for (int t = 0; t < 200; ++t) {
        const Eigen::VectorXd p = draws.point(d);
        err = std::max(err, std::abs(pp.eval(p) - P(p)));
        scale = std::max(scale, std::abs(P(p)));
      }
      CHECK(err <= 1e-10 * scale);
    }
  };
  for (int r = 2; r <= 4; ++r)
    for (int k = 0; k <= 2; ++k) run(r, k, 2);
  run(2, 1, 3);
  run(3, 1, 3);
}

TEST_CASE("interpolants are continuous across faces") {
  test::Draws draws(31);
  for (int d = 2; d <= 3; ++d) {
    const int k = 2, r = 3;
    const TensorGrid g = interior_grid(k, r, d);
    const Eigen::VectorXd values = draws.vector(g.size());
    const PiecewisePoly pp = interpolate(g, values);
    const SimplicialMesh& mesh = *pp.mesh;
    // points on the diagonal face x_0 = x_1 inside a cube, and on cube faces
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
      Eigen::VectorXd p = draws.point(d);
      if (t % 2 == 0)
        p(1) = p(0);
      else
        p(0) = std::round(p(0) * 4.0) / 4.0;
      std::vector<std::size_t> owners;
      for (std::size_t s = 0; s < mesh.size(); ++s)
        if (barycentric(mesh.simplices[s], p).minCoeff() > -1e-13) owners.push_back(s);
      REQUIRE(!owners.empty());
      const double v0 = pp.eval_on(owners.front(), p);
      for (std::size_t s : owners) CHECK(std::abs(pp.eval_on(s, p) - v0) < 1e-10);
      checked += owners.size() > 1;
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("boundary interpolation") {
  const BoundaryGrid b = boundary_grid(2, 2, 2);
  const PiecewisePoly c = boundary_interpolate(b, Eigen::VectorXd::Constant(b.size(), -1.5));
  test::Draws draws(37);
  for (int t = 0; t < 50; ++t) CHECK(c.eval(draws.boundary_point(2)) == doctest::Approx(-1.5));

  const PiecewisePoly x = boundary_interpolate(b, sample(b.points, [](const auto& z) { return z(0); }));
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd p = draws.boundary_point(2);
    CHECK(std::abs(x.eval(p) - p(0)) < 1e-12);
  }
}

TEST_CASE("boundary interpolant is the trace of the domain interpolant") {
  test::Draws draws(41);
  for (int d = 2; d <= 3; ++d) {
    for (int r = 2; r <= 3; ++r) {
      const TensorGrid g = interior_grid(1, r, d);
      const BoundaryGrid b = boundary_of(g);
      const Eigen::VectorXd v = draws.vector(g.size());
      Eigen::VectorXd tr(b.size());
      for (Eigen::Index i = 0; i < b.size(); ++i) tr(i) = v(b.parent_index[i]);
      const PiecewisePoly dom = interpolate(g, v);
      const PiecewisePoly bnd = boundary_interpolate(b, tr);
      for (int t = 0; t < 1000 / d; ++t) {
        const Eigen::VectorXd p = draws.boundary_point(d);
        CHECK(std::abs(dom.eval(p) - bnd.eval(p)) < 1e-12);
      }
    }
  }
}

TEST_CASE("sup-error ratio between levels for smooth data") {
  for (int k = 3; k <= 4; ++k) {
    const TensorGrid g0 = interior_grid(k, 2, 2), g1 = interior_grid(k + 1, 2, 2);
    const double e0 = sampled_sup_error(interpolate(g0, sample(g0.points, sinsin)), sinsin);
    const double e1 = sampled_sup_error(interpolate(g1, sample(g1.points, sinsin)), sinsin);
    CHECK(e0 / e1 >= 3.5);
  }
  auto g = [](const Eigen::Ref<const Eigen::VectorXd>& z) {
    return std::sin(2 * std::numbers::pi * z(0)) + std::cos(2 * std::numbers::pi * z(1));
  };
  test::Draws draws(43);
  std::vector<double> errs;
  for (int k = 3; k <= 5; ++k) {
    const BoundaryGrid b = boundary_grid(k, 2, 2);
    const PiecewisePoly pp = boundary_interpolate(b, sample(b.points, g));
    double e = 0.0;
    for (int face = 0; face < 4; ++face)
      for (int t = 0; t <= 4000; ++t) {
        Eigen::Vector2d p;
        p(face / 2) = face % 2;
        p(1 - face / 2) = t / 4000.0;
        e = std::max(e, std::abs(pp.eval(p) - g(p)));
      }
    errs.push_back(e);
  }
  CHECK(errs[0] / errs[1] >= 3.5);
  CHECK(errs[1] / errs[2] >= 3.5);
}

TEST_CASE("quadrature norms of simple functions") {
  const TensorGrid g = interior_grid(0, 2, 2);
  const PiecewisePoly c = interpolate(g, Eigen::VectorXd::Constant(g.size(), -3.0));
  CHECK(quad_norm_lp(c, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  const PiecewisePoly x = interpolate(g, sample(g.points, [](const auto& p) { return p(0); }));
  CHECK(quad_norm_lp(x, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(quad_norm_lp(x, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS(quad_norm_lp(x, 0.5));
}

TEST_CASE("h12 quadrature oracle") {
  const BoundaryGrid b = boundary_grid(1, 2, 2);
  const PiecewisePoly c = boundary_interpolate(b, Eigen::VectorXd::Constant(b.size(), 4.0));
  CHECK(quad_h12_seminorm(c) == doctest::Approx(0.0));

  const Eigen::VectorXd z1 = b.points.col(0);
  const PiecewisePoly g = boundary_interpolate(b, z1);
  const double coarse = quad_h12_seminorm(g, {1e-3, 10, 40});
  const double fine = quad_h12_seminorm(g, {1e-6, 10, 60});
  CHECK(std::abs(coarse - fine) <= 1e-3 * fine);
  CHECK(fine > 0.0);

  const PiecewisePoly g2 = boundary_interpolate(b, 2.0 * z1);
  CHECK(quad_h12_seminorm(g2) == doctest::Approx(2.0 * coarse).epsilon(1e-3));

  const PiecewisePoly dom = interpolate(interior_grid(1, 2, 2), Eigen::VectorXd::Zero(9));
  CHECK_THROWS(quad_h12_seminorm(dom));
  const BoundaryGrid b3 = boundary_grid(0, 2, 3);
  CHECK_THROWS(quad_h12_seminorm(boundary_interpolate(b3, Eigen::VectorXd::Zero(b3.size()))));
}

TEST_CASE("h12 oracle against a direct double integral") {
  // Independent check: brute-force midpoint rule on a fine uniform partition of
  // the boundary, skipping the diagonal cells (integrand is bounded there).
  const BoundaryGrid b = boundary_grid(1, 2, 2);
  test::Draws draws(47);
  const Eigen::VectorXd v = draws.vector(b.size());
  const PiecewisePoly g = boundary_interpolate(b, v);
  const int n = 800;  // per side
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> vals;
  for (int face = 0; face < 4; ++face)
    for (int t = 0; t < n; ++t) {
      Eigen::Vector2d p;
      p(face / 2) = face % 2;
      p(1 - face / 2) = (t + 0.5) / n;
      pts.push_back(p);
      vals.push_back(g.eval(p));
    }
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) s += std::pow(vals[i] - vals[j], 2) / (pts[i] - pts[j]).squaredNorm();
  const double brute = std::sqrt(s) / n;
  CHECK(quad_h12_seminorm(g, {1e-6, 10, 60}) == doctest::Approx(brute).epsilon(0.02));
}
