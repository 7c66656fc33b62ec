#include "cpinn/geometry.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>
#include <stdexcept>

using namespace cpinn;

namespace {

Eigen::Index ipow(Eigen::Index b, int e) {
  Eigen::Index out = 1;
  while (e-- > 0) out *= b;
  return out;
}

bool lex_less(const Eigen::MatrixXd& P, Eigen::Index i, Eigen::Index j) {
  for (Eigen::Index a = 0; a < P.cols(); ++a) {
    if (P(i, a) < P(j, a)) return true;
    if (P(i, a) > P(j, a)) return false;
  }
  return false;
}

}  // namespace

TEST_CASE("interior grid examples") {
  const TensorGrid g0 = interior_grid(0, 2, 2);
  CHECK(g0.size() == 4);
  CHECK(g0.per_axis == 2);

  const TensorGrid g1 = interior_grid(1, 2, 2);
  CHECK(g1.per_axis == 3);
  CHECK(g1.size() == 9);
  CHECK(g1.spacing() == 0.5);

  const TensorGrid g4 = interior_grid(0, 4, 2);
  CHECK(g4.per_axis == 4);
  CHECK(g4.size() == 16);
  const double expected[] = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  for (int j = 0; j < 4; ++j) CHECK(g4.points(j, 1) == doctest::Approx(expected[j]).epsilon(1e-15));
}

TEST_CASE("grid arguments are validated") {
  CHECK_THROWS_AS(interior_grid(0, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(interior_grid(0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(interior_grid(-1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(boundary_grid(0, 1, 2), std::invalid_argument);
}

TEST_CASE("grid and boundary counts by enumeration") {
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k <= 2; ++k) {
      for (int r = 2; r <= 3; ++r) {
        const TensorGrid g = interior_grid(k, r, d);
        const Eigen::Index n = (Eigen::Index(1) << k) * (r - 1) + 1;
        CHECK(g.size() == ipow(n, d));
        for (Eigen::Index i = 0; i + 1 < g.size(); ++i) CHECK(lex_less(g.points, i, i + 1));

        const BoundaryGrid b = boundary_grid(k, r, d);
        Eigen::Index on = 0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
          if (on_boundary(g.points.row(i).transpose())) ++on;
        CHECK(b.size() == on);
        CHECK(b.size() == ipow(n, d) - ipow(n - 2, d));
        for (Eigen::Index i = 0; i < b.size(); ++i) {
          CHECK(on_boundary(b.points.row(i).transpose()));
          CHECK(b.points.row(i) == g.points.row(b.parent_index[i]));
          CHECK(b.boundary_index[b.parent_index[i]] == i);
          if (i > 0) CHECK(b.parent_index[i - 1] < b.parent_index[i]);
        }
      }
    }
  }
}

TEST_CASE("boundary grid examples") {
  CHECK(boundary_grid(0, 2, 2).size() == 4);
  CHECK(boundary_grid(1, 2, 2).size() == 8);
  CHECK(boundary_grid(1, 2, 3).size() == 26);
}

TEST_CASE("spacing is exact on dyadic grids") {
  const TensorGrid g = interior_grid(3, 3, 2);
  const double h = g.spacing();
  CHECK(h == 1.0 / 16.0);
  for (int j = 0; j + 1 < g.per_axis; ++j) CHECK(g.points(j + 1, 1) - g.points(j, 1) == h);
}

TEST_CASE("uniform grids split into interior and boundary sums") {
  const TensorGrid g = uniform_grid(5, 2);
  CHECK(g.size() == 25);
  CHECK(boundary_of(g).size() == 16);
  CHECK(boundary_of(uniform_grid(40, 2)).size() == 156);
}

TEST_CASE("mesh simplex counts") {
  CHECK(kuhn_tucker_mesh(0, 2, Ambient::domain).size() == 2);
  CHECK(kuhn_tucker_mesh(1, 2, Ambient::domain).size() == 8);
  CHECK(kuhn_tucker_mesh(0, 3, Ambient::domain).size() == 6);
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k <= 2; ++k) {
      const Eigen::Index fact = d == 2 ? 2 : 6;
      const Eigen::Index fact_b = d == 2 ? 1 : 2;
      CHECK(kuhn_tucker_mesh(k, d, Ambient::domain).size() == static_cast<std::size_t>(fact * ipow(2, k * d)));
      CHECK(kuhn_tucker_mesh(k, d, Ambient::boundary).size() ==
            static_cast<std::size_t>(2 * d * fact_b * ipow(2, k * (d - 1))));
    }
  }
}

TEST_CASE("simplex volumes partition the cube") {
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k <= 3; ++k) {
      double vol = 0.0;
      const SimplicialMesh mesh = kuhn_tucker_mesh(k, d, Ambient::domain);
      for (const Simplex& s : mesh.simplices) {
        CHECK(s.measure() > 0.0);
        vol += s.measure();
      }
      CHECK(vol == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  double area = 0.0;
  for (const Simplex& s : kuhn_tucker_mesh(2, 3, Ambient::boundary).simplices) area += s.measure();
  CHECK(area == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("simplices of a cube have disjoint interiors") {
  // Every interior point of the unit cube lies strictly inside exactly one simplex.
  test::Draws draws(11);
  for (int d = 2; d <= 3; ++d) {
    const SimplicialMesh mesh = kuhn_tucker_mesh(0, d, Ambient::domain);
    for (int t = 0; t < 500; ++t) {
      const Eigen::VectorXd p = draws.point(d);
      int inside = 0;
      for (const Simplex& s : mesh.simplices)
        if (barycentric(s, p).minCoeff() > 1e-12) ++inside;
      CHECK(inside == 1);
    }
  }
}

TEST_CASE("locate_simplex returns a containing simplex") {
  test::Draws draws(3);
  for (int d = 2; d <= 3; ++d) {
    for (int k : {0, 2, 3}) {
      const SimplicialMesh mesh = kuhn_tucker_mesh(k, d, Ambient::domain);
      for (int t = 0; t < 10000 / (d * 3); ++t) {
        const Eigen::VectorXd p = draws.point(d);
        const Eigen::VectorXd lam = barycentric(mesh.simplices[locate_simplex(mesh, p)], p);
        CHECK(lam.minCoeff() >= -1e-12);
        CHECK(lam.maxCoeff() <= 1.0 + 1e-12);
      }
      const SimplicialMesh bmesh = kuhn_tucker_mesh(k, d, Ambient::boundary);
      for (int t = 0; t < 300; ++t) {
        const Eigen::VectorXd p = draws.boundary_point(d);
        const Simplex& s = bmesh.simplices[locate_simplex(bmesh, p)];
        const Eigen::VectorXd lam = barycentric(s, p);
        CHECK(lam.minCoeff() >= -1e-12);
        CHECK((s.map(s.pullback(p)) - p).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("locate_simplex examples and ownership rules") {
  const SimplicialMesh m0 = kuhn_tucker_mesh(0, 2, Ambient::domain);
  const Simplex& below = m0.simplices[locate_simplex(m0, Eigen::Vector2d(0.7, 0.2))];
  CHECK(below.perm == std::vector<int>{1, 0});  // y <= x
  const Simplex& tie = m0.simplices[locate_simplex(m0, Eigen::Vector2d(0.5, 0.5))];
  CHECK(tie.perm == std::vector<int>{0, 1});
  CHECK(tie.perm_rank == 0);

  const SimplicialMesh m1 = kuhn_tucker_mesh(1, 2, Ambient::domain);
  const Simplex& corner = m1.simplices[locate_simplex(m1, Eigen::Vector2d(1.0, 1.0))];
  CHECK(corner.cube_index == Eigen::Vector2i(1, 1));

  CHECK_THROWS(locate_simplex(m1, Eigen::Vector2d(1.5, 0.2)));
  const SimplicialMesh b1 = kuhn_tucker_mesh(1, 2, Ambient::boundary);
  CHECK_THROWS_AS(locate_simplex(b1, Eigen::Vector2d(0.5, 0.5)), std::out_of_range);
  // A corner belongs to the first face containing it: axis 0, side 0.
  CHECK(b1.simplices[locate_simplex(b1, Eigen::Vector2d(0.0, 1.0))].face_axis == 0);
  CHECK(b1.simplices[locate_simplex(b1, Eigen::Vector2d(0.0, 1.0))].face_side == 0);
}

TEST_CASE("node incidence matches dim P_r") {
  // |closure(T) cap G_{k,r}| = binom(r-1+d, d)
  for (int d = 2; d <= 3; ++d) {
    for (int r = 2; r <= 4; ++r) {
      const int k = 1;
      const TensorGrid g = interior_grid(k, r, d);
      const SimplicialMesh mesh = kuhn_tucker_mesh(k, d, Ambient::domain);
      int expected = 1;
      for (int i = 1; i <= d; ++i) expected = expected * (r - 1 + i) / i;
      for (std::size_t t = 0; t < mesh.size(); t += 3) {
        int count = 0;
        for (Eigen::Index i = 0; i < g.size(); ++i)
          if (barycentric(mesh.simplices[t], g.points.row(i).transpose()).minCoeff() > -1e-12) ++count;
        CHECK(count == expected);
      }
    }
  }
}

TEST_CASE("permutations are lexicographic") {
  const auto p = permutations(3);
  REQUIRE(p.size() == 6);
  CHECK(p.front() == std::vector<int>{0, 1, 2});
  CHECK(p.back() == std::vector<int>{2, 1, 0});
  CHECK(std::set<std::vector<int>>(p.begin(), p.end()).size() == 6);
}
