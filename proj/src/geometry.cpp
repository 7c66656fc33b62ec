#include "cpinn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cpinn {

namespace {

void check_grid_args(int k, int r, int d) {
  if (k < 0) throw std::invalid_argument("grid level k must be >= 0");
  if (r < 2) throw std::invalid_argument("order r must be >= 2 (interpolation nodes degenerate)");
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
}

Eigen::Index ipow(Eigen::Index base, int e) {
  Eigen::Index out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

TensorGrid lattice_grid(int per_axis, int d) {
  TensorGrid g;
  g.d = d;
  g.per_axis = per_axis;
  const Eigen::Index m = ipow(per_axis, d);
  g.points.resize(m, d);
  const double denom = static_cast<double>(per_axis - 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index rem = i;
    for (int a = d - 1; a >= 0; --a) {
      g.points(i, a) = static_cast<double>(rem % per_axis) / denom;
      rem /= per_axis;
    }
  }
  return g;
}

// Kuhn simplex of the unit cube for a local ordering x_perm[0] <= ... <= x_perm[n-1]:
// start at the origin and switch on coordinates from the largest to the smallest.
Eigen::MatrixXd kuhn_vertices(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n + 1);
  for (int i = 1; i <= n; ++i) {
    v.col(i) = v.col(i - 1);
    v(perm[n - i], i) = 1.0;
  }
  return v;
}

int rank_of(const std::vector<std::vector<int>>& perms, const std::vector<int>& p) {
  auto it = std::find(perms.begin(), perms.end(), p);
  return static_cast<int>(it - perms.begin());
}

// Cube index and local ordering of a point of [0,1]^n in the dyadic level-k partition.
void locate_in_cube(const Eigen::VectorXd& x, int k, Eigen::VectorXi& cube, std::vector<int>& perm) {
  const int n = static_cast<int>(x.size());
  const double scale = std::ldexp(1.0, k);
  const int last = (1 << k) - 1;
  Eigen::VectorXd local(n);
  cube.resize(n);
  for (int a = 0; a < n; ++a) {
    const double s = std::clamp(x(a), 0.0, 1.0) * scale;
    int j = static_cast<int>(std::floor(s));
    j = std::clamp(j, 0, last);
    cube(a) = j;
    local(a) = s - j;
  }
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) { return local(i) < local(j); });
}

std::size_t cube_linear(const Eigen::VectorXi& cube, int cubes_per_axis) {
  std::size_t idx = 0;
  for (Eigen::Index a = 0; a < cube.size(); ++a) idx = idx * cubes_per_axis + cube(a);
  return idx;
}

void check_in_cube(const Eigen::Ref<const Eigen::VectorXd>& p, int d) {
  if (p.size() != d) throw std::invalid_argument("point dimension does not match mesh dimension");
  for (Eigen::Index a = 0; a < p.size(); ++a) {
    if (!(p(a) >= -kFaceTolerance && p(a) <= 1.0 + kFaceTolerance))
      throw std::out_of_range("point outside the closed unit cube");
  }
}

}  // namespace

Eigen::Index TensorGrid::index_of(const Eigen::Ref<const Eigen::VectorXi>& lattice) const {
  Eigen::Index idx = 0;
  for (Eigen::Index a = 0; a < lattice.size(); ++a) idx = idx * per_axis + lattice(a);
  return idx;
}

Eigen::MatrixXd Simplex::edges() const {
  const int n = dim();
  return vertices.rightCols(n).colwise() - vertices.col(0);
}

Point Simplex::map(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return vertices.col(0) + edges() * xi;
}

Eigen::VectorXd Simplex::pullback(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  const Eigen::MatrixXd e = edges();
  const Eigen::VectorXd rhs = p - vertices.col(0);
  if (e.rows() == e.cols()) return e.partialPivLu().solve(rhs);
  return (e.transpose() * e).ldlt().solve(e.transpose() * rhs);
}

double Simplex::measure() const {
  const Eigen::MatrixXd e = edges();
  const int n = dim();
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (e.rows() == e.cols()) return std::abs(e.determinant()) / fact;
  return std::sqrt((e.transpose() * e).determinant()) / fact;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

TensorGrid interior_grid(int k, int r, int d) {
  check_grid_args(k, r, d);
  TensorGrid g = lattice_grid((1 << k) * (r - 1) + 1, d);
  g.k = k;
  g.r = r;
  return g;
}

TensorGrid uniform_grid(int n, int d) {
  if (n < 2) throw std::invalid_argument("uniform grid needs at least 2 points per axis");
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
  TensorGrid g = lattice_grid(n, d);
  g.k = -1;
  g.r = -1;
  return g;
}

bool on_boundary(const Eigen::Ref<const Eigen::VectorXd>& p, double tol) {
  for (Eigen::Index a = 0; a < p.size(); ++a) {
    if (std::abs(p(a)) <= tol || std::abs(p(a) - 1.0) <= tol) return true;
  }
  return false;
}

BoundaryGrid boundary_of(const TensorGrid& grid) {
  BoundaryGrid b;
  b.parent = grid;
  b.boundary_index.assign(static_cast<std::size_t>(grid.size()), -1);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (on_boundary(grid.points.row(i).transpose())) {
      b.boundary_index[i] = static_cast<Eigen::Index>(rows.size());
      rows.push_back(i);
    }
  }
  b.points.resize(static_cast<Eigen::Index>(rows.size()), grid.d);
  for (std::size_t j = 0; j < rows.size(); ++j) b.points.row(j) = grid.points.row(rows[j]);
  b.parent_index = std::move(rows);
  return b;
}

BoundaryGrid boundary_grid(int k, int r, int d) { return boundary_of(interior_grid(k, r, d)); }

SimplicialMesh kuhn_tucker_mesh(int k, int d, Ambient ambient) {
  if (k < 0) throw std::invalid_argument("mesh level k must be >= 0");
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
  if (k > 20) throw std::invalid_argument("mesh level k too large");

  SimplicialMesh mesh;
  mesh.k = k;
  mesh.d = d;
  mesh.ambient = ambient;
  const int n = ambient == Ambient::domain ? d : d - 1;
  const int cubes = 1 << k;
  const double h = std::ldexp(1.0, -k);
  const auto perms = permutations(n);
  std::vector<Eigen::MatrixXd> reference;
  reference.reserve(perms.size());
  for (const auto& p : perms) reference.push_back(kuhn_vertices(p));

  const std::size_t ncubes = static_cast<std::size_t>(ipow(cubes, n));
  const int nfaces = ambient == Ambient::domain ? 1 : 2 * d;
  mesh.simplices.reserve(ncubes * perms.size() * nfaces);

  for (int face = 0; face < nfaces; ++face) {
    const int axis = ambient == Ambient::domain ? -1 : face / 2;
    const int side = ambient == Ambient::domain ? 0 : face % 2;
    // free coordinates of the face, ascending
    std::vector<int> free_axes;
    for (int a = 0; a < d; ++a)
      if (a != axis) free_axes.push_back(a);

    for (std::size_t c = 0; c < ncubes; ++c) {
      Eigen::VectorXi cube(n);
      std::size_t rem = c;
      for (int a = n - 1; a >= 0; --a) {
        cube(a) = static_cast<int>(rem % cubes);
        rem /= cubes;
      }
      for (std::size_t q = 0; q < perms.size(); ++q) {
        Simplex s;
        s.cube_index = cube;
        s.perm = perms[q];
        s.perm_rank = static_cast<int>(q);
        s.face_axis = axis;
        s.face_side = side;
        s.vertices.resize(d, n + 1);
        for (int v = 0; v <= n; ++v) {
          if (axis >= 0) s.vertices(axis, v) = side;
          for (int a = 0; a < n; ++a)
            s.vertices(free_axes[a], v) = h * (cube(a) + reference[q](a, v));
        }
        mesh.simplices.push_back(std::move(s));
      }
    }
  }
  return mesh;
}

std::size_t locate_simplex(const SimplicialMesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& p) {
  check_in_cube(p, mesh.d);
  const int d = mesh.d;
  const int cubes = 1 << mesh.k;
  static thread_local std::vector<std::vector<int>> perm_cache[4];
  const int n = mesh.simplex_dim();
  if (n < 1 || n > 3) throw std::invalid_argument("simplex dimension outside supported range");
  auto& perms = perm_cache[n];
  if (perms.empty()) perms = permutations(n);
  const std::size_t per_cube = perms.size();
  const std::size_t ncubes = static_cast<std::size_t>(ipow(cubes, n));

  Eigen::VectorXi cube;
  std::vector<int> perm;
  if (mesh.ambient == Ambient::domain) {
    locate_in_cube(p, mesh.k, cube, perm);
    return cube_linear(cube, cubes) * per_cube + rank_of(perms, perm);
  }

  for (int face = 0; face < 2 * d; ++face) {
    const int axis = face / 2;
    const int side = face % 2;
    if (std::abs(p(axis) - side) > kFaceTolerance) continue;
    Eigen::VectorXd x(d - 1);
    for (int a = 0, j = 0; a < d; ++a)
      if (a != axis) x(j++) = p(a);
    locate_in_cube(x, mesh.k, cube, perm);
    return static_cast<std::size_t>(face) * ncubes * per_cube + cube_linear(cube, cubes) * per_cube +
           rank_of(perms, perm);
  }
  throw std::out_of_range("point is not on the boundary of the cube");
}

Eigen::VectorXd barycentric(const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const Eigen::VectorXd xi = s.pullback(p);
  Eigen::VectorXd lambda(xi.size() + 1);
  lambda(0) = 1.0 - xi.sum();
  lambda.tail(xi.size()) = xi;
  return lambda;
}

}  // namespace cpinn
