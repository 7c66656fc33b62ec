#pragma once

// Dyadic collocation grids on the closed unit cube and Kuhn-Tucker
// (Freudenthal) simplicial meshes of the dyadic partitions of the cube and
// of its boundary.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace cpinn {

using Point = Eigen::VectorXd;

/// Tolerance used when deciding whether a coordinate sits on a face of the cube.
inline constexpr double kFaceTolerance = 1e-12;

/// Tensor-product grid G_{k,r}: per-axis coordinates j / (2^k (r-1)),
/// j = 0 .. 2^k (r-1). Points are stored as rows in lexicographic order
/// (first coordinate most significant).
struct TensorGrid {
  int k = 0;
  int r = 2;
  int d = 2;
  int per_axis = 2;
  Eigen::MatrixXd points;  // m_tilde x d

  Eigen::Index size() const { return points.rows(); }
  double spacing() const { return 1.0 / static_cast<double>(per_axis - 1); }

  /// Linear index of the lattice point with the given per-axis integer coordinates.
  Eigen::Index index_of(const Eigen::Ref<const Eigen::VectorXi>& lattice) const;
};

/// Boundary grid: the points of a TensorGrid lying on the boundary of the cube,
/// in parent order.
struct BoundaryGrid {
  TensorGrid parent;
  Eigen::MatrixXd points;                 // m_bar x d
  std::vector<Eigen::Index> parent_index;  // boundary row -> parent row
  std::vector<Eigen::Index> boundary_index;  // parent row -> boundary row, or -1

  Eigen::Index size() const { return points.rows(); }
};

enum class Ambient { domain, boundary };

/// One simplex of a Kuhn-Tucker decomposition. For a domain mesh the simplex
/// is d-dimensional; for a boundary mesh it is (d-1)-dimensional and lives on
/// the face {x_axis = side}.
struct Simplex {
  Eigen::VectorXi cube_index;  // dyadic cube multi-index (free coordinates for faces)
  std::vector<int> perm;       // local ordering x_perm[0] <= ... <= x_perm[n-1]
  int perm_rank = 0;           // lexicographic rank of perm
  int face_axis = -1;          // boundary meshes only
  int face_side = 0;
  Eigen::MatrixXd vertices;    // d x (n+1), columns are vertices

  int dim() const { return static_cast<int>(vertices.cols()) - 1; }
  Eigen::VectorXd origin() const { return vertices.col(0); }
  /// Columns v_i - v_0; the affine map is F(xi) = v_0 + edges() * xi.
  Eigen::MatrixXd edges() const;
  Point map(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// Reference coordinates of a point on the simplex's affine hull.
  Eigen::VectorXd pullback(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  /// n-dimensional measure of the simplex.
  double measure() const;
};

struct SimplicialMesh {
  int k = 0;
  int d = 2;
  Ambient ambient = Ambient::domain;
  std::vector<Simplex> simplices;

  int simplex_dim() const { return ambient == Ambient::domain ? d : d - 1; }
  std::size_t size() const { return simplices.size(); }
};

TensorGrid interior_grid(int k, int r, int d);
BoundaryGrid boundary_grid(int k, int r, int d);
/// Boundary points of a TensorGrid (any per-axis count), in parent order.
BoundaryGrid boundary_of(const TensorGrid& grid);

/// Uniform grid with n points per axis, coordinates j/(n-1). Not of the dyadic
/// form in general; used for the collocation grids of the experiments.
TensorGrid uniform_grid(int n, int d);

SimplicialMesh kuhn_tucker_mesh(int k, int d, Ambient ambient);

/// All permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> permutations(int n);

/// Owner simplex of p. Cubes are half-open with the top face folded into the
/// last cube; ties in the local ordering resolve to the lexicographically
/// smallest permutation. On the boundary, the first face (axis ascending,
/// side 0 before side 1) containing p owns it.
std::size_t locate_simplex(const SimplicialMesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& p);

/// Barycentric coordinates of p with respect to a simplex (length n+1).
Eigen::VectorXd barycentric(const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& p);

bool on_boundary(const Eigen::Ref<const Eigen::VectorXd>& p, double tol = kFaceTolerance);

}  // namespace cpinn
