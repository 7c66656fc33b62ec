#pragma once

// Lagrange interpolation on Kuhn-Tucker meshes: the reference-simplex bases,
// the domain interpolant S*_k and the boundary interpolant, pointwise
// evaluation, and quadrature-based continuous norms (used as test oracles).

#include "cpinn/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>

namespace cpinn {

/// Lagrange basis of P_r (degree <= r-1) on the reference simplex, built on the
/// nodes alpha/(r-1), |alpha| <= r-1.
struct ReferenceBasis {
  int r = 2;
  int dim = 2;
  Eigen::MatrixXd nodes;      // n_r x dim
  Eigen::MatrixXi exponents;  // n_r x dim, monomial exponents
  Eigen::MatrixXd coeffs;     // n_r x n_r, column j holds phi_j in the monomial basis

  Eigen::Index size() const { return nodes.rows(); }
  Eigen::VectorXd monomials(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// All basis functions at xi.
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
};

ReferenceBasis reference_basis(int r, int dim);

/// binom(r - 1 + dim, dim), the dimension of P_r in dim variables.
int lagrange_count(int r, int dim);

/// Continuous piecewise polynomial stored as nodal values on every simplex.
struct PiecewisePoly {
  std::shared_ptr<const SimplicialMesh> mesh;
  std::shared_ptr<const ReferenceBasis> basis;
  Eigen::MatrixXd nodal_values;  // simplices x n_r

  /// Value at p using the owner simplex (locate_simplex).
  double eval(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  /// Value at p using the polynomial of a given simplex, bypassing ownership.
  double eval_on(std::size_t simplex, const Eigen::Ref<const Eigen::VectorXd>& p) const;
  double eval_reference(std::size_t simplex, const Eigen::Ref<const Eigen::VectorXd>& xi) const;
};

/// Grid row of each local Lagrange node of each simplex: simplices x n_r.
/// The grid must have per_axis = 2^k (r-1) + 1 for the mesh level k and basis order r.
Eigen::MatrixXi node_indices(const SimplicialMesh& mesh, const ReferenceBasis& basis, int per_axis);

PiecewisePoly interpolate(const TensorGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples,
                          std::shared_ptr<const SimplicialMesh> mesh,
                          std::shared_ptr<const ReferenceBasis> basis);
PiecewisePoly interpolate(const TensorGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples);

PiecewisePoly boundary_interpolate(const BoundaryGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples,
                                   std::shared_ptr<const SimplicialMesh> mesh,
                                   std::shared_ptr<const ReferenceBasis> basis);
PiecewisePoly boundary_interpolate(const BoundaryGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples);

using ScalarField = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

/// Samples f at every row of a point matrix.
Eigen::VectorXd sample(const Eigen::MatrixXd& points, const ScalarField& f);

/// (sum_T int_T |pp|^tau)^(1/tau) with a collapsed Gauss rule of `order`
/// points per direction on every simplex.
double quad_norm_lp(const PiecewisePoly& pp, double tau, int order = 8);

/// L_tau(Omega) norm of f - pp by the same simplex quadrature.
double quad_error_lp(const PiecewisePoly& pp, const ScalarField& f, double tau, int order = 8);

/// max |f - pp| over the reference lattice of spacing 1/n mapped to every simplex.
double sampled_sup_error(const PiecewisePoly& pp, const ScalarField& f, int n = 8);

struct H12Options {
  double tol = 1e-3;    // relative change between two refinement depths
  int gauss_points = 10;
  int max_depth = 40;   // panel refinement budget toward shared vertices
};

/// Intrinsic H^{1/2} seminorm on the boundary of the unit square,
/// (int int |g(z) - g(z')|^2 / |z - z'|^2 dz dz')^{1/2}, by panel-pair Gauss
/// quadrature. Panels sharing a vertex are refined dyadically toward that
/// vertex until the relative change drops below tol.
double quad_h12_seminorm(const PiecewisePoly& bpp, const H12Options& opts = {});

}  // namespace cpinn
