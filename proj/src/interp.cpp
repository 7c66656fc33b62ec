#include "cpinn/interp.hpp"

#include "cpinn/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpinn {

namespace {

// Multi-indices alpha with |alpha| <= deg in graded lexicographic order.
std::vector<Eigen::VectorXi> multi_indices(int dim, int deg) {
  std::vector<Eigen::VectorXi> out;
  for (int total = 0; total <= deg; ++total) {
    Eigen::VectorXi a = Eigen::VectorXi::Zero(dim);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == dim - 1) {
        a(pos) = left;
        out.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a(pos) = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, total);
  }
  return out;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

int lagrange_count(int r, int dim) { return static_cast<int>(std::lround(binomial(r - 1 + dim, dim))); }

Eigen::VectorXd ReferenceBasis::monomials(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  Eigen::VectorXd m(exponents.rows());
  for (Eigen::Index j = 0; j < exponents.rows(); ++j) {
    double v = 1.0;
    for (int a = 0; a < dim; ++a)
      for (int e = 0; e < exponents(j, a); ++e) v *= xi(a);
    m(j) = v;
  }
  return m;
}

Eigen::VectorXd ReferenceBasis::values(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return coeffs.transpose() * monomials(xi);
}

ReferenceBasis reference_basis(int r, int dim) {
  if (r < 2 || r > 6) throw std::invalid_argument("reference basis supports 2 <= r <= 6");
  if (dim < 1 || dim > 3) throw std::invalid_argument("reference basis supports dimensions 1..3");
  ReferenceBasis b;
  b.r = r;
  b.dim = dim;
  const auto alphas = multi_indices(dim, r - 1);
  const Eigen::Index n = static_cast<Eigen::Index>(alphas.size());
  b.nodes.resize(n, dim);
  b.exponents.resize(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    b.exponents.row(i) = alphas[i].transpose();
    b.nodes.row(i) = alphas[i].cast<double>().transpose() / static_cast<double>(r - 1);
  }
  Eigen::MatrixXd vandermonde(n, n);
  for (Eigen::Index i = 0; i < n; ++i) vandermonde.row(i) = b.monomials(b.nodes.row(i).transpose()).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vandermonde);
  if (!lu.isInvertible()) throw std::logic_error("singular Lagrange system on the reference simplex");
  b.coeffs = lu.inverse();
  return b;
}

double PiecewisePoly::eval_reference(std::size_t simplex, const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return nodal_values.row(static_cast<Eigen::Index>(simplex)).dot(basis->values(xi));
}

double PiecewisePoly::eval_on(std::size_t simplex, const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return eval_reference(simplex, mesh->simplices.at(simplex).pullback(p));
}

double PiecewisePoly::eval(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return eval_on(locate_simplex(*mesh, p), p);
}

Eigen::MatrixXi node_indices(const SimplicialMesh& mesh, const ReferenceBasis& basis, int per_axis) {
  if (basis.dim != mesh.simplex_dim()) throw std::invalid_argument("basis dimension does not match mesh");
  if (per_axis != (1 << mesh.k) * (basis.r - 1) + 1)
    throw std::invalid_argument("grid level/order does not match mesh level and basis order");
  const double scale = per_axis - 1;
  Eigen::MatrixXi idx(static_cast<Eigen::Index>(mesh.size()), basis.size());
  Eigen::VectorXi lattice(mesh.d);
  for (std::size_t s = 0; s < mesh.size(); ++s) {
    const Simplex& simplex = mesh.simplices[s];
    for (Eigen::Index j = 0; j < basis.size(); ++j) {
      const Point x = simplex.map(basis.nodes.row(j).transpose());
      for (int a = 0; a < mesh.d; ++a) lattice(a) = static_cast<int>(std::lround(x(a) * scale));
      Eigen::Index linear = 0;
      for (int a = 0; a < mesh.d; ++a) linear = linear * per_axis + lattice(a);
      idx(static_cast<Eigen::Index>(s), j) = static_cast<int>(linear);
    }
  }
  return idx;
}

PiecewisePoly interpolate(const TensorGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples,
                          std::shared_ptr<const SimplicialMesh> mesh,
                          std::shared_ptr<const ReferenceBasis> basis) {
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match grid size");
  if (mesh->ambient != Ambient::domain || mesh->d != grid.d || mesh->k != grid.k || basis->r != grid.r)
    throw std::invalid_argument("mesh/basis do not match the grid");
  const Eigen::MatrixXi idx = node_indices(*mesh, *basis, grid.per_axis);
  PiecewisePoly pp{std::move(mesh), std::move(basis), Eigen::MatrixXd(idx.rows(), idx.cols())};
  for (Eigen::Index s = 0; s < idx.rows(); ++s)
    for (Eigen::Index j = 0; j < idx.cols(); ++j) pp.nodal_values(s, j) = samples(idx(s, j));
  return pp;
}

PiecewisePoly interpolate(const TensorGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples) {
  auto mesh = std::make_shared<const SimplicialMesh>(kuhn_tucker_mesh(grid.k, grid.d, Ambient::domain));
  auto basis = std::make_shared<const ReferenceBasis>(reference_basis(grid.r, grid.d));
  return interpolate(grid, samples, std::move(mesh), std::move(basis));
}

PiecewisePoly boundary_interpolate(const BoundaryGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples,
                                   std::shared_ptr<const SimplicialMesh> mesh,
                                   std::shared_ptr<const ReferenceBasis> basis) {
  const TensorGrid& parent = grid.parent;
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match boundary grid size");
  if (mesh->ambient != Ambient::boundary || mesh->d != parent.d || mesh->k != parent.k || basis->r != parent.r)
    throw std::invalid_argument("mesh/basis do not match the boundary grid");
  const Eigen::MatrixXi idx = node_indices(*mesh, *basis, parent.per_axis);
  PiecewisePoly pp{std::move(mesh), std::move(basis), Eigen::MatrixXd(idx.rows(), idx.cols())};
  for (Eigen::Index s = 0; s < idx.rows(); ++s) {
    for (Eigen::Index j = 0; j < idx.cols(); ++j) {
      const Eigen::Index b = grid.boundary_index[static_cast<std::size_t>(idx(s, j))];
      if (b < 0) throw std::logic_error("boundary simplex node is not a boundary grid point");
      pp.nodal_values(s, j) = samples(b);
    }
  }
  return pp;
}

PiecewisePoly boundary_interpolate(const BoundaryGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& samples) {
  const TensorGrid& parent = grid.parent;
  auto mesh = std::make_shared<const SimplicialMesh>(kuhn_tucker_mesh(parent.k, parent.d, Ambient::boundary));
  auto basis = std::make_shared<const ReferenceBasis>(reference_basis(parent.r, parent.d - 1));
  return boundary_interpolate(grid, samples, std::move(mesh), std::move(basis));
}

Eigen::VectorXd sample(const Eigen::MatrixXd& points, const ScalarField& f) {
  Eigen::VectorXd v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v(i) = f(points.row(i).transpose());
  return v;
}

namespace {

double quad_lp_impl(const PiecewisePoly& pp, const ScalarField* f, double tau, int order) {
  if (!(tau >= 1.0)) throw std::invalid_argument("quad_norm_lp requires tau >= 1");
  const int n = pp.mesh->simplex_dim();
  const QuadratureRule rule = simplex_rule(n, order);
  Eigen::MatrixXd basis_at(rule.size(), pp.basis->size());
  for (Eigen::Index q = 0; q < rule.size(); ++q) basis_at.row(q) = pp.basis->values(rule.points.row(q).transpose());

  double total = 0.0;
  for (std::size_t s = 0; s < pp.mesh->size(); ++s) {
    const Simplex& simplex = pp.mesh->simplices[s];
    const double jac = simplex.measure() * std::tgamma(n + 1.0);
    const Eigen::VectorXd vals = basis_at * pp.nodal_values.row(static_cast<Eigen::Index>(s)).transpose();
    double local = 0.0;
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      double v = vals(q);
      if (f) v -= (*f)(simplex.map(rule.points.row(q).transpose()));
      local += rule.weights(q) * std::pow(std::abs(v), tau);
    }
    total += jac * local;
  }
  return std::pow(total, 1.0 / tau);
}

}  // namespace

double quad_norm_lp(const PiecewisePoly& pp, double tau, int order) { return quad_lp_impl(pp, nullptr, tau, order); }

double quad_error_lp(const PiecewisePoly& pp, const ScalarField& f, double tau, int order) {
  return quad_lp_impl(pp, &f, tau, order);
}

double sampled_sup_error(const PiecewisePoly& pp, const ScalarField& f, int n) {
  const int dim = pp.mesh->simplex_dim();
  // reference lattice alpha/n with |alpha| <= n
  std::vector<Eigen::VectorXd> lattice;
  Eigen::VectorXi a = Eigen::VectorXi::Zero(dim);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == dim) {
      lattice.push_back(a.cast<double>() / n);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a(pos) = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
  Eigen::MatrixXd basis_at(static_cast<Eigen::Index>(lattice.size()), pp.basis->size());
  for (std::size_t q = 0; q < lattice.size(); ++q) basis_at.row(q) = pp.basis->values(lattice[q]);

  double worst = 0.0;
  for (std::size_t s = 0; s < pp.mesh->size(); ++s) {
    const Simplex& simplex = pp.mesh->simplices[s];
    const Eigen::VectorXd vals = basis_at * pp.nodal_values.row(static_cast<Eigen::Index>(s)).transpose();
    for (std::size_t q = 0; q < lattice.size(); ++q)
      worst = std::max(worst, std::abs(vals(q) - f(simplex.map(lattice[q]))));
  }
  return worst;
}

namespace {

struct Panel {
  Eigen::Vector2d start;
  Eigen::Vector2d dir;  // end - start
  std::size_t simplex;
};

double panel_value(const PiecewisePoly& pp, const Panel& p, double t) {
  Eigen::Matrix<double, 1, 1> xi;
  xi(0) = t;
  return pp.eval_reference(p.simplex, xi);
}

// Tensor Gauss rule over [a0,a1] x [b0,b1] of the panel parameters (from a shared vertex
// when `flip` says so), integrand (g(s) - g(t))^2 / |z(s) - z(t)|^2 * |P| |Q|.
struct PairIntegrator {
  const PiecewisePoly& pp;
  const QuadratureRule& gl;

  double box(const Panel& P, const Panel& Q, bool flipP, bool flipQ, double a0, double a1, double b0,
             double b1) const {
    const double lp = P.dir.norm(), lq = Q.dir.norm();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < gl.size(); ++i) {
      const double sa = a0 + (a1 - a0) * gl.points(i, 0);
      const double s = flipP ? 1.0 - sa : sa;
      const Eigen::Vector2d z = P.start + s * P.dir;
      const double gs = panel_value(pp, P, s);
      for (Eigen::Index j = 0; j < gl.size(); ++j) {
        const double tb = b0 + (b1 - b0) * gl.points(j, 0);
        const double t = flipQ ? 1.0 - tb : tb;
        const Eigen::Vector2d w = Q.start + t * Q.dir;
        const double diff = gs - panel_value(pp, Q, t);
        sum += gl.weights(i) * gl.weights(j) * diff * diff / (z - w).squaredNorm();
      }
    }
    return sum * (a1 - a0) * (b1 - b0) * lp * lq;
  }

  // Same panel: 2 * int_{t<s} ((g(s)-g(t))/(s-t))^2 with s = u, t = u v.
  double self(const Panel& P) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < gl.size(); ++i) {
      const double u = gl.points(i, 0);
      const double gs = panel_value(pp, P, u);
      for (Eigen::Index j = 0; j < gl.size(); ++j) {
        const double t = u * gl.points(j, 0);
        const double q = (gs - panel_value(pp, P, t)) / (u - t);
        sum += gl.weights(i) * gl.weights(j) * u * q * q;
      }
    }
    return 2.0 * sum;
  }

  // Panels meeting at a vertex, graded toward it down to 2^-depth.
  double adjacent(const Panel& P, const Panel& Q, bool flipP, bool flipQ, int depth) const {
    double sum = 0.0;
    double hi = 1.0;
    for (int j = 0; j < depth; ++j) {
      const double lo = 0.5 * hi;
      sum += box(P, Q, flipP, flipQ, lo, hi, lo, hi);
      sum += box(P, Q, flipP, flipQ, 0.0, lo, lo, hi);
      sum += box(P, Q, flipP, flipQ, lo, hi, 0.0, lo);
      hi = lo;
    }
    return sum + box(P, Q, flipP, flipQ, 0.0, hi, 0.0, hi);
  }
};

}  // namespace

double quad_h12_seminorm(const PiecewisePoly& bpp, const H12Options& opts) {
  if (bpp.mesh->ambient != Ambient::boundary || bpp.mesh->d != 2)
    throw std::invalid_argument("quad_h12_seminorm supports boundary functions on the unit square only");
  std::vector<Panel> panels;
  panels.reserve(bpp.mesh->size());
  for (std::size_t s = 0; s < bpp.mesh->size(); ++s) {
    const Simplex& simplex = bpp.mesh->simplices[s];
    panels.push_back({simplex.vertices.col(0), simplex.vertices.col(1) - simplex.vertices.col(0), s});
  }
  const QuadratureRule gl = gauss_legendre(opts.gauss_points);
  const PairIntegrator integ{bpp, gl};

  struct Touch {
    std::size_t p, q;
    bool flipP, flipQ;
  };
  double smooth = 0.0;
  std::vector<Touch> touching;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    for (std::size_t j = 0; j < panels.size(); ++j) {
      if (i == j) {
        smooth += integ.self(panels[i]);
        continue;
      }
      const Eigen::Vector2d pi[2] = {panels[i].start, panels[i].start + panels[i].dir};
      const Eigen::Vector2d pj[2] = {panels[j].start, panels[j].start + panels[j].dir};
      bool found = false;
      for (int a = 0; a < 2 && !found; ++a)
        for (int b = 0; b < 2 && !found; ++b)
          if ((pi[a] - pj[b]).norm() < kFaceTolerance) {
            touching.push_back({i, j, a == 1, b == 1});
            found = true;
          }
      if (!found) smooth += integ.box(panels[i], panels[j], false, false, 0.0, 1.0, 0.0, 1.0);
    }
  }

  auto adjacent_total = [&](int depth) {
    double sum = 0.0;
    for (const Touch& t : touching) sum += integ.adjacent(panels[t.p], panels[t.q], t.flipP, t.flipQ, depth);
    return sum;
  };

  double prev = std::sqrt(smooth + adjacent_total(2));
  for (int depth = 3; depth <= opts.max_depth; ++depth) {
    const double cur = std::sqrt(smooth + adjacent_total(depth));
    if (cur == 0.0 || std::abs(cur - prev) <= opts.tol * cur) return cur;
    prev = cur;
  }
  throw std::runtime_error("quad_h12_seminorm did not converge within the panel refinement budget");
}

}  // namespace cpinn
