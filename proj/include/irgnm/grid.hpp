#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace irgnm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Uniform grid of interior nodes on the unit square. With n nodes per
// direction the spacing is h = 1/(n+1); node (i, j), 0-based, i along x,
// sits at ((i+1)h, (j+1)h) and maps to flat index j*nx + i. Boundary
// nodes are not stored; Dirichlet data enters through the right-hand
// side of whatever operator lives on the grid.
struct Grid2D {
  Index nx = 0;
  Index ny = 0;
  double h = 0.0;

  Grid2D() = default;

  explicit Grid2D(Index n) : nx(n), ny(n) {
    if (n <= 0) throw std::invalid_argument("Grid2D: need at least one interior node");
    h = 1.0 / static_cast<double>(n + 1);
  }

  // Used when reloading fields from disk, where h travels in the header.
  Grid2D(Index nx_, Index ny_, double h_) : nx(nx_), ny(ny_), h(h_) {
    if (nx_ <= 0 || ny_ <= 0 || h_ <= 0.0)
      throw std::invalid_argument("Grid2D: bad extents or spacing");
  }

  Index size() const { return nx * ny; }
  Index idx(Index i, Index j) const { return j * nx + i; }
  double x(Index i) const { return static_cast<double>(i + 1) * h; }
  double y(Index j) const { return static_cast<double>(j + 1) * h; }

  // Quadrature weight of one node; h^2 * sum over nodes approximates the
  // integral over the square, which is the inner product every field norm
  // here is built from.
  double cell_weight() const { return h * h; }

  double norm(const Vector& v) const { return std::sqrt(cell_weight()) * v.norm(); }

  double inner(const Vector& a, const Vector& b) const { return cell_weight() * a.dot(b); }

  // Fills a vector with f evaluated at every interior node.
  template <class F>
  Vector eval(F&& f) const {
    Vector v(size());
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) v[idx(i, j)] = f(x(i), y(j));
    return v;
  }

  bool operator==(const Grid2D& o) const { return nx == o.nx && ny == o.ny && h == o.h; }
};

// Relative L2 distance to a reference field, mesh-weighted. The weight
// cancels in the quotient but is kept so the pieces remain meaningful on
// their own. A zero reference has no relative scale, hence the error.
inline double relative_error(const Vector& u, const Vector& u_ref, const Grid2D& g) {
  if (u.size() != u_ref.size())
    throw std::invalid_argument("relative_error: dimension mismatch");
  const double denom = g.norm(u_ref);
  if (denom == 0.0) throw std::invalid_argument("relative_error: reference field is zero");
  return g.norm(u - u_ref) / denom;
}

}  // namespace irgnm
