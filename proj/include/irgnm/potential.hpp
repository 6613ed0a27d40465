#pragma once

#include <functional>

#include "irgnm/forward_model.hpp"

namespace irgnm {

// Identification of the zero-order coefficient u in
//   -Lap p + u p = f   in the unit square,
//            p = g     on the boundary,
// from full-field interior values of p. Five-point finite differences on
// the interior nodes; the Dirichlet trace enters the right-hand side.
//
// f and g are manufactured from the chosen truth so that the exact state
// is p(x, y) = x + y on the nose: f = (x + y) * truth and g = x + y. The
// five-point Laplacian annihilates linear functions, so the discrete
// solve reproduces x + y to solver precision and the noise-free data
// needs no fine-grid crime avoidance.
//
// Both inner products (full-field observations and parameters live on the
// same nodes) carry the h^2 quadrature weight.
class PotentialProblem : public ForwardModel {
 public:
  using BoundaryTrace = std::function<double(double, double)>;

  PotentialProblem(Index n, TruthKind truth);

  const Grid2D& grid() const { return grid_; }
  TruthKind truth_kind() const { return truth_; }

  Index dim_param() const override { return grid_.size(); }
  Index dim_obs() const override { return grid_.size(); }
  double obs_weight() const override { return grid_.cell_weight(); }
  double param_weight() const override { return grid_.cell_weight(); }

  Vector apply(const Vector& u) const override;
  std::unique_ptr<Linearization> linearize(const Vector& u) const override;
  std::optional<Vector> native_step(const Linearization& lin, const Vector& u_n,
                                    const Vector& u_anchor, const Vector& w,
                                    double alpha) const override;

  // Solves -Lap p + u p = f, p = g on the boundary, for arbitrary interior
  // load f and boundary trace g.
  Vector solve_state(const Vector& u, const Vector& f, const BoundaryTrace& g) const;

  // One regularized Gauss-Newton update via the first-order optimality
  // system of the linearized penalized functional: with A = -Lap + diag
  // u_n and p = F(u_n), solve
  //   [ A                I ] [lambda]   [ w - p            ]
  //   [ -diag(p)^2/alpha A ] [  v   ] = [ (u_n - u0) . p   ]
  // and return u = u0 - lambda . p / alpha. Equivalent to the normal
  // equations (F'* F' + alpha I)(u - u_n) = F'*(w - F(u_n)) + alpha (u0 -
  // u_n) up to linear-solver accuracy, at the cost of one sparse solve.
  Vector kkt_step(const Vector& u_n, const Vector& u_anchor, const Vector& w, double alpha) const;

  static double smooth_truth(double x, double y);
  static double discontinuous_truth(double x, double y);

  Vector truth_field() const;

  // Noise-free data p(x, y) = x + y at the interior nodes, exact by the
  // manufactured construction.
  Vector exact_data() const;

 private:
  Grid2D grid_;
  TruthKind truth_;
  Vector f_;  // manufactured load (x + y) * truth at interior nodes
};

}  // namespace irgnm
