#pragma once

#include <vector>

#include "irgnm/forward_model.hpp"

namespace irgnm {

// Identification of the log-permeability u in
//   -div(e^u grad p) = f   in the unit square,
//                  p = 0   on the boundary,
// with unit load f = 1, observed pointwise at a regular lattice of
// monitoring locations snapped to the nearest grid nodes.
//
// Finite volumes on the interior nodes: the flux through the face between
// two neighboring nodes carries the arithmetic mean of the nodal e^u; a
// face touching the boundary carries the interior node's own e^u. A
// constant shift therefore scales the whole operator, giving the exact
// identity p(u + c) = e^{-c} p(u).
//
// The derivative is of the discretized residual A(u) p - f, so the
// Jacobian and its adjoint form an exact transpose pair:
//   F'[u] h   = -P A^{-1} (M h),     M = d/du [A(u) p] at fixed p,
//   F'[u]^* g = -(1/h^2) M^T A^{-1} (P^T g),
// where P picks the observed nodes, the observation space is plain
// Euclidean, and parameters carry the h^2 quadrature weight (hence the
// 1/h^2 in the adjoint).
class DarcyProblem : public ForwardModel {
 public:
  DarcyProblem(Index n, Index obs_per_side = 14);

  const Grid2D& grid() const { return grid_; }

  Index dim_param() const override { return grid_.size(); }
  Index dim_obs() const override {
    return static_cast<Index>(obs_nodes_.size());
  }
  double obs_weight() const override { return 1.0; }
  double param_weight() const override { return grid_.cell_weight(); }

  Vector apply(const Vector& u) const override;
  std::unique_ptr<Linearization> linearize(const Vector& u) const override;

  // Full pressure field for an arbitrary interior load.
  Vector state_solution(const Vector& u, const Vector& f) const;

  // Flat node indices of the observation locations, lattice row-major.
  const std::vector<Index>& obs_nodes() const { return obs_nodes_; }

  // Snapped coordinates of the observation locations.
  std::vector<std::pair<double, double>> obs_points() const;

  // Restriction of a full field to the observation nodes.
  Vector restrict_to_obs(const Vector& field) const;

  static double smooth_truth(double x, double y);

  // Piecewise-constant fixture: value 2 inside a sinusoidal band
  // sweeping across the domain, 0 outside. Deterministic; the same
  // formula evaluated on any grid.
  static double channel_truth(double x, double y);

  Vector truth_field(TruthKind truth) const;

 private:
  Grid2D grid_;
  Index obs_per_side_;
  std::vector<Index> obs_nodes_;
};

}  // namespace irgnm
