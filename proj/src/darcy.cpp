#include "irgnm/darcy.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

namespace irgnm {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using StateSolver = Eigen::SimplicialLDLT<SparseMat>;

Vector conductivities(const Vector& u) {
  Vector w = u.array().exp();
  for (Index k = 0; k < w.size(); ++k)
    if (!std::isfinite(w[k]) || !(w[k] > 0.0))
      throw std::runtime_error(
          "DarcyProblem: conductivity e^u overflowed or vanished at node " + std::to_string(k));
  return w;
}

// Face transmissibilities enter symmetrically; boundary faces take the
// interior node's own conductivity (constant extrapolation), which keeps
// the operator a function of interior values only and preserves the
// shift identity exactly.
SparseMat assemble_operator(const Grid2D& g, const Vector& w) {
  const double ih2 = 1.0 / g.cell_weight();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(5 * g.size()));
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Index k = g.idx(i, j);
      double diag = 0.0;
      const auto face = [&](Index ii, Index jj) {
        if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) {
          diag += w[k];  // boundary face
        } else {
          const Index nb = g.idx(ii, jj);
          const double t = 0.5 * (w[k] + w[nb]);
          diag += t;
          trip.emplace_back(k, nb, -t * ih2);
        }
      };
      face(i - 1, j);
      face(i + 1, j);
      face(i, j - 1);
      face(i, j + 1);
      trip.emplace_back(k, k, diag * ih2);
    }
  SparseMat a(g.size(), g.size());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

// M = d/du [A(u) p] at fixed p: sparse with the five-point pattern. Each
// face's transmissibility depends on the conductivities of its one or two
// nodes, and contributes its flux difference to the rows of both.
SparseMat assemble_residual_derivative(const Grid2D& g, const Vector& w, const Vector& p) {
  const double ih2 = 1.0 / g.cell_weight();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(8 * g.size()));
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Index k = g.idx(i, j);
      const auto boundary_face = [&]() { trip.emplace_back(k, k, w[k] * p[k] * ih2); };
      const auto interior_face = [&](Index nb) {
        const double d = (p[k] - p[nb]) * ih2;
        trip.emplace_back(k, k, 0.5 * w[k] * d);
        trip.emplace_back(k, nb, 0.5 * w[nb] * d);
        trip.emplace_back(nb, nb, -0.5 * w[nb] * d);
        trip.emplace_back(nb, k, -0.5 * w[k] * d);
      };
      if (i == 0) boundary_face();
      if (i == g.nx - 1)
        boundary_face();
      else
        interior_face(g.idx(i + 1, j));
      if (j == 0) boundary_face();
      if (j == g.ny - 1)
        boundary_face();
      else
        interior_face(g.idx(i, j + 1));
    }
  SparseMat m(g.size(), g.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

std::shared_ptr<StateSolver> factor_operator(const SparseMat& a) {
  auto solver = std::make_shared<StateSolver>();
  solver->compute(a);
  if (solver->info() != Eigen::Success)
    throw std::runtime_error("DarcyProblem: state operator factorization failed");
  const double dmin = solver->vectorD().minCoeff();
  if (!(dmin > 0.0))
    throw std::runtime_error(
        "DarcyProblem: state operator is singular or indefinite (smallest pivot " +
        std::to_string(dmin) + ")");
  return solver;
}

class DarcyLinearization : public Linearization {
 public:
  DarcyLinearization(const Grid2D& grid, const std::vector<Index>& obs,
                     std::shared_ptr<StateSolver> solver, SparseMat m, Vector p, Vector p_obs)
      : grid_(grid),
        obs_(obs),
        solver_(std::move(solver)),
        m_(std::move(m)),
        p_(std::move(p)),
        p_obs_(std::move(p_obs)) {}

  Index dim_param() const override { return grid_.size(); }
  Index dim_obs() const override { return static_cast<Index>(obs_.size()); }

  const Vector& value() const override { return p_obs_; }

  Vector deriv(const Vector& du) const override {
    if (du.size() != grid_.size())
      throw std::invalid_argument("DarcyProblem: derivative direction has wrong size");
    const Vector v = solver_->solve(m_ * du);
    Vector out(dim_obs());
    for (Index k = 0; k < out.size(); ++k) out[k] = -v[obs_[static_cast<std::size_t>(k)]];
    return out;
  }

  Vector adjoint(const Vector& g) const override {
    if (g.size() != dim_obs())
      throw std::invalid_argument("DarcyProblem: adjoint argument has wrong size");
    Vector spread = Vector::Zero(grid_.size());
    // += rather than =: on coarse grids several observation points can
    // snap to one node, and P^T accumulates their entries.
    for (Index k = 0; k < g.size(); ++k) spread[obs_[static_cast<std::size_t>(k)]] += g[k];
    const Vector lambda = solver_->solve(spread);
    return -(m_.transpose() * lambda) / grid_.cell_weight();
  }

  // K adjoint solves with the already-factored operator, much cheaper
  // than probing all parameter directions.
  Matrix dense_jacobian() const override {
    Matrix rhs = Matrix::Zero(grid_.size(), dim_obs());
    for (Index k = 0; k < dim_obs(); ++k) rhs(obs_[static_cast<std::size_t>(k)], k) = 1.0;
    const Matrix x = solver_->solve(rhs);
    return -(m_.transpose() * x).transpose();
  }

 private:
  const Grid2D& grid_;
  const std::vector<Index>& obs_;
  std::shared_ptr<StateSolver> solver_;
  SparseMat m_;
  Vector p_;
  Vector p_obs_;
};

}  // namespace

DarcyProblem::DarcyProblem(Index n, Index obs_per_side) : grid_(n), obs_per_side_(obs_per_side) {
  if (obs_per_side <= 0)
    throw std::invalid_argument("DarcyProblem: need at least one observation per side");
  obs_nodes_.reserve(static_cast<std::size_t>(obs_per_side * obs_per_side));
  const double spacing = 1.0 / static_cast<double>(obs_per_side + 1);
  const auto snap = [&](double coord) {
    const auto raw = static_cast<Index>(std::llround(coord * static_cast<double>(n + 1))) - 1;
    return std::max<Index>(0, std::min<Index>(n - 1, raw));
  };
  for (Index l = 0; l < obs_per_side; ++l)
    for (Index k = 0; k < obs_per_side; ++k)
      obs_nodes_.push_back(
          grid_.idx(snap(static_cast<double>(k + 1) * spacing), snap(static_cast<double>(l + 1) * spacing)));
}

std::vector<std::pair<double, double>> DarcyProblem::obs_points() const {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(obs_nodes_.size());
  for (Index node : obs_nodes_) {
    const Index i = node % grid_.nx;
    const Index j = node / grid_.nx;
    pts.emplace_back(grid_.x(i), grid_.y(j));
  }
  return pts;
}

Vector DarcyProblem::restrict_to_obs(const Vector& field) const {
  if (field.size() != grid_.size())
    throw std::invalid_argument("DarcyProblem: field size does not match grid");
  Vector out(dim_obs());
  for (Index k = 0; k < out.size(); ++k) out[k] = field[obs_nodes_[static_cast<std::size_t>(k)]];
  return out;
}

Vector DarcyProblem::state_solution(const Vector& u, const Vector& f) const {
  if (u.size() != grid_.size() || f.size() != grid_.size())
    throw std::invalid_argument("DarcyProblem: field size does not match grid");
  const Vector w = conductivities(u);
  auto solver = factor_operator(assemble_operator(grid_, w));
  return solver->solve(f);
}

Vector DarcyProblem::apply(const Vector& u) const {
  return restrict_to_obs(state_solution(u, Vector::Ones(grid_.size())));
}

std::unique_ptr<Linearization> DarcyProblem::linearize(const Vector& u) const {
  if (u.size() != grid_.size())
    throw std::invalid_argument("DarcyProblem: parameter size does not match grid");
  const Vector w = conductivities(u);
  auto solver = factor_operator(assemble_operator(grid_, w));
  Vector p = solver->solve(Vector::Ones(grid_.size()));
  SparseMat m = assemble_residual_derivative(grid_, w, p);
  Vector p_obs = restrict_to_obs(p);
  return std::make_unique<DarcyLinearization>(grid_, obs_nodes_, std::move(solver), std::move(m),
                                              std::move(p), std::move(p_obs));
}

double DarcyProblem::smooth_truth(double x, double y) {
  const double a = (x - 0.3) * (x - 0.3) + (y - 0.7) * (y - 0.7);
  const double b = (x - 0.7) * (x - 0.7) + (y - 0.35) * (y - 0.35);
  return std::exp(-100.0 * a) + 0.5 * std::exp(-100.0 * b);
}

double DarcyProblem::channel_truth(double x, double y) {
  const double center = 0.5 + 0.25 * std::sin(2.0 * 3.14159265358979323846 * x);
  return std::abs(y - center) < 0.12 ? 2.0 : 0.0;
}

Vector DarcyProblem::truth_field(TruthKind truth) const {
  return truth == TruthKind::smooth ? grid_.eval(&DarcyProblem::smooth_truth)
                                    : grid_.eval(&DarcyProblem::channel_truth);
}

}  // namespace irgnm
