#include "irgnm/potential.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace irgnm {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// -Lap + diag(u) on the interior nodes, five-point stencil.
SparseMat assemble_operator(const Grid2D& g, const Vector& u) {
  const double ih2 = 1.0 / g.cell_weight();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(5 * g.size()));
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Index k = g.idx(i, j);
      trip.emplace_back(k, k, 4.0 * ih2 + u[k]);
      if (i > 0) trip.emplace_back(k, g.idx(i - 1, j), -ih2);
      if (i < g.nx - 1) trip.emplace_back(k, g.idx(i + 1, j), -ih2);
      if (j > 0) trip.emplace_back(k, g.idx(i, j - 1), -ih2);
      if (j < g.ny - 1) trip.emplace_back(k, g.idx(i, j + 1), -ih2);
    }
  SparseMat a(g.size(), g.size());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

// Dirichlet lifting: contributions of the boundary trace to the interior
// right-hand side through the stencil arms that leave the domain.
Vector boundary_load(const Grid2D& g, const PotentialProblem::BoundaryTrace& trace) {
  const double ih2 = 1.0 / g.cell_weight();
  Vector b = Vector::Zero(g.size());
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Index k = g.idx(i, j);
      if (i == 0) b[k] += trace(0.0, g.y(j)) * ih2;
      if (i == g.nx - 1) b[k] += trace(1.0, g.y(j)) * ih2;
      if (j == 0) b[k] += trace(g.x(i), 0.0) * ih2;
      if (j == g.ny - 1) b[k] += trace(g.x(i), 1.0) * ih2;
    }
  return b;
}

using StateSolver = Eigen::SimplicialLDLT<SparseMat>;

std::shared_ptr<StateSolver> factor_operator(const SparseMat& a) {
  auto solver = std::make_shared<StateSolver>();
  solver->compute(a);
  if (solver->info() != Eigen::Success)
    throw std::runtime_error("PotentialProblem: state operator factorization failed");
  const double dmin = solver->vectorD().minCoeff();
  if (!(dmin > 0.0))
    throw std::runtime_error(
        "PotentialProblem: state operator is singular or indefinite (smallest pivot " +
        std::to_string(dmin) + ")");
  return solver;
}

class PotentialLinearization : public Linearization {
 public:
  PotentialLinearization(const Grid2D& grid, std::shared_ptr<StateSolver> solver, Vector p)
      : grid_(grid), solver_(std::move(solver)), p_(std::move(p)) {}

  Index dim_param() const override { return grid_.size(); }
  Index dim_obs() const override { return grid_.size(); }

  const Vector& value() const override { return p_; }

  // d/du of the state at fixed data: v solves (-Lap + u) v = -du . p.
  Vector deriv(const Vector& du) const override {
    if (du.size() != grid_.size())
      throw std::invalid_argument("PotentialProblem: derivative direction has wrong size");
    return solver_->solve((-du.array() * p_.array()).matrix());
  }

  // Both inner products share the h^2 weight, so the adjoint matrix is
  // the plain transpose: solve the (self-adjoint) state operator once and
  // scale by -p.
  Vector adjoint(const Vector& g) const override {
    if (g.size() != grid_.size())
      throw std::invalid_argument("PotentialProblem: adjoint argument has wrong size");
    Vector lambda = solver_->solve(g);
    return (-lambda.array() * p_.array()).matrix();
  }

  const StateSolver& state_solver() const { return *solver_; }

 private:
  const Grid2D& grid_;
  std::shared_ptr<StateSolver> solver_;
  Vector p_;
};

}  // namespace

PotentialProblem::PotentialProblem(Index n, TruthKind truth) : grid_(n), truth_(truth) {
  const Vector t = truth_field();
  f_ = grid_.eval([](double x, double y) { return x + y; }).cwiseProduct(t);
}

double PotentialProblem::smooth_truth(double x, double y) {
  const double a = (x - 0.3) * (x - 0.3) + (y - 0.7) * (y - 0.7);
  const double b = (x - 0.7) * (x - 0.7) + (y - 0.35) * (y - 0.35);
  return std::exp(-100.0 * a) + 0.5 * std::exp(-100.0 * b);
}

double PotentialProblem::discontinuous_truth(double x, double y) {
  const double dx = x - 0.3, dy = y - 0.7;
  if (dx * dx + dy * dy < 0.15 * 0.15) return 1.0;
  if (x >= 0.6 && x <= 0.8 && y >= 0.2 && y <= 0.5) return 0.5;
  return 0.0;
}

Vector PotentialProblem::truth_field() const {
  return truth_ == TruthKind::smooth ? grid_.eval(&PotentialProblem::smooth_truth)
                                     : grid_.eval(&PotentialProblem::discontinuous_truth);
}

Vector PotentialProblem::exact_data() const {
  return grid_.eval([](double x, double y) { return x + y; });
}

Vector PotentialProblem::solve_state(const Vector& u, const Vector& f,
                                     const BoundaryTrace& g) const {
  if (u.size() != grid_.size() || f.size() != grid_.size())
    throw std::invalid_argument("PotentialProblem: field size does not match grid");
  auto solver = factor_operator(assemble_operator(grid_, u));
  return solver->solve(f + boundary_load(grid_, g));
}

Vector PotentialProblem::apply(const Vector& u) const {
  return solve_state(u, f_, [](double x, double y) { return x + y; });
}

std::unique_ptr<Linearization> PotentialProblem::linearize(const Vector& u) const {
  if (u.size() != grid_.size())
    throw std::invalid_argument("PotentialProblem: parameter size does not match grid");
  auto solver = factor_operator(assemble_operator(grid_, u));
  Vector p = solver->solve(f_ + boundary_load(grid_, [](double x, double y) { return x + y; }));
  return std::make_unique<PotentialLinearization>(grid_, std::move(solver), std::move(p));
}

std::optional<Vector> PotentialProblem::native_step(const Linearization& lin, const Vector& u_n,
                                                    const Vector& u_anchor, const Vector& w,
                                                    double alpha) const {
  const auto& plin = dynamic_cast<const PotentialLinearization&>(lin);
  const Vector& p = plin.value();
  if (u_n.size() != grid_.size() || u_anchor.size() != grid_.size() || w.size() != grid_.size())
    throw std::invalid_argument("PotentialProblem: step argument size mismatch");
  if (!(alpha > 0.0)) throw std::invalid_argument("PotentialProblem: alpha must be positive");

  const Index n = grid_.size();
  const SparseMat a = assemble_operator(grid_, u_n);

  // Assemble the 2n x 2n two-by-two block system.
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(10 * n + n));
  for (int ko = 0; ko < a.outerSize(); ++ko)
    for (SparseMat::InnerIterator it(a, ko); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      trip.emplace_back(n + it.row(), n + it.col(), it.value());
    }
  for (Index k = 0; k < n; ++k) {
    trip.emplace_back(k, n + k, 1.0);
    trip.emplace_back(n + k, k, -p[k] * p[k] / alpha);
  }
  SparseMat blk(2 * n, 2 * n);
  blk.setFromTriplets(trip.begin(), trip.end());

  Vector rhs(2 * n);
  rhs.head(n) = w - p;
  rhs.tail(n) = (u_n - u_anchor).cwiseProduct(p);

  Eigen::SparseLU<SparseMat> lu;
  lu.compute(blk);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("PotentialProblem: optimality-system factorization failed");
  const Vector sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("PotentialProblem: optimality-system solve failed");

  const Vector lambda = sol.head(n);
  return u_anchor - (lambda.cwiseProduct(p)) / alpha;
}

Vector PotentialProblem::kkt_step(const Vector& u_n, const Vector& u_anchor, const Vector& w,
                                  double alpha) const {
  auto lin = linearize(u_n);
  return *native_step(*lin, u_n, u_anchor, w, alpha);
}

}  // namespace irgnm
