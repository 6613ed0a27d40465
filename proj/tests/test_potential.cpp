#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "irgnm/newton.hpp"
#include "irgnm/potential.hpp"
#include "irgnm/random.hpp"

using namespace irgnm;

namespace {

Vector rand_vec(Index dim, std::uint64_t seed, std::uint64_t stream) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = normal_at(seed, stream, static_cast<std::uint64_t>(i));
  return v;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("manufactured data is reproduced to solver precision") {
    const PotentialProblem model(33, TruthKind::smooth);
    const Vector p = model.apply(model.truth_field());
    CHECK((p - model.exact_data()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  TEST_CASE("zero load and zero trace give the zero state") {
    const PotentialProblem model(9, TruthKind::smooth);
    const Vector z = Vector::Zero(model.dim_param());
    const Vector p = model.solve_state(z, z, [](double, double) { return 0.0; });
    CHECK(p.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("state solver converges at second order") {
    // Reference with a genuinely curved solution: p = sin(pi x) sin(pi y),
    // potential u = x + y, so f = 2 pi^2 p + u p and the trace vanishes.
    auto error_on = [](Index n) {
      const PotentialProblem model(n, TruthKind::smooth);
      const Grid2D& g = model.grid();
      const Vector u = g.eval([](double x, double y) { return x + y; });
      const Vector pe = g.eval([](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
      const Vector f =
          (2.0 * kPi * kPi) * pe + u.cwiseProduct(pe);
      const Vector p = model.solve_state(u, f, [](double, double) { return 0.0; });
      return std::pair<double, double>(g.norm(p - pe), g.h);
    };
    const auto [e0, h0] = error_on(17);
    const auto [e1, h1] = error_on(33);
    const auto [e2, h2] = error_on(65);
    const double o01 = std::log(e0 / e1) / std::log(h0 / h1);
    const double o12 = std::log(e1 / e2) / std::log(h1 / h2);
    CHECK(o01 > 1.9);
    CHECK(o01 < 2.1);
    CHECK(o12 > 1.9);
    CHECK(o12 < 2.1);
  }

  TEST_CASE("derivative is linear and vanishes at zero") {
    const PotentialProblem model(9, TruthKind::smooth);
    const auto lin = model.linearize(model.truth_field());
    const Index d = model.dim_param();
    CHECK(lin->deriv(Vector::Zero(d)).cwiseAbs().maxCoeff() == 0.0);
    const Vector h1 = rand_vec(d, 3, 10), h2 = rand_vec(d, 3, 11);
    const Vector lhs = lin->deriv(2.0 * h1 - 0.5 * h2);
    const Vector rhs = 2.0 * lin->deriv(h1) - 0.5 * lin->deriv(h2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("derivative matches finite differences at second order") {
    const PotentialProblem model(17, TruthKind::smooth);
    const Vector u = model.truth_field();
    const auto lin = model.linearize(u);
    Vector dir = rand_vec(model.dim_param(), 5, 1);
    dir /= model.grid().norm(dir);
    const Vector f0 = lin->value();
    const Vector jd = lin->deriv(dir);
    std::vector<double> lt, lr;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double r = model.grid().norm(model.apply(u + t * dir) - f0 - t * jd);
      lt.push_back(std::log(t));
      lr.push_back(std::log(r));
    }
    // least-squares slope of log r against log t
    double mt = 0, mr = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) mt += lt[i], mr += lr[i];
    mt /= lt.size(), mr /= lr.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      num += (lt[i] - mt) * (lr[i] - mr);
      den += (lt[i] - mt) * (lt[i] - mt);
    }
    const double slope = num / den;
    CHECK(slope > 1.9);
    CHECK(slope < 2.1);
  }

  TEST_CASE("adjoint satisfies the duality relation") {
    for (Index n : {9, 17, 33}) {
      const PotentialProblem model(n, TruthKind::smooth);
      const Index d = model.dim_param();
      for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const Vector u = model.truth_field() + 0.5 * rand_vec(d, trial, 20);
        const auto lin = model.linearize(u);
        const Vector h = rand_vec(d, trial, 21);
        const Vector g = rand_vec(d, trial, 22);
        const double a = model.inner_obs(lin->deriv(h), g);
        const double b = model.inner_param(h, lin->adjoint(g));
        CHECK(std::abs(a - b) / (std::abs(a) + 1e-300) < 1e-8);
      }
    }
  }

  TEST_CASE("state operator is self-adjoint") {
    const PotentialProblem model(17, TruthKind::discontinuous);
    const Grid2D& g = model.grid();
    const Vector u = model.truth_field();
    const auto zero_trace = [](double, double) { return 0.0; };
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      const Vector f1 = rand_vec(g.size(), trial, 30);
      const Vector f2 = rand_vec(g.size(), trial, 31);
      const Vector p1 = model.solve_state(u, f1, zero_trace);
      const Vector p2 = model.solve_state(u, f2, zero_trace);
      const double a = g.inner(p1, f2);
      const double b = g.inner(f1, p2);
      CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
    }
  }

  TEST_CASE("optimality-system step keeps a consistent anchor fixed") {
    const PotentialProblem model(9, TruthKind::smooth);
    const Vector u0 = model.truth_field();
    const Vector w = model.apply(u0);
    const Vector u = model.kkt_step(u0, u0, w, 1e-2);
    CHECK((u - u0).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("optimality-system step equals the conjugate-gradient step") {
    const PotentialProblem model(9, TruthKind::smooth);
    const Index d = model.dim_param();
    const double alphas[] = {1.0, 1e-1, 1e-2};
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
      const Vector u_n = model.truth_field() + 0.2 * rand_vec(d, trial, 40);
      const Vector anchor = 0.1 * rand_vec(d, trial, 41);
      const Vector w = model.exact_data() + 0.05 * rand_vec(d, trial, 42);
      const double alpha = alphas[trial];
      const Vector via_kkt = model.kkt_step(u_n, anchor, w, alpha);
      const Vector via_cg = gn_step_identity(model, u_n, anchor, w, alpha, 1e-13);
      CHECK((via_kkt - via_cg).norm() / via_kkt.norm() < 1e-8);
    }
  }

  TEST_CASE("large regularization scales the update inversely") {
    const PotentialProblem model(17, TruthKind::smooth);
    const Index d = model.dim_param();
    const Vector u0 = Vector::Zero(d);
    Vector r = rand_vec(d, 9, 50);
    r *= 1e-6 / model.grid().norm(r);
    const Vector w = model.apply(u0) + r;
    const double n1 = (model.kkt_step(u0, u0, w, 1.0) - u0).norm();
    const double n2 = (model.kkt_step(u0, u0, w, 2.0) - u0).norm();
    CHECK(n1 / n2 == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("truth fields take their designed values") {
    CHECK(PotentialProblem::smooth_truth(0.3, 0.7) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(PotentialProblem::discontinuous_truth(0.7, 0.35) == 0.5);
    CHECK(PotentialProblem::discontinuous_truth(0.05, 0.05) == 0.0);
    CHECK(PotentialProblem::discontinuous_truth(0.3, 0.7) == 1.0);
    const PotentialProblem model(33, TruthKind::discontinuous);
    const Vector t = model.truth_field();
    for (Index i = 0; i < t.size(); ++i)
      CHECK((t[i] == 0.0 || t[i] == 0.5 || t[i] == 1.0));
  }

  TEST_CASE("an indefinite state operator is reported, not silently used") {
    const PotentialProblem model(9, TruthKind::smooth);
    const Vector u = Vector::Constant(model.dim_param(), -1e6);
    CHECK_THROWS_WITH_AS(model.apply(u),
                         doctest::Contains("singular or indefinite"), std::runtime_error);
  }

  TEST_CASE("mismatched field sizes are rejected") {
    const PotentialProblem model(9, TruthKind::smooth);
    CHECK_THROWS_AS(model.apply(Vector::Zero(5)), std::invalid_argument);
    CHECK_THROWS_AS(model.linearize(Vector::Zero(5)), std::invalid_argument);
    const auto lin = model.linearize(model.truth_field());
    CHECK_THROWS_AS(lin->deriv(Vector::Zero(5)), std::invalid_argument);
    CHECK_THROWS_AS(lin->adjoint(Vector::Zero(5)), std::invalid_argument);
  }
}
