#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "irgnm/darcy.hpp"
#include "irgnm/random.hpp"

using namespace irgnm;

namespace {

Vector rand_vec(Index dim, std::uint64_t seed, std::uint64_t stream) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = normal_at(seed, stream, static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace

TEST_SUITE("darcy") {
  TEST_CASE("unit conductivity reduces to the Poisson problem") {
    // -Lap p = 1 with homogeneous Dirichlet data has p(1/2, 1/2) =
    // 0.0736713512666705 (series value); an odd grid puts a node there.
    const Index n = 31;
    const DarcyProblem model(n);
    const Grid2D& g = model.grid();
    const Vector p = model.state_solution(Vector::Zero(g.size()), Vector::Ones(g.size()));
    const Index mid = (n - 1) / 2;
    REQUIRE(g.x(mid) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[g.idx(mid, mid)] == doctest::Approx(0.0736713512666705).epsilon(0.01));
  }

  TEST_CASE("zero load gives the zero pressure field") {
    const DarcyProblem model(9);
    const Vector z = Vector::Zero(model.dim_param());
    CHECK(model.state_solution(z, z).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("constant log-permeability shifts rescale the pressure exactly") {
    const DarcyProblem model(17);
    const Index d = model.dim_param();
    const Vector u = 0.5 * rand_vec(d, 2, 1);
    const Vector f = Vector::Ones(d);
    const double c = 0.7;
    const Vector base = model.state_solution(u, f);
    const Vector shifted = model.state_solution(u.array() + c, f);
    CHECK((shifted - std::exp(-c) * base).norm() / base.norm() < 1e-12);
  }

  TEST_CASE("restriction picks nodal values") {
    const DarcyProblem model(17);
    const Vector c = Vector::Constant(model.dim_param(), 3.25);
    const Vector r = model.restrict_to_obs(c);
    REQUIRE(r.size() == model.dim_obs());
    CHECK((r.array() == 3.25).all());
    REQUIRE(model.dim_obs() == 14 * 14);
  }

  TEST_CASE("derivative and adjoint vanish on zero input") {
    const DarcyProblem model(9);
    const auto lin = model.linearize(Vector::Zero(model.dim_param()));
    CHECK(lin->deriv(Vector::Zero(model.dim_param())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(lin->adjoint(Vector::Zero(model.dim_obs())).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("adjoint satisfies the duality relation") {
    const DarcyProblem model(17);
    const Index d = model.dim_param();
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      const Vector u = 0.4 * rand_vec(d, trial, 60);
      const auto lin = model.linearize(u);
      const Vector h = rand_vec(d, trial, 61);
      const Vector g = rand_vec(model.dim_obs(), trial, 62);
      const double a = model.inner_obs(lin->deriv(h), g);
      const double b = model.inner_param(h, lin->adjoint(g));
      CHECK(std::abs(a - b) / (std::abs(a) + 1e-300) < 1e-10);
    }
  }

  TEST_CASE("adjoint stays exact when observation points share a node") {
    // more monitoring points per side than grid nodes: snapping must
    // collide, and the transpose has to accumulate those entries
    const DarcyProblem model(5, 9);
    const Index d = model.dim_param();
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      const auto lin = model.linearize(0.3 * rand_vec(d, trial, 63));
      const Vector h = rand_vec(d, trial, 64);
      const Vector g = rand_vec(model.dim_obs(), trial, 65);
      const double a = model.inner_obs(lin->deriv(h), g);
      const double b = model.inner_param(h, lin->adjoint(g));
      CHECK(std::abs(a - b) / (std::abs(a) + 1e-300) < 1e-10);
    }
  }

  TEST_CASE("derivative matches finite differences at second order") {
    const DarcyProblem model(17);
    const Vector u = model.truth_field(TruthKind::smooth);
    const auto lin = model.linearize(u);
    Vector dir = rand_vec(model.dim_param(), 4, 2);
    dir /= model.grid().norm(dir);
    const Vector f0 = lin->value();
    const Vector jd = lin->deriv(dir);
    std::vector<double> lt, lr;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double r = (model.apply(u + t * dir) - f0 - t * jd).norm();
      lt.push_back(std::log(t));
      lr.push_back(std::log(r));
    }
    double mt = 0, mr = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) mt += lt[i], mr += lr[i];
    mt /= lt.size(), mr /= lr.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      num += (lt[i] - mt) * (lr[i] - mr);
      den += (lt[i] - mt) * (lt[i] - mt);
    }
    CHECK(num / den > 1.9);
    CHECK(num / den < 2.1);
  }

  TEST_CASE("dense jacobian agrees with directional derivatives") {
    const DarcyProblem model(7, 3);
    const auto lin = model.linearize(0.2 * rand_vec(model.dim_param(), 8, 3));
    const Matrix jac = lin->dense_jacobian();
    REQUIRE(jac.rows() == model.dim_obs());
    REQUIRE(jac.cols() == model.dim_param());
    Vector e = Vector::Zero(model.dim_param());
    for (Index i = 0; i < model.dim_param(); ++i) {
      e[i] = 1.0;
      CHECK((jac.col(i) - lin->deriv(e)).cwiseAbs().maxCoeff() < 1e-12);
      e[i] = 0.0;
    }
  }

  TEST_CASE("channel truth is two-valued and hits both values") {
    const DarcyProblem model(33);
    const Vector t = model.truth_field(TruthKind::discontinuous);
    bool saw0 = false, saw2 = false;
    for (Index i = 0; i < t.size(); ++i) {
      CHECK((t[i] == 0.0 || t[i] == 2.0));
      saw0 = saw0 || t[i] == 0.0;
      saw2 = saw2 || t[i] == 2.0;
    }
    CHECK(saw0);
    CHECK(saw2);
  }

  TEST_CASE("truth fields agree across nested grids") {
    // grid 2n+1 halves the spacing, so coarse node i coincides with fine
    // node 2i+1; the fixtures are plain functions of position and must
    // evaluate identically there
    const Index nc = 16, nf = 2 * nc + 1;
    const DarcyProblem coarse(nc), fine(nf);
    for (TruthKind kind : {TruthKind::smooth, TruthKind::discontinuous}) {
      const Vector tc = coarse.truth_field(kind);
      const Vector tf = fine.truth_field(kind);
      for (Index j = 0; j < nc; ++j)
        for (Index i = 0; i < nc; ++i)
          CHECK(tc[coarse.grid().idx(i, j)] == tf[fine.grid().idx(2 * i + 1, 2 * j + 1)]);
    }
  }

  TEST_CASE("conductivity overflow is reported") {
    const DarcyProblem model(9);
    Vector u = Vector::Zero(model.dim_param());
    u[4] = 800.0;
    CHECK_THROWS_WITH_AS(model.apply(u), doctest::Contains("overflowed or vanished"),
                         std::runtime_error);
  }

  TEST_CASE("mismatched sizes and empty lattices are rejected") {
    const DarcyProblem model(9);
    CHECK_THROWS_AS(model.apply(Vector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(model.restrict_to_obs(Vector::Zero(3)), std::invalid_argument);
    const auto lin = model.linearize(Vector::Zero(model.dim_param()));
    CHECK_THROWS_AS(lin->deriv(Vector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(lin->adjoint(Vector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(DarcyProblem(9, 0), std::invalid_argument);
  }
}
