#pragma once

#include <memory>
#include <optional>

#include "irgnm/grid.hpp"

namespace irgnm {

enum class TruthKind { smooth, discontinuous };

// Frozen linearization of a forward map at one parameter point: the value
// F(u) plus the derivative and its adjoint as matrix-free actions. A
// linearization owns whatever factorizations it needs, so one driver run
// can hold its own without sharing mutable state with the model, which
// stays immutable and safe to use from several runs at once.
class Linearization {
 public:
  virtual ~Linearization() = default;

  virtual Index dim_param() const = 0;
  virtual Index dim_obs() const = 0;

  // F(u) at the expansion point.
  virtual const Vector& value() const = 0;

  // Directional derivative F'[u] du.
  virtual Vector deriv(const Vector& du) const = 0;

  // Adjoint F'[u]* g with respect to the model's observation and
  // parameter inner products, i.e. <F'h, g>_obs = <h, F'* g>_param for
  // all h, g.
  virtual Vector adjoint(const Vector& g) const = 0;

  // Dense Jacobian, observation rows by parameter columns. The fallback
  // probes unit directions and is only meant for small grids; models with
  // few observations override it with something cheaper.
  virtual Matrix dense_jacobian() const {
    Matrix jac(dim_obs(), dim_param());
    Vector e = Vector::Zero(dim_param());
    for (Index i = 0; i < dim_param(); ++i) {
      e[i] = 1.0;
      jac.col(i) = deriv(e);
      e[i] = 0.0;
    }
    return jac;
  }
};

// A differentiable map F from nodal parameter fields to observation
// vectors, together with the inner products of the two spaces. Both
// spaces are nodal with uniform quadrature, so each inner product is a
// scalar weight times the Euclidean one.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual Index dim_param() const = 0;
  virtual Index dim_obs() const = 0;

  virtual Vector apply(const Vector& u) const = 0;

  virtual std::unique_ptr<Linearization> linearize(const Vector& u) const = 0;

  virtual double obs_weight() const = 0;
  virtual double param_weight() const = 0;

  double inner_obs(const Vector& a, const Vector& b) const { return obs_weight() * a.dot(b); }
  double inner_param(const Vector& a, const Vector& b) const { return param_weight() * a.dot(b); }
  double norm_obs(const Vector& a) const { return std::sqrt(obs_weight()) * a.norm(); }
  double norm_param(const Vector& a) const { return std::sqrt(param_weight()) * a.norm(); }

  // Problem-specific replacement for the generic identity-prior update,
  // when the model has one (the potential problem solves a coupled
  // first-order optimality system instead of running an inner Krylov
  // loop). Empty means no specialization; results agree with the generic
  // step to linear-solver accuracy.
  virtual std::optional<Vector> native_step(const Linearization& lin, const Vector& u_n,
                                            const Vector& u_anchor, const Vector& w,
                                            double alpha) const {
    (void)lin;
    (void)u_n;
    (void)u_anchor;
    (void)w;
    (void)alpha;
    return std::nullopt;
  }
};

}  // namespace irgnm
