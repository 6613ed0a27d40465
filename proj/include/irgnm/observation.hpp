#pragma once

#include <cstdint>

#include "irgnm/grid.hpp"

namespace irgnm {

// Additive white-noise model for repeated measurements of the same exact
// data: Y_n = y_true + sigma * xi_n with xi_n standard normal, one
// independent stream per observation index n >= 1.
struct NoiseConfig {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// n-th observation of y_true; deterministic in (seed, n) and bit-identical
// on replay. sigma = 0 returns y_true itself.
Vector sample_observation(const Vector& y_true, const NoiseConfig& noise, long n);

// Running mean of the observations seen so far. count = 0 means no data
// yet; the first update makes z = Y_1 exactly.
struct AveragedData {
  Vector z;
  long count = 0;
};

// Folds the next observation into the mean:
//   z <- (count * z + y_next) / (count + 1).
// Numerically the update is the equivalent z + (y - z)/(count + 1) form,
// which keeps the recursion agreeing with the batch mean at large counts.
AveragedData average_update(const AveragedData& zbar, const Vector& y_next);

// Data-fidelity functional S(g; w) = 1/2 <g,g> - <g,w> with the weighted
// Euclidean inner product <a,b> = ip_weight * a.b. Differs from the
// squared distance 1/2 ||g-w||^2 only by a g-independent constant, so it
// can be negative; its minimizer over g is w.
double misfit(const Vector& g, const Vector& w, double ip_weight = 1.0);

// Deterministic generator view of a measurement process: at(n) is the n-th
// observation, recomputable at random access. A stream either synthesizes
// from (y_true, noise) or replays a prerecorded sequence.
class ObservationStream {
 public:
  ObservationStream(Vector y_true, NoiseConfig noise);
  explicit ObservationStream(std::vector<Vector> recorded);

  Vector at(long n) const;
  Index dim() const;
  const NoiseConfig& noise() const { return noise_; }

 private:
  Vector y_true_;
  NoiseConfig noise_;
  std::vector<Vector> recorded_;
  bool synthetic_ = true;
};

}  // namespace irgnm
