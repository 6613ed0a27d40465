#include "irgnm/observation.hpp"

#include <stdexcept>

#include "irgnm/random.hpp"

namespace irgnm {

Vector sample_observation(const Vector& y_true, const NoiseConfig& noise, long n) {
  if (n < 1) throw std::invalid_argument("sample_observation: observation indices are 1-based");
  if (noise.sigma < 0.0) throw std::invalid_argument("sample_observation: negative sigma");
  if (noise.sigma == 0.0) return y_true;
  Vector y(y_true.size());
  const auto stream = static_cast<std::uint64_t>(n);
  for (Index i = 0; i < y.size(); ++i)
    y[i] = y_true[i] + noise.sigma * normal_at(noise.seed, stream, static_cast<std::uint64_t>(i));
  return y;
}

AveragedData average_update(const AveragedData& zbar, const Vector& y_next) {
  if (zbar.count < 0) throw std::invalid_argument("average_update: negative count");
  if (zbar.count == 0) return {y_next, 1};
  if (zbar.z.size() != y_next.size())
    throw std::invalid_argument("average_update: dimension mismatch");
  AveragedData out;
  out.count = zbar.count + 1;
  out.z = zbar.z + (y_next - zbar.z) / static_cast<double>(out.count);
  return out;
}

double misfit(const Vector& g, const Vector& w, double ip_weight) {
  if (g.size() != w.size()) throw std::invalid_argument("misfit: dimension mismatch");
  if (ip_weight <= 0.0) throw std::invalid_argument("misfit: inner-product weight must be positive");
  return ip_weight * (0.5 * g.squaredNorm() - g.dot(w));
}

ObservationStream::ObservationStream(Vector y_true, NoiseConfig noise)
    : y_true_(std::move(y_true)), noise_(noise), synthetic_(true) {
  if (noise_.sigma < 0.0) throw std::invalid_argument("ObservationStream: negative sigma");
}

ObservationStream::ObservationStream(std::vector<Vector> recorded)
    : recorded_(std::move(recorded)), synthetic_(false) {
  if (recorded_.empty()) throw std::invalid_argument("ObservationStream: empty recording");
  for (const auto& y : recorded_)
    if (y.size() != recorded_.front().size())
      throw std::invalid_argument("ObservationStream: inconsistent recorded dimensions");
}

Vector ObservationStream::at(long n) const {
  if (synthetic_) return sample_observation(y_true_, noise_, n);
  if (n < 1 || static_cast<std::size_t>(n) > recorded_.size())
    throw std::out_of_range("ObservationStream: recorded sequence has no observation " +
                            std::to_string(n));
  return recorded_[static_cast<std::size_t>(n - 1)];
}

Index ObservationStream::dim() const {
  return synthetic_ ? y_true_.size() : recorded_.front().size();
}

}  // namespace irgnm
