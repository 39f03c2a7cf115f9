#pragma once

#include <cstddef>

#include "ompsd/linalg.hpp"
#include "ompsd/model.hpp"

namespace ompsd {

/// Positive dead-zone half-width of the ternary quantizer.
class TernaryThreshold {
 public:
  static constexpr double kDefault = 0.6;

  /// Throws ParamError unless tau > 0 and finite.
  explicit TernaryThreshold(double tau = kDefault);

  double tau() const { return tau_; }

  friend bool operator==(const TernaryThreshold&, const TernaryThreshold&) = default;

 private:
  double tau_;
};

/// Element-wise: 0 if |v_i| <= tau, otherwise the nearest symbol of C (for
/// the binary alphabet, sign(v_i)).
Vector quantize_fixed(const Vector& v, TernaryThreshold thr, const Alphabet& alphabet);

/// The s largest-magnitude entries go to their nearest symbol of C, everything
/// else to 0. Equal magnitudes rank lower index first. Throws ParamError if
/// s > v.size().
Vector quantize_top_s(const Vector& v, std::size_t s, const Alphabet& alphabet);

}  // namespace ompsd
