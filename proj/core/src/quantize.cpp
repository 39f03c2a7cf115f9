#include "ompsd/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ompsd/errors.hpp"

namespace ompsd {

TernaryThreshold::TernaryThreshold(double tau) : tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ParamError("TernaryThreshold: tau must be > 0");
}

Vector quantize_fixed(const Vector& v, TernaryThreshold thr, const Alphabet& alphabet) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = std::abs(v(i)) <= thr.tau() ? 0.0 : alphabet.nearest_nonzero(v(i));
  return out;
}

Vector quantize_top_s(const Vector& v, std::size_t s, const Alphabet& alphabet) {
  const auto n = static_cast<std::size_t>(v.size());
  if (s > n) throw ParamError("quantize_top_s: s exceeds vector length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v(static_cast<Eigen::Index>(a))) > std::abs(v(static_cast<Eigen::Index>(b)));
  });
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = 0; k < s; ++k) {
    const auto i = static_cast<Eigen::Index>(order[k]);
    out(i) = alphabet.nearest_nonzero(v(i));
  }
  return out;
}

}  // namespace ompsd
