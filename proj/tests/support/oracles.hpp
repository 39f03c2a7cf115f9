#pragma once

// Test-only reference computations. Nothing here calls into the decoder or
// QR code it is used to check.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ompsd/linalg.hpp"
#include "ompsd/rng.hpp"
#include "ompsd/sphere.hpp"

namespace ompsd::testing {

inline Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.normal();
  return m;
}

inline Matrix unit_columns(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m = gaussian(rows, cols, rng);
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c).normalize();
  return m;
}

/// Modified Gram-Schmidt, written out by hand.
inline Matrix gram_schmidt(Matrix m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index p = 0; p < c; ++p) {
      double dot = 0.0;
      for (Eigen::Index r = 0; r < m.rows(); ++r) dot += m(r, p) * m(r, c);
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) -= dot * m(r, p);
    }
    double norm = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) norm += m(r, c) * m(r, c);
    norm = std::sqrt(norm);
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) /= norm;
  }
  return m;
}

/// Prior factor typed in from the sequential model: at a node with j
/// decisions left and `placed` nonzeros so far, a nonzero symbol has
/// probability (s - placed) / (2 j), zero (j - (s - placed)) / j.
inline double adapted_prior_binary(std::size_t s, std::size_t j, std::size_t placed, double symbol) {
  const double need = static_cast<double>(s) - static_cast<double>(placed);
  const double jj = static_cast<double>(j);
  const double p = symbol != 0.0 ? need / (2.0 * jj) : (jj - need) / jj;
  return p > 0.0 ? p : 0.0;
}

inline double binary_prior(const PriorKind& prior, std::size_t d, std::size_t j, std::size_t placed,
                           double symbol) {
  switch (prior.family) {
    case PriorFamily::Adapted: return adapted_prior_binary(prior.s_eff, j, placed, symbol);
    case PriorFamily::Fixed: {
      const double dd = static_cast<double>(d), s = static_cast<double>(prior.s_eff);
      return symbol == 0.0 ? (dd - s) / dd : s / (2.0 * dd);
    }
    case PriorFamily::Uniform: return 1.0 / 3.0;
  }
  return 0.0;
}

struct EnumeratedMap {
  Vector best;
  double best_metric = std::numeric_limits<double>::infinity();
  double second_metric = std::numeric_limits<double>::infinity();
  std::size_t admissible = 0;
};

/// Exhaustive MAP over {-1, 0, +1}^d with the binary alphabet, computed
/// without QR. The prior product runs from the last coordinate to the first.
inline EnumeratedMap enumerate_map(const Vector& y, const Matrix& a, double sigma2, const PriorKind& prior) {
  const auto d = static_cast<std::size_t>(a.cols());
  EnumeratedMap out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 3;
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < d; ++i) {
      v(static_cast<Eigen::Index>(i)) = static_cast<double>(rest % 3) - 1.0;
      rest /= 3;
    }
    double log_prior = 0.0;
    std::size_t placed = 0;
    bool ok = true;
    for (std::size_t k = d; k-- > 0;) {
      const double c = v(static_cast<Eigen::Index>(k));
      const double p = binary_prior(prior, d, k + 1, placed, c);
      if (p <= 0.0) {
        ok = false;
        break;
      }
      log_prior += std::log(p);
      if (c != 0.0) ++placed;
    }
    if (!ok) continue;
    ++out.admissible;
    double metric = 0.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      double e = y(r);
      for (Eigen::Index c = 0; c < a.cols(); ++c) e -= a(r, c) * v(c);
      metric += e * e;
    }
    if (sigma2 > 0.0) metric -= 2.0 * sigma2 * log_prior;
    if (metric < out.best_metric) {
      out.second_metric = out.best_metric;
      out.best_metric = metric;
      out.best = v;
    } else if (metric < out.second_metric) {
      out.second_metric = metric;
    }
  }
  return out;
}

}  // namespace ompsd::testing
