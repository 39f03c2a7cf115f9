#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ompsd/linalg.hpp"
#include "ompsd/model.hpp"
#include "ompsd/quantize.hpp"
#include "ompsd/sphere.hpp"

namespace ompsd {

// Ordered set of selected column indices (0-based), insertion order kept.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::size_t universe) : member_(universe, false) {}

  /// Throws ParamError on an out-of-range or duplicate index.
  void insert(std::size_t index);

  bool contains(std::size_t index) const { return index < member_.size() && member_[index]; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t universe() const { return member_.size(); }

  std::span<const std::size_t> indices() const { return indices_; }
  std::vector<std::size_t> complement() const;

  /// Indices in ascending order.
  std::vector<std::size_t> sorted() const;

 private:
  std::vector<std::size_t> indices_;
  std::vector<bool> member_;
};

struct LeastSquares {};
struct LeastSquaresThenFixedQuant {
  TernaryThreshold threshold;
};
struct EmbeddedSphereDecoder {
  PriorFamily prior = PriorFamily::Adapted;
};

/// Column order in which a support is handed to the sphere decoder: reverse
/// insertion order, so the first-selected column sits at depth 1.
std::vector<std::size_t> decode_order(const SupportSet& support);

/// Per-iteration signal estimator on the current support.
using EstimatorKind = std::variant<LeastSquares, LeastSquaresThenFixedQuant, EmbeddedSphereDecoder>;

struct OmpOptions {
  // Least-squares solves via a Gram-Schmidt QR extended by one column per
  // iteration. When false, thin_qr is recomputed from scratch every iteration.
  bool incremental_qr = true;
  Alphabet alphabet = Alphabet::binary();
};

struct OmpTrace {
  SupportSet support;
  Vector estimate;                     // length L, zero outside support
  std::vector<double> residual_norms;  // ||r|| after each iteration
  std::vector<double> r_condition;     // max|r_ii| / min|r_ii| per iteration (LS estimators)
  std::size_t iterations_run = 0;
  DecodeTally sd;                      // embedded decodes, empty otherwise
};

/// Greedy support extension for exactly E iterations. Each iteration
/// correlates the residual with every column, adds the unselected index of
/// largest |correlation| (lowest index on ties), re-estimates the signal on
/// the support with `estimator`, and recomputes the residual. No final
/// quantization is applied. `sigma2` and `s` are used only by the embedded
/// sphere decoder, which decodes iteration i with s_eff = min(s, i).
///
/// Throws ParamError unless E <= min(K, L) and sizes match; RankDeficient if
/// the selected columns lose rank.
OmpTrace omp_run(const Vector& y, const Matrix& a, std::size_t E, const EstimatorKind& estimator,
                 double sigma2, std::size_t s, const OmpOptions& options = {});

/// max_k |a_S^T (y - a x_hat)|_k over the selected columns; 0 for an empty support.
double residual_orthogonality_defect(const OmpTrace& trace, const Matrix& a, const Vector& y);

}  // namespace ompsd
