#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "ompsd/rng.hpp"

namespace ompsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance on |r_ii| below which a factorization is rank deficient.
inline constexpr double kRankTolerance = 1e-12;

/// Thin QR factors of a K x d matrix: q is K x d with orthonormal columns, r is
/// d x d upper triangular with a strictly positive diagonal.
struct QrFactors {
  Matrix q;
  Matrix r;
};

/// Haar-distributed L x L orthogonal matrix: QR of an i.i.d. standard normal
/// matrix, signs of R's diagonal absorbed into Q.
Matrix generate_orthogonal(std::size_t L, Rng& rng);

/// K distinct rows of generate_orthogonal(L), chosen uniformly without
/// replacement, columns then scaled to unit norm. A selection producing a
/// (numerically) zero column is redrawn.
Matrix build_measurement_matrix(std::size_t L, std::size_t K, Rng& rng);

/// Householder thin QR with positive diagonal. Throws RankDeficient if some
/// |r_ii| < kRankTolerance * (largest column norm of m); ParamError if
/// m.rows() < m.cols().
QrFactors thin_qr(const Matrix& m);

/// Solves r * x = b for upper triangular r.
Vector back_substitute(const Matrix& r, const Vector& b);

/// argmin_v ||a_sub v - y||_2 via thin_qr. Throws RankDeficient.
Vector least_squares(const Matrix& a_sub, const Vector& y);

/// Columns of `a` listed in `indices`, in that order.
template <typename IndexRange>
Matrix select_columns(const Matrix& a, const IndexRange& indices) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(std::size(indices)));
  Eigen::Index c = 0;
  for (auto idx : indices) out.col(c++) = a.col(static_cast<Eigen::Index>(idx));
  return out;
}

// Thin QR grown one column at a time by Gram-Schmidt with one
// reorthogonalization pass. Tracks q^T y so that least-squares solutions over
// the current column set cost one back substitution.
class IncrementalQr {
 public:
  IncrementalQr(Eigen::Index rows, Eigen::Index max_cols, const Vector& y);

  /// Appends a column. Throws RankDeficient if it is numerically dependent on
  /// the columns already present.
  void append(const Eigen::Ref<const Vector>& column);

  Eigen::Index cols() const { return cols_; }
  Eigen::Ref<const Matrix> q() const { return q_.leftCols(cols_); }
  Eigen::Ref<const Matrix> r() const { return r_.topLeftCorner(cols_, cols_); }

  /// Least-squares coefficients for the columns appended so far.
  Vector solve() const;

 private:
  Matrix q_;
  Matrix r_;
  Vector qty_;
  Vector y_;
  Eigen::Index cols_ = 0;
  double max_col_norm_ = 0.0;
};

}  // namespace ompsd
