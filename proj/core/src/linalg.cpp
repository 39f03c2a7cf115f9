#include "ompsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ompsd/errors.hpp"

namespace ompsd {

Matrix generate_orthogonal(std::size_t L, Rng& rng) {
  if (L == 0) throw ParamError("generate_orthogonal: L must be >= 1");
  const auto n = static_cast<Eigen::Index>(L);
  Matrix g(n, n);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = rng.normal();
  return thin_qr(g).q;
}

Matrix build_measurement_matrix(std::size_t L, std::size_t K, Rng& rng) {
  if (K == 0 || K > L) throw ParamError("build_measurement_matrix: need 1 <= K <= L");
  const Matrix u = generate_orthogonal(L, rng);
  const auto rows = static_cast<Eigen::Index>(K);
  const auto cols = static_cast<Eigen::Index>(L);

  std::vector<std::size_t> perm(L);
  Matrix a(rows, cols);
  for (;;) {
    // Partial Fisher-Yates: the first K slots become a uniform K-subset.
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < K; ++i) {
      const std::size_t j = i + rng.below(L - i);
      std::swap(perm[i], perm[j]);
    }
    for (Eigen::Index r = 0; r < rows; ++r) a.row(r) = u.row(static_cast<Eigen::Index>(perm[r]));

    bool degenerate = false;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double norm = a.col(c).norm();
      if (!(norm >= kRankTolerance)) {
        degenerate = true;
        break;
      }
      a.col(c) /= norm;
    }
    if (!degenerate) return a;
  }
}

QrFactors thin_qr(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows < cols || cols == 0) throw ParamError("thin_qr: need rows >= cols >= 1");

  double max_col_norm = 0.0;
  for (Eigen::Index c = 0; c < cols; ++c) max_col_norm = std::max(max_col_norm, m.col(c).norm());

  const Eigen::HouseholderQR<Matrix> qr(m);
  QrFactors out;
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * Matrix::Identity(rows, cols);

  for (Eigen::Index i = 0; i < cols; ++i) {
    const double d = out.r(i, i);
    if (!(std::abs(d) > 0.0 && std::abs(d) >= kRankTolerance * max_col_norm)) {
      throw RankDeficient("thin_qr: |r(" + std::to_string(i) + "," + std::to_string(i) +
                          ")| below rank tolerance");
    }
    if (d < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

Vector back_substitute(const Matrix& r, const Vector& b) {
  return r.triangularView<Eigen::Upper>().solve(b);
}

Vector least_squares(const Matrix& a_sub, const Vector& y) {
  if (a_sub.rows() != y.size()) throw ParamError("least_squares: dimension mismatch");
  const QrFactors f = thin_qr(a_sub);
  return back_substitute(f.r, f.q.transpose() * y);
}

IncrementalQr::IncrementalQr(Eigen::Index rows, Eigen::Index max_cols, const Vector& y)
    : q_(rows, max_cols), r_(Matrix::Zero(max_cols, max_cols)), qty_(max_cols), y_(y) {
  if (y.size() != rows) throw ParamError("IncrementalQr: dimension mismatch");
}

void IncrementalQr::append(const Eigen::Ref<const Vector>& column) {
  if (cols_ == q_.cols()) throw ParamError("IncrementalQr: capacity exhausted");
  if (column.size() != q_.rows()) throw ParamError("IncrementalQr: dimension mismatch");
  max_col_norm_ = std::max(max_col_norm_, column.norm());

  Vector v = column;
  auto coeffs = r_.col(cols_).head(cols_);
  coeffs.setZero();
  // Classical Gram-Schmidt twice ("twice is enough").
  for (int pass = 0; pass < 2; ++pass) {
    if (cols_ == 0) break;
    const Vector h = q_.leftCols(cols_).transpose() * v;
    v.noalias() -= q_.leftCols(cols_) * h;
    coeffs += h;
  }
  const double norm = v.norm();
  if (!(norm >= kRankTolerance * max_col_norm_)) {
    throw RankDeficient("IncrementalQr: appended column is numerically dependent");
  }
  r_(cols_, cols_) = norm;
  q_.col(cols_) = v / norm;
  qty_(cols_) = q_.col(cols_).dot(y_);
  ++cols_;
}

Vector IncrementalQr::solve() const {
  return r_.topLeftCorner(cols_, cols_).triangularView<Eigen::Upper>().solve(qty_.head(cols_));
}

}  // namespace ompsd
