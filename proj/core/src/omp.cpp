#include "ompsd/omp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>

#include "ompsd/errors.hpp"

namespace ompsd {

void SupportSet::insert(std::size_t index) {
  if (index >= member_.size()) throw ParamError("SupportSet: index out of range");
  if (member_[index]) throw ParamError("SupportSet: duplicate index " + std::to_string(index));
  member_[index] = true;
  indices_.push_back(index);
}

std::vector<std::size_t> SupportSet::complement() const {
  std::vector<std::size_t> out;
  out.reserve(member_.size() - indices_.size());
  for (std::size_t i = 0; i < member_.size(); ++i)
    if (!member_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> SupportSet::sorted() const {
  std::vector<std::size_t> out(indices_.begin(), indices_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> decode_order(const SupportSet& support) {
  const auto idx = support.indices();
  return {idx.rbegin(), idx.rend()};
}

namespace {

double diagonal_ratio(const Eigen::Ref<const Matrix>& r) {
  const auto diag = r.diagonal().cwiseAbs();
  return diag.maxCoeff() / diag.minCoeff();
}

}  // namespace

OmpTrace omp_run(const Vector& y, const Matrix& a, std::size_t E, const EstimatorKind& estimator,
                 double sigma2, std::size_t s, const OmpOptions& options) {
  const auto K = static_cast<std::size_t>(a.rows());
  const auto L = static_cast<std::size_t>(a.cols());
  if (y.size() != a.rows()) throw ParamError("omp_run: y length differs from rows of a");
  if (E > std::min(K, L)) throw ParamError("omp_run: E must not exceed min(K, L)");

  OmpTrace trace;
  trace.support = SupportSet(L);
  trace.estimate = Vector::Zero(a.cols());
  trace.residual_norms.reserve(E);

  const bool needs_ls = !std::holds_alternative<EmbeddedSphereDecoder>(estimator);
  std::optional<IncrementalQr> iqr;
  if (needs_ls && options.incremental_qr) iqr.emplace(a.rows(), static_cast<Eigen::Index>(E), y);

  Vector residual = y;
  Vector on_support;  // estimate restricted to the support, insertion order
  for (std::size_t i = 1; i <= E; ++i) {
    const Vector corr = a.transpose() * residual;
    std::size_t pick = L;
    double best = -1.0;
    for (std::size_t c = 0; c < L; ++c) {
      if (trace.support.contains(c)) continue;
      const double mag = std::abs(corr(static_cast<Eigen::Index>(c)));
      if (mag > best) {
        best = mag;
        pick = c;
      }
    }
    trace.support.insert(pick);
    if (iqr) iqr->append(a.col(static_cast<Eigen::Index>(pick)));

    const Matrix a_s = select_columns(a, trace.support.indices());
    Vector coeffs;
    if (needs_ls) {
      if (iqr) {
        coeffs = iqr->solve();
        trace.r_condition.push_back(diagonal_ratio(iqr->r()));
      } else {
        const QrFactors f = thin_qr(a_s);
        coeffs = back_substitute(f.r, f.q.transpose() * y);
        trace.r_condition.push_back(diagonal_ratio(f.r));
      }
    }

    std::visit(
        [&](const auto& est) {
          using T = std::decay_t<decltype(est)>;
          if constexpr (std::is_same_v<T, LeastSquares>) {
            on_support = coeffs;
          } else if constexpr (std::is_same_v<T, LeastSquaresThenFixedQuant>) {
            on_support = quantize_fixed(coeffs, est.threshold, options.alphabet);
          } else {
            const PriorKind prior{est.prior, std::min(s, i)};
            const DecodeResult dr =
                sd_decode(y, select_columns(a, decode_order(trace.support)), sigma2, prior, options.alphabet);
            trace.sd.record(dr, prior);
            on_support = dr.symbols.reverse();
          }
        },
        estimator);

    trace.estimate.setZero();
    const auto idx = trace.support.indices();
    for (std::size_t k = 0; k < idx.size(); ++k)
      trace.estimate(static_cast<Eigen::Index>(idx[k])) = on_support(static_cast<Eigen::Index>(k));
    residual = y - a_s * on_support;
    trace.residual_norms.push_back(residual.norm());
    trace.iterations_run = i;
  }
  return trace;
}

double residual_orthogonality_defect(const OmpTrace& trace, const Matrix& a, const Vector& y) {
  if (trace.support.empty()) return 0.0;
  const Matrix a_s = select_columns(a, trace.support.indices());
  const Vector residual = y - a * trace.estimate;
  return (a_s.transpose() * residual).cwiseAbs().maxCoeff();
}

}  // namespace ompsd
