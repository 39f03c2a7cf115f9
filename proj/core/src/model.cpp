#include "ompsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ompsd/errors.hpp"

namespace ompsd {

Alphabet::Alphabet(std::vector<double> nonzero_symbols) : nonzero_(std::move(nonzero_symbols)) {
  if (nonzero_.empty()) throw ParamError("Alphabet: empty symbol set");
  std::sort(nonzero_.begin(), nonzero_.end());
  for (std::size_t i = 0; i < nonzero_.size(); ++i) {
    if (!std::isfinite(nonzero_[i])) throw ParamError("Alphabet: non-finite symbol");
    if (nonzero_[i] == 0.0) throw ParamError("Alphabet: 0 must not be a nonzero symbol");
    if (i > 0 && nonzero_[i] == nonzero_[i - 1]) throw ParamError("Alphabet: duplicate symbol");
  }
  augmented_ = nonzero_;
  augmented_.insert(std::upper_bound(augmented_.begin(), augmented_.end(), 0.0), 0.0);
}

bool Alphabet::is_binary() const {
  return nonzero_.size() == 2 && nonzero_[0] == -1.0 && nonzero_[1] == 1.0;
}

bool Alphabet::contains(double v) const {
  return std::binary_search(nonzero_.begin(), nonzero_.end(), v);
}

bool Alphabet::contains_augmented(double v) const { return v == 0.0 || contains(v); }

double Alphabet::nearest_nonzero(double v) const {
  double best = nonzero_.front();
  double best_dist = std::abs(v - best);
  for (double c : nonzero_) {
    const double dist = std::abs(v - c);
    if (dist <= best_dist) {  // ascending order: "<=" lets the larger symbol win ties
      best = c;
      best_dist = dist;
    }
  }
  return best;
}

Vector draw_sparse_signal(std::size_t L, std::size_t s, const Alphabet& alphabet, Rng& rng) {
  if (s > L) throw ParamError("draw_sparse_signal: s > L");
  Vector x = Vector::Zero(static_cast<Eigen::Index>(L));
  std::vector<std::size_t> perm(L);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t j = i + rng.below(L - i);
    std::swap(perm[i], perm[j]);
    x(static_cast<Eigen::Index>(perm[i])) = alphabet.nonzero()[rng.below(alphabet.size())];
  }
  return x;
}

double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

Vector measure(const Matrix& a, const Vector& x, double sigma2, Rng& rng) {
  if (a.cols() != x.size()) throw ParamError("measure: dimension mismatch");
  if (!(sigma2 >= 0.0)) throw ParamError("measure: sigma2 must be >= 0");
  Vector y = a * x;
  if (sigma2 == 0.0) return y;
  const double sigma = std::sqrt(sigma2);
  for (Eigen::Index k = 0; k < y.size(); ++k) y(k) += sigma * rng.normal();
  return y;
}

Instance BaseDraw::at(double sigma2) const {
  Instance inst{a, x_true, a * x_true, sigma2, s, alphabet};
  if (sigma2 > 0.0) inst.y += std::sqrt(sigma2) * noise;
  return inst;
}

BaseDraw draw_base(const ProblemSize& size, const Alphabet& alphabet, Rng& rng) {
  if (!(size.s <= size.K && size.K <= size.L) || size.K == 0)
    throw ParamError("draw_base: need s <= K <= L, K >= 1");
  BaseDraw base;
  base.a = build_measurement_matrix(size.L, size.K, rng);
  base.x_true = draw_sparse_signal(size.L, size.s, alphabet, rng);
  base.noise.resize(static_cast<Eigen::Index>(size.K));
  for (Eigen::Index k = 0; k < base.noise.size(); ++k) base.noise(k) = rng.normal();
  base.s = size.s;
  base.alphabet = alphabet;
  return base;
}

Instance draw_instance(const ProblemSize& size, double snr_db, std::uint64_t seed,
                       const Alphabet& alphabet) {
  Rng rng(seed);
  Instance inst;
  inst.a = build_measurement_matrix(size.L, size.K, rng);
  inst.x_true = draw_sparse_signal(size.L, size.s, alphabet, rng);
  inst.sigma2 = snr_db_to_sigma2(snr_db);
  inst.y = measure(inst.a, inst.x_true, inst.sigma2, rng);
  inst.s = size.s;
  inst.alphabet = alphabet;
  return inst;
}

std::size_t count_nonzeros(const Vector& v) {
  return static_cast<std::size_t>((v.array() != 0.0).count());
}

}  // namespace ompsd
