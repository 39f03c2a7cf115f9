#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ompsd/linalg.hpp"
#include "ompsd/rng.hpp"

namespace ompsd {

// Nonzero symbol set C, kept sorted ascending. The zero-augmented set C0 is
// C with 0 inserted in order, so for the binary alphabet C0 = (-1, 0, +1).
class Alphabet {
 public:
  /// Throws ParamError if `nonzero_symbols` is empty, contains 0, contains
  /// duplicates or non-finite values.
  explicit Alphabet(std::vector<double> nonzero_symbols);

  static Alphabet binary() { return Alphabet({-1.0, 1.0}); }

  std::span<const double> nonzero() const { return nonzero_; }
  std::span<const double> zero_augmented() const { return augmented_; }
  std::size_t size() const { return nonzero_.size(); }

  bool is_binary() const;
  bool contains(double v) const;           // v in C
  bool contains_augmented(double v) const; // v in C0

  /// Symbol of C closest to v; ties go to the larger symbol.
  double nearest_nonzero(double v) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<double> nonzero_;
  std::vector<double> augmented_;
};

/// One simulation draw: y = a x_true + n with n ~ N(0, sigma2 I).
struct Instance {
  Matrix a;
  Vector x_true;
  Vector y;
  double sigma2 = 0.0;
  std::size_t s = 0;
  Alphabet alphabet = Alphabet::binary();

  std::size_t L() const { return static_cast<std::size_t>(a.cols()); }
  std::size_t K() const { return static_cast<std::size_t>(a.rows()); }
};

/// Length-L vector with a uniformly random size-s support and i.i.d. uniform
/// symbols from C on it. Throws ParamError if s > L.
Vector draw_sparse_signal(std::size_t L, std::size_t s, const Alphabet& alphabet, Rng& rng);

/// 1/sigma^2 given in dB -> sigma^2 = 10^(-snr_db/10).
double snr_db_to_sigma2(double snr_db);

/// a x + sqrt(sigma2) * (i.i.d. standard normals drawn from rng). With
/// sigma2 == 0 nothing is drawn and the exact product is returned.
Vector measure(const Matrix& a, const Vector& x, double sigma2, Rng& rng);

struct ProblemSize {
  std::size_t L = 256;
  std::size_t K = 128;
  std::size_t s = 20;
};

// The noise-independent part of an instance plus the unit-variance noise
// realization. Draws consume the stream in the order matrix, signal, noise,
// exactly as draw_instance does, so at(sigma2) reproduces draw_instance for
// any noise level from the same seed. The harness relies on this to evaluate
// every SNR point on common random numbers.
struct BaseDraw {
  Matrix a;
  Vector x_true;
  Vector noise;  // standard normal, length K
  std::size_t s = 0;
  Alphabet alphabet = Alphabet::binary();

  Instance at(double sigma2) const;
};

BaseDraw draw_base(const ProblemSize& size, const Alphabet& alphabet, Rng& rng);

/// Pure function of (size, snr_db, seed).
Instance draw_instance(const ProblemSize& size, double snr_db, std::uint64_t seed,
                       const Alphabet& alphabet = Alphabet::binary());

std::size_t count_nonzeros(const Vector& v);

}  // namespace ompsd
