#include "ompsd/selftest.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "ompsd/errors.hpp"
#include "ompsd/model.hpp"
#include "ompsd/omp.hpp"
#include "ompsd/rng.hpp"
#include "ompsd/sphere.hpp"

namespace ompsd {

SelftestDepth parse_selftest_depth(std::string_view name) {
  if (name == "quick") return SelftestDepth::Quick;
  if (name == "full") return SelftestDepth::Full;
  throw ParamError("unknown selftest depth '" + std::string(name) + "' (quick|full)");
}

namespace {

Matrix random_columns(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = rng.normal();
    a.col(c).normalize();
  }
  return a;
}

}  // namespace

SelftestReport run_selftest(SelftestDepth depth, std::ostream& log) {
  const bool full = depth == SelftestDepth::Full;
  const std::size_t cases = full ? 1500 : 250;
  const std::size_t max_d = full ? 10 : 8;
  constexpr std::array<double, 3> snrs = {6.0, 12.0, 18.0};
  constexpr std::array<PriorFamily, 3> families = {PriorFamily::Adapted, PriorFamily::Fixed, PriorFamily::Uniform};

  SelftestReport report;
  Rng rng(full ? 0x5e1f7e57f011ULL : 0x5e1f7e57ULL);
  const Alphabet binary = Alphabet::binary();

  for (std::size_t n = 0; n < cases; ++n) {
    const std::size_t d = 1 + rng.below(max_d);
    const std::size_t rows = d + rng.below(7);
    const std::size_t s_eff = rng.below(std::min<std::size_t>(4, d) + 1);
    const PriorKind prior{families[n % families.size()], s_eff};
    const double sigma2 = snr_db_to_sigma2(snrs[rng.below(snrs.size())]);
    const Matrix a = random_columns(rows, d, rng);
    const Vector x = draw_sparse_signal(d, s_eff, binary, rng);
    const Vector y = measure(a, x, sigma2, rng);

    const DecodeResult sd = sd_decode(y, a, sigma2, prior);
    const DecodeResult bf = brute_force_map(y, a, sigma2, prior);
    ++report.oracle_cases;
    if (!(std::abs(sd.metric - bf.metric) <= 1e-9)) {
      ++report.oracle_failures;
      log << "oracle mismatch: case " << n << " d=" << d << " prior=" << to_string(prior.family)
          << " sd=" << sd.metric << " bf=" << bf.metric << '\n';
    }
    ++report.invariant_checks;
    if (sd.prior_normalization_violations != 0) {
      ++report.invariant_failures;
      log << "prior normalization violated: case " << n << '\n';
    }
    if (prior.family == PriorFamily::Adapted) {
      ++report.invariant_checks;
      if (count_nonzeros(sd.symbols) != s_eff) {
        ++report.invariant_failures;
        log << "adapted decode returned wrong sparsity: case " << n << '\n';
      }
    }
  }
  log << "oracle comparisons: " << report.oracle_cases << ", mismatches: " << report.oracle_failures << '\n';

  const std::size_t omp_trials = full ? 50 : 10;
  for (std::size_t t = 0; t < omp_trials; ++t) {
    const Instance inst = draw_instance({64, 32, 4}, 18.0, mix_seed(0x0a1b2c3dULL, t));
    const OmpTrace tr = omp_run(inst.y, inst.a, 8, LeastSquares{}, inst.sigma2, inst.s);
    ++report.invariant_checks;
    const double defect = residual_orthogonality_defect(tr, inst.a, inst.y);
    if (!(defect < 1e-9)) {
      ++report.invariant_failures;
      log << "least-squares OMP residual not orthogonal: trial " << t << " defect=" << defect << '\n';
    }
  }
  log << "invariant checks: " << report.invariant_checks << ", failures: " << report.invariant_failures << '\n';
  return report;
}

}  // namespace ompsd
