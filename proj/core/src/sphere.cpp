#include "ompsd/sphere.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "ompsd/errors.hpp"

namespace ompsd {

std::string_view to_string(PriorFamily family) {
  switch (family) {
    case PriorFamily::Adapted: return "adapted";
    case PriorFamily::Fixed: return "fixed";
    case PriorFamily::Uniform: return "uniform";
  }
  return "?";
}

PriorFamily parse_prior_family(std::string_view name) {
  if (name == "adapted") return PriorFamily::Adapted;
  if (name == "fixed") return PriorFamily::Fixed;
  if (name == "uniform") return PriorFamily::Uniform;
  throw ParamError("unknown prior kind '" + std::string(name) + "' (adapted|fixed|uniform)");
}

double prior_probability(const PriorState& state, double symbol, const Alphabet& alphabet) {
  if (!alphabet.contains_augmented(symbol) || state.remaining == 0 || state.placed > state.s_eff)
    return 0.0;
  const double j = static_cast<double>(state.remaining);
  const std::size_t need = state.s_eff - state.placed;
  if (symbol != 0.0) return static_cast<double>(need) / (static_cast<double>(alphabet.size()) * j);
  if (need > state.remaining) return 0.0;
  return static_cast<double>(state.remaining - need) / j;
}

double prior_probability(const PriorKind& prior, std::size_t d, const PriorState& state,
                         double symbol, const Alphabet& alphabet) {
  if (!alphabet.contains_augmented(symbol)) return 0.0;
  switch (prior.family) {
    case PriorFamily::Adapted:
      return prior_probability(state, symbol, alphabet);
    case PriorFamily::Fixed: {
      if (d == 0 || prior.s_eff > d) return 0.0;
      const double dd = static_cast<double>(d);
      if (symbol == 0.0) return static_cast<double>(d - prior.s_eff) / dd;
      return static_cast<double>(prior.s_eff) / (static_cast<double>(alphabet.size()) * dd);
    }
    case PriorFamily::Uniform:
      return 1.0 / static_cast<double>(alphabet.zero_augmented().size());
  }
  return 0.0;
}

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr std::size_t kMaxSymbols = 8;

double prior_penalty(double sigma2, double p) {
  return sigma2 == 0.0 ? 0.0 : -2.0 * sigma2 * std::log(p);
}

void check_inputs(const Vector& y, const Matrix& a_sub, double sigma2, const PriorKind& prior,
                  const Alphabet& alphabet, const char* who) {
  const std::string name(who);
  if (a_sub.cols() == 0) throw ParamError(name + ": empty system");
  if (a_sub.rows() != y.size()) throw ParamError(name + ": dimension mismatch");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ParamError(name + ": sigma2 must be >= 0");
  if (alphabet.zero_augmented().size() > kMaxSymbols) throw ParamError(name + ": alphabet too large");
  const auto d = static_cast<std::size_t>(a_sub.cols());
  if (prior.family != PriorFamily::Uniform && prior.s_eff > d) {
    throw Infeasible(name + ": s_eff = " + std::to_string(prior.s_eff) +
                     " exceeds dimension " + std::to_string(d));
  }
}

// Smallest prior penalty any admissible completion of the `remaining` levels
// below a node can accumulate, given `need` nonzeros still to place. Under the
// adapted prior every completion has the same prior product
// 1 / (C(remaining, need) |C|^need), so the bound is exact; the fixed and
// uniform priors do not change with depth and the bound is remaining times
// the cheapest admissible symbol.
class PenaltyLookahead {
 public:
  PenaltyLookahead(const PriorKind& prior, std::size_t d, double sigma2, const Alphabet& alphabet)
      : prior_(prior), sigma2_(sigma2), log_c_(std::log(static_cast<double>(alphabet.size()))) {
    if (prior.family == PriorFamily::Adapted) return;
    const PriorState any{prior.s_eff, d, 0};
    double cheapest = std::numeric_limits<double>::infinity();
    for (double c : alphabet.zero_augmented()) {
      const double p = prior_probability(prior, d, any, c, alphabet);
      if (p > 0.0) cheapest = std::min(cheapest, prior_penalty(sigma2, p));
    }
    per_level_ = cheapest;
  }

  double operator()(std::size_t remaining, std::size_t need) const {
    if (sigma2_ == 0.0 || remaining == 0) return 0.0;
    double bound;
    if (prior_.family == PriorFamily::Adapted) {
      const double n = static_cast<double>(remaining);
      const double k = static_cast<double>(need);
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      bound = 2.0 * sigma2_ * (log_binom + k * log_c_);
    } else {
      bound = static_cast<double>(remaining) * per_level_;
    }
    // Rounding slack: the bound must never exceed the exact remaining penalty.
    return std::max(0.0, bound * (1.0 - 1e-12) - 1e-14);
  }

 private:
  PriorKind prior_;
  double sigma2_;
  double log_c_;
  double per_level_ = 0.0;
};

}  // namespace

double map_objective(const Vector& y, const Matrix& a_sub, double sigma2, const PriorKind& prior,
                     const Vector& symbols, const Alphabet& alphabet) {
  const auto d = static_cast<std::size_t>(symbols.size());
  double penalty = 0.0;
  PriorState state{prior.s_eff, 0, 0};
  for (std::size_t depth = 0; depth < d; ++depth) {
    const double c = symbols(static_cast<Eigen::Index>(d - 1 - depth));
    state.remaining = d - depth;
    const double p = prior_probability(prior, d, state, c, alphabet);
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    penalty += prior_penalty(sigma2, p);
    if (c != 0.0) ++state.placed;
  }
  return (y - a_sub * symbols).squaredNorm() + penalty;
}

DecodeResult sd_decode(const Vector& y, const Matrix& a_sub, double sigma2, const PriorKind& prior,
                       const Alphabet& alphabet) {
  check_inputs(y, a_sub, sigma2, prior, alphabet, "sd_decode");
  const QrFactors qr = thin_qr(a_sub);
  const Matrix& r = qr.r;
  const Vector z = qr.q.transpose() * y;
  const double offset = (y - qr.q * z).squaredNorm();

  const auto d = static_cast<std::size_t>(a_sub.cols());
  const auto symbols = alphabet.zero_augmented();
  const std::size_t nsym = symbols.size();

  struct Level {
    std::array<double, kMaxSymbols> sym{};
    std::array<double, kMaxSymbols> inc{};
    std::array<double, kMaxSymbols> key{};  // inc + lookahead below the child
    std::size_t count = 0;
    std::size_t next = 0;
    double partial = 0.0;  // metric accumulated above this level
    std::size_t placed = 0;
  };
  std::vector<Level> levels(d);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));

  DecodeResult out;
  out.symbols = Vector::Zero(static_cast<Eigen::Index>(d));
  double best = std::numeric_limits<double>::infinity();
  const PenaltyLookahead lookahead(prior, d, sigma2, alphabet);

  // Children of column k in ascending key; equal keys keep symbol order.
  auto expand = [&](std::size_t k) {
    Level& lv = levels[k];
    const auto kk = static_cast<Eigen::Index>(k);
    double center = z(kk);
    for (Eigen::Index j = kk + 1; j < static_cast<Eigen::Index>(d); ++j) center -= r(kk, j) * v(j);
    const PriorState state{prior.s_eff, k + 1, lv.placed};
    double mass = 0.0;
    lv.count = 0;
    lv.next = 0;
    for (std::size_t t = 0; t < nsym; ++t) {
      const double c = symbols[t];
      const double p = prior_probability(prior, d, state, c, alphabet);
      mass += p;
      if (p == 0.0) continue;
      const double e = center - r(kk, kk) * c;
      const double inc = e * e + prior_penalty(sigma2, p);
      assert(inc >= 0.0);
      const std::size_t placed = lv.placed + (c != 0.0 ? 1 : 0);
      const std::size_t need = prior.s_eff > placed ? prior.s_eff - placed : 0;
      const double key = inc + lookahead(k, need);
      std::size_t pos = lv.count++;
      while (pos > 0 && lv.key[pos - 1] > key) {
        lv.inc[pos] = lv.inc[pos - 1];
        lv.key[pos] = lv.key[pos - 1];
        lv.sym[pos] = lv.sym[pos - 1];
        --pos;
      }
      lv.inc[pos] = inc;
      lv.key[pos] = key;
      lv.sym[pos] = c;
    }
    ++out.prior_states_checked;
    if (!(std::abs(mass - 1.0) <= kNormalizationTolerance)) ++out.prior_normalization_violations;
  };

  std::size_t k = d - 1;
  levels[k].partial = 0.0;
  levels[k].placed = 0;
  expand(k);
  for (;;) {
    Level& lv = levels[k];
    if (lv.next < lv.count && lv.partial + lv.key[lv.next] < best) {
      const double c = lv.sym[lv.next];
      const double metric = lv.partial + lv.inc[lv.next];
      ++lv.next;
      ++out.nodes_visited;
      v(static_cast<Eigen::Index>(k)) = c;
      if (k == 0) {
        ++out.leaves_reached;
        if (metric < best) {  // key == inc at a leaf, up to the lookahead slack
          best = metric;
          out.symbols = v;
        }
        continue;
      }
      Level& child = levels[k - 1];
      child.partial = metric;
      child.placed = lv.placed + (c != 0.0 ? 1 : 0);
      --k;
      expand(k);
      continue;
    }
    // Remaining children are no better than the incumbent, or none are left.
    if (k == d - 1) break;
    ++k;
  }

  if (!std::isfinite(best)) throw Infeasible("sd_decode: no admissible symbol vector");
  out.metric = offset + best;
  return out;
}

DecodeResult brute_force_map(const Vector& y, const Matrix& a_sub, double sigma2,
                             const PriorKind& prior, const Alphabet& alphabet) {
  check_inputs(y, a_sub, sigma2, prior, alphabet, "brute_force_map");
  const auto d = static_cast<std::size_t>(a_sub.cols());
  const auto symbols = alphabet.zero_augmented();
  const std::size_t nsym = symbols.size();

  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > kBruteForceLimit / nsym) throw TooLarge("brute_force_map: search space exceeds guard");
    total *= nsym;
  }

  DecodeResult out;
  out.metric = std::numeric_limits<double>::infinity();
  out.symbols = Vector::Zero(static_cast<Eigen::Index>(d));
  std::vector<std::size_t> digit(d, 0);
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = symbols[digit[i]];
    ++out.nodes_visited;
    const double metric = map_objective(y, a_sub, sigma2, prior, v, alphabet);
    if (std::isfinite(metric)) {
      ++out.leaves_reached;
      if (metric < out.metric) {
        out.metric = metric;
        out.symbols = v;
      }
    }
    // Odometer: last index varies fastest, so index 0 is most significant.
    for (std::size_t i = d; i-- > 0;) {
      if (++digit[i] < nsym) break;
      digit[i] = 0;
    }
  }
  if (!std::isfinite(out.metric)) throw Infeasible("brute_force_map: no admissible symbol vector");
  return out;
}

void DecodeTally::record(const DecodeResult& result, const PriorKind& prior) {
  ++decodes;
  nodes_visited += result.nodes_visited;
  prior_states_checked += result.prior_states_checked;
  prior_normalization_violations += result.prior_normalization_violations;
  dimensions.push_back(static_cast<std::size_t>(result.symbols.size()));
  if (prior.family == PriorFamily::Adapted) {
    ++adapted_decodes;
    if (count_nonzeros(result.symbols) != prior.s_eff) ++adapted_sparsity_violations;
  }
}

DecodeTally& DecodeTally::operator+=(const DecodeTally& other) {
  decodes += other.decodes;
  nodes_visited += other.nodes_visited;
  adapted_decodes += other.adapted_decodes;
  adapted_sparsity_violations += other.adapted_sparsity_violations;
  prior_states_checked += other.prior_states_checked;
  prior_normalization_violations += other.prior_normalization_violations;
  dimensions.insert(dimensions.end(), other.dimensions.begin(), other.dimensions.end());
  return *this;
}

}  // namespace ompsd
