#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ompsd/linalg.hpp"
#include "ompsd/model.hpp"

namespace ompsd {

enum class PriorFamily {
  Adapted,  // per-depth priors conditioned on the nonzeros already placed
  Fixed,    // the same sparsity-derived prior at every depth, never updated
  Uniform,  // equal mass on every symbol of C0 (plain ML)
};

std::string_view to_string(PriorFamily family);
/// Accepts "adapted", "fixed", "uniform". Throws ParamError otherwise.
PriorFamily parse_prior_family(std::string_view name);

struct PriorKind {
  PriorFamily family = PriorFamily::Adapted;
  std::size_t s_eff = 0;  // ignored by Uniform

  static PriorKind adapted(std::size_t s_eff) { return {PriorFamily::Adapted, s_eff}; }
  static PriorKind fixed(std::size_t s_eff) { return {PriorFamily::Fixed, s_eff}; }
  static PriorKind uniform() { return {PriorFamily::Uniform, 0}; }
};

/// Tree-search bookkeeping at one node: `remaining` decisions still missing
/// including the current one, `placed` nonzeros decided above it.
struct PriorState {
  std::size_t s_eff = 0;
  std::size_t remaining = 0;
  std::size_t placed = 0;
};

/// Adapted prior at `state`: nonzero symbols share (s_eff - placed) /
/// remaining equally, zero gets (remaining - (s_eff - placed)) / remaining.
/// Returns 0 for symbols that the state forbids.
double prior_probability(const PriorState& state, double symbol, const Alphabet& alphabet);

/// Prior of `symbol` under `prior` for a d-dimensional decode at `state`.
///   Adapted: as above.
///   Fixed:   Pr{0} = (d - s_eff)/d, each nonzero s_eff/(|C| d).
///   Uniform: 1/|C0|.
double prior_probability(const PriorKind& prior, std::size_t d, const PriorState& state,
                         double symbol, const Alphabet& alphabet);

struct DecodeResult {
  Vector symbols;
  double metric = 0.0;  // ||y - a v||^2 - 2 sigma2 sum ln Pr at `symbols`
  std::size_t nodes_visited = 0;
  std::size_t leaves_reached = 0;
  std::size_t prior_states_checked = 0;
  std::size_t prior_normalization_violations = 0;
};

/// MAP objective of `symbols` with the prior product taken in decode order
/// (last column first). +infinity if some factor is zero.
double map_objective(const Vector& y, const Matrix& a_sub, double sigma2, const PriorKind& prior,
                     const Vector& symbols, const Alphabet& alphabet = Alphabet::binary());

/// Depth-first Schnorr-Euchner sphere decoder over C0^d minimizing
/// ||y - a_sub v||^2 - 2 sigma2 sum ln Pr{v_k}. The system is reduced to
/// triangular form by thin_qr; depth 1 is the last column. Zero-probability
/// branches are never entered, so under the adapted prior the result has
/// exactly s_eff nonzeros. Children are visited in ascending partial metric
/// and a subtree is pruned once its partial metric reaches the incumbent.
///
/// Throws RankDeficient (from thin_qr), Infeasible if s_eff > d, ParamError
/// on empty input, mismatched sizes or negative sigma2.
DecodeResult sd_decode(const Vector& y, const Matrix& a_sub, double sigma2, const PriorKind& prior,
                       const Alphabet& alphabet = Alphabet::binary());

/// Largest number of candidates brute_force_map will enumerate (3^12).
inline constexpr std::size_t kBruteForceLimit = 531441;

/// Exhaustive minimizer of map_objective over the admissible set, enumerated
/// lexicographically (index 0 most significant, symbols ascending); the first
/// strict minimum wins. nodes_visited counts the candidates evaluated and
/// leaves_reached the admissible ones. Throws TooLarge past kBruteForceLimit.
DecodeResult brute_force_map(const Vector& y, const Matrix& a_sub, double sigma2,
                             const PriorKind& prior, const Alphabet& alphabet = Alphabet::binary());

/// Running totals over a batch of decodes.
struct DecodeTally {
  std::size_t decodes = 0;
  std::size_t nodes_visited = 0;
  std::size_t adapted_decodes = 0;
  std::size_t adapted_sparsity_violations = 0;
  std::size_t prior_states_checked = 0;
  std::size_t prior_normalization_violations = 0;
  std::vector<std::size_t> dimensions;  // one entry per decode, in order

  void record(const DecodeResult& result, const PriorKind& prior);
  DecodeTally& operator+=(const DecodeTally& other);
};

}  // namespace ompsd
