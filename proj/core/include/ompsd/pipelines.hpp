#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "ompsd/model.hpp"
#include "ompsd/omp.hpp"
#include "ompsd/quantize.hpp"
#include "ompsd/rng.hpp"
#include "ompsd/sphere.hpp"

namespace ompsd {

namespace method {
struct OmpQ {};
struct QOmp {
  TernaryThreshold threshold;
};
struct OmpSd {
  PriorFamily prior = PriorFamily::Adapted;
};
struct SdOmp {
  PriorFamily prior = PriorFamily::Adapted;
};
struct GenieValues {};
struct GenieSupportSd {
  PriorFamily prior = PriorFamily::Adapted;
};
}  // namespace method

using MethodKind = std::variant<method::OmpQ, method::QOmp, method::OmpSd, method::SdOmp,
                                method::GenieValues, method::GenieSupportSd>;

/// CLI/CSV label: omp-q, q-omp, omp-sd-<prior>, sd-omp-<prior>, genie-values,
/// genie-support-sd-<prior>.
std::string method_label(const MethodKind& method);

/// Parses a method name. A prior suffix in `name` takes precedence over
/// `prior`; methods without a prior reject a suffix. Throws ParamError.
MethodKind parse_method(std::string_view name, PriorFamily prior = PriorFamily::Adapted,
                        TernaryThreshold threshold = TernaryThreshold{});

bool method_uses_sd(const MethodKind& method);

struct RecoveryCounters {
  std::size_t omp_iterations = 0;
  DecodeTally sd;
  std::size_t output_sparsity = 0;
  // Orthogonality defect of the OMP run that produced the support; negative
  // when no OMP was run (GenieSupportSd).
  double residual_defect = -1.0;
};

struct RecoveryOutput {
  Vector x_hat;
  SupportSet support_used;
  RecoveryCounters counters;
};

// Least-squares OMP traces of one instance keyed by E, shared by every method
// evaluated on that instance.
class OmpCache {
 public:
  const OmpTrace& least_squares(const Instance& inst, std::size_t E);

 private:
  std::map<std::size_t, OmpTrace> traces_;
};

/// Runs one recovery method end to end. `rng` is used only for the extra
/// positions of GenieSupportSd. Throws ParamError unless s <= E <= K;
/// propagates RankDeficient and Infeasible.
RecoveryOutput recover(const MethodKind& method, const Instance& inst, std::size_t E, Rng& rng,
                       OmpCache* cache = nullptr);

/// Number of positions where the vectors differ. Throws LengthMismatch.
std::size_t symbol_errors(const Vector& x_hat, const Vector& x_true);

/// symbol_errors / L.
double ser(const Vector& x_hat, const Vector& x_true);

}  // namespace ompsd
