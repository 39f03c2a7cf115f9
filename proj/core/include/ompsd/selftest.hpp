#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>

namespace ompsd {

enum class SelftestDepth { Quick, Full };

/// Throws ParamError for anything but "quick" or "full".
SelftestDepth parse_selftest_depth(std::string_view name);

struct SelftestReport {
  std::size_t oracle_cases = 0;
  std::size_t oracle_failures = 0;
  std::size_t invariant_checks = 0;
  std::size_t invariant_failures = 0;

  bool passed() const { return oracle_failures == 0 && invariant_failures == 0; }
};

/// Sphere decoder vs. brute force on random small systems, plus prior
/// normalization, adapted sparsity and least-squares OMP orthogonality checks.
/// Quick runs 250 oracle comparisons, full 1500. Progress goes to `log`.
SelftestReport run_selftest(SelftestDepth depth, std::ostream& log);

}  // namespace ompsd
