#include "ompsd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "ompsd/errors.hpp"

namespace ompsd {

namespace {

constexpr std::size_t kMaxAttempts = 64;

struct GridPoint {
  double snr_db = 0.0;
  std::optional<std::size_t> E;  // set on an E axis
};

struct Column {
  std::string label;
  MethodKind method;
  std::size_t E = 0;
  double sigma2 = 0.0;
  std::size_t grid = 0;
  std::vector<std::size_t> expected_dimensions;
};

// Per-trial result of one record.
struct Cell {
  std::uint32_t errors = 0;
  std::uint32_t sparsity = 0;
  std::uint32_t omp_iterations = 0;
  bool dimensions_ok = true;
  double defect = -1.0;
  DecodeTally sd;  // dimensions cleared after checking
};

std::vector<std::size_t> expected_dimensions(const MethodKind& m, std::size_t E) {
  if (std::holds_alternative<method::SdOmp>(m)) {
    std::vector<std::size_t> dims(E);
    std::iota(dims.begin(), dims.end(), std::size_t{1});
    return dims;
  }
  if (method_uses_sd(m)) return {E};
  return {};
}

std::vector<GridPoint> grid_of(const SweepAxis& axis) {
  std::vector<GridPoint> grid;
  std::visit(
      [&](const auto& ax) {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, EAxis>) {
          for (std::size_t e : ax.values) grid.push_back({ax.snr_db, e});
        } else {
          for (double snr : ax.values) grid.push_back({snr, std::nullopt});
        }
      },
      axis);
  return grid;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial, std::size_t attempt) {
  return mix_seed(mix_seed(master, static_cast<std::uint64_t>(trial)), static_cast<std::uint64_t>(attempt));
}

// Runs every column on one trial. Returns false if the draw had to be
// discarded (rank deficiency anywhere), leaving `cells` unspecified.
bool run_trial(const SweepConfig& cfg, const std::vector<GridPoint>& grid,
               const std::vector<Column>& columns, std::uint64_t seed, std::vector<Cell>& cells) {
  Rng rng(seed);
  const BaseDraw base = draw_base({cfg.L, cfg.K, cfg.s}, Alphabet::binary(), rng);
  try {
    std::optional<Instance> inst;
    std::optional<OmpCache> cache;
    std::optional<double> current_snr;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const Column& col = columns[c];
      const double snr = grid[col.grid].snr_db;
      if (!current_snr || *current_snr != snr) {
        inst = base.at(col.sigma2);
        cache.emplace();
        current_snr = snr;
      }
      Rng method_rng(mix_seed(seed, hash_label(col.label) ^ (static_cast<std::uint64_t>(col.E) << 48)));
      RecoveryOutput out = recover(col.method, *inst, col.E, method_rng, &*cache);
      Cell& cell = cells[c];
      cell.errors = static_cast<std::uint32_t>(symbol_errors(out.x_hat, inst->x_true));
      cell.sparsity = static_cast<std::uint32_t>(out.counters.output_sparsity);
      cell.omp_iterations = static_cast<std::uint32_t>(out.counters.omp_iterations);
      cell.defect = out.counters.residual_defect;
      cell.dimensions_ok = out.counters.sd.dimensions == col.expected_dimensions;
      cell.sd = std::move(out.counters.sd);
      cell.sd.dimensions.clear();
    }
  } catch (const RankDeficient&) {
    return false;
  }
  return true;
}

}  // namespace

void validate(const SweepConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("trials must be >= 1");
  if (cfg.K == 0 || cfg.K > cfg.L) throw ConfigError("need 1 <= K <= L");
  if (cfg.s > cfg.K) throw ConfigError("need s <= K");
  if (cfg.methods.empty()) throw ConfigError("methods must not be empty");
  const auto grid = grid_of(cfg.sweep_axis);
  if (grid.empty()) throw ConfigError("sweep_axis.values must not be empty");
  std::vector<std::size_t> budgets;
  if (const auto* ax = std::get_if<EAxis>(&cfg.sweep_axis)) {
    budgets = ax->values;
  } else {
    for (const auto& m : cfg.methods) budgets.push_back(m.E);
  }
  for (std::size_t e : budgets) {
    if (e < cfg.s || e > cfg.K)
      throw ConfigError("every E must satisfy s <= E <= K (got E=" + std::to_string(e) + ")");
  }
  for (const auto& g : grid)
    if (!std::isfinite(g.snr_db)) throw ConfigError("snr_db values must be finite");
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const auto grid = grid_of(cfg.sweep_axis);

  std::vector<Column> columns;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (const MethodSpec& spec : cfg.methods) {
      Column col;
      col.label = method_label(spec.method);
      col.method = spec.method;
      col.E = grid[g].E.value_or(spec.E);
      col.sigma2 = snr_db_to_sigma2(grid[g].snr_db);
      col.grid = g;
      col.expected_dimensions = expected_dimensions(spec.method, col.E);
      columns.push_back(std::move(col));
    }
  }

  const std::size_t trials = cfg.trials;
  std::vector<std::vector<Cell>> cells(trials);
  std::vector<std::size_t> discarded(trials, 0);

  std::size_t workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        std::vector<Cell> row(columns.size());
        std::size_t attempt = 0;
        while (!run_trial(cfg, grid, columns, trial_seed(cfg.master_seed, t, attempt), row)) {
          if (++attempt == kMaxAttempts)
            throw RankDeficient("trial " + std::to_string(t) + ": every redraw was rank deficient");
        }
        discarded[t] = attempt;
        cells[t] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.discarded_trials = std::accumulate(discarded.begin(), discarded.end(), std::size_t{0});
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Column& col = columns[c];
    SweepRecord rec;
    RecordDiagnostics diag;
    std::vector<std::uint32_t> errors(trials);
    std::size_t sparsity = 0;
    diag.expected_dimensions = col.expected_dimensions;
    diag.sd_decodes_min = diag.omp_iterations_min = std::numeric_limits<std::size_t>::max();
    for (std::size_t t = 0; t < trials; ++t) {
      const Cell& cell = cells[t][c];
      errors[t] = cell.errors;
      rec.symbol_errors += cell.errors;
      sparsity += cell.sparsity;
      diag.sd += cell.sd;
      diag.sd_decodes_min = std::min(diag.sd_decodes_min, cell.sd.decodes);
      diag.sd_decodes_max = std::max(diag.sd_decodes_max, cell.sd.decodes);
      diag.omp_iterations_min = std::min<std::size_t>(diag.omp_iterations_min, cell.omp_iterations);
      diag.omp_iterations_max = std::max<std::size_t>(diag.omp_iterations_max, cell.omp_iterations);
      diag.sd_dimensions_consistent = diag.sd_dimensions_consistent && cell.dimensions_ok;
      if (cell.defect >= 0.0) {
        ++diag.defect_trials;
        diag.max_residual_defect = std::max(diag.max_residual_defect, cell.defect);
        if (cell.defect > 1e-6) ++diag.defect_above_1e6;
      }
    }
    rec.method = col.label;
    rec.E = col.E;
    rec.snr_db = grid[col.grid].snr_db;
    rec.trials = trials;
    rec.positions = trials * cfg.L;
    rec.ser = static_cast<double>(rec.symbol_errors) / static_cast<double>(rec.positions);
    rec.mean_sd_nodes = static_cast<double>(diag.sd.nodes_visited) / static_cast<double>(trials);
    rec.mean_output_sparsity = static_cast<double>(sparsity) / static_cast<double>(trials);
    rec.discarded_trials = result.discarded_trials;
    result.records.push_back(std::move(rec));
    result.diagnostics.push_back(std::move(diag));
    result.trial_errors.push_back(std::move(errors));
  }
  return result;
}

}  // namespace ompsd
