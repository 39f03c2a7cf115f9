// ompsd: sweeps, single-trial debugging and self tests for discrete sparse
// recovery with OMP and the sphere decoder.
//
// Exit status: 0 success, 1 runtime error, 2 usage error, 3 selftest failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ompsd/errors.hpp"
#include "ompsd/harness.hpp"
#include "ompsd/model.hpp"
#include "ompsd/pipelines.hpp"
#include "ompsd/selftest.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSelftest = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(std::span<const std::size_t> v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "}";
}

int run_sweep_command(const std::string& config_path, const std::vector<std::string>& overrides,
                      const std::string& out_path, int threads) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + config_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  ompsd::SweepConfig cfg;
  try {
    cfg = ompsd::config_from_json(ompsd::apply_overrides(buf.str(), overrides));
  } catch (const ompsd::ConfigError& e) {
    throw UsageError(config_path + ": " + e.what());
  }
  if (!out_path.empty()) cfg.output_path = out_path;
  if (threads > 0) cfg.threads = static_cast<std::size_t>(threads);

  const ompsd::SweepResult result = ompsd::run_sweep(cfg);
  ompsd::write_csv(result.records, cfg.output_path);
  std::cout << cfg.output_path << '\n';
  return 0;
}

int run_single_command(const std::string& method_name, const std::string& prior_name, double tau,
                       std::size_t L, std::size_t K, std::size_t s, std::size_t E, double snr_db,
                       std::uint64_t seed, bool verbose) {
  ompsd::MethodKind method;
  try {
    method = ompsd::parse_method(method_name, ompsd::parse_prior_family(prior_name), ompsd::TernaryThreshold(tau));
  } catch (const ompsd::ParamError& e) {
    throw UsageError(e.what());
  }
  if (!(s <= E && E <= K && K <= L)) throw UsageError("need s <= E <= K <= L");

  const ompsd::Instance inst = ompsd::draw_instance({L, K, s}, snr_db, seed);
  ompsd::Rng rng(ompsd::mix_seed(seed, ompsd::hash_label(ompsd::method_label(method))));
  const ompsd::RecoveryOutput out = ompsd::recover(method, inst, E, rng);

  std::vector<std::size_t> truth;
  for (Eigen::Index i = 0; i < inst.x_true.size(); ++i)
    if (inst.x_true(i) != 0.0) truth.push_back(static_cast<std::size_t>(i));
  const auto found = out.support_used.sorted();

  std::cout << "method: " << ompsd::method_label(method) << '\n'
            << "L=" << L << " K=" << K << " s=" << s << " E=" << E << " snr_db=" << snr_db
            << " seed=" << seed << '\n'
            << "true support (0-based): " << join(truth) << '\n'
            << "found support (0-based): " << join(found) << '\n';
  std::size_t hits = 0;
  for (std::size_t i : truth) hits += out.support_used.contains(i) ? 1 : 0;
  std::cout << "true support covered: " << hits << "/" << truth.size() << '\n';
  std::cout << "x_hat nonzeros:";
  for (Eigen::Index i = 0; i < out.x_hat.size(); ++i)
    if (out.x_hat(i) != 0.0) std::cout << ' ' << i << ':' << (out.x_hat(i) > 0 ? "+" : "") << out.x_hat(i);
  std::cout << '\n';
  std::cout << "symbol errors: " << ompsd::symbol_errors(out.x_hat, inst.x_true) << "/" << L
            << "  SER: " << ompsd::format_ser(ompsd::ser(out.x_hat, inst.x_true)) << '\n'
            << "SD nodes visited: " << out.counters.sd.nodes_visited << " in " << out.counters.sd.decodes
            << " decode(s)\n";
  if (verbose) {
    std::cout << "OMP iterations: " << out.counters.omp_iterations << '\n'
              << "output sparsity: " << out.counters.output_sparsity << '\n'
              << "SD dimensions: " << join(out.counters.sd.dimensions) << '\n';
    if (out.counters.residual_defect >= 0.0)
      std::cout << "residual orthogonality defect: " << out.counters.residual_defect << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete sparse recovery with OMP and the sphere decoder"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep from a JSON config and write CSV");
  sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
  sweep->add_option("--set", overrides, "Override a config field, key=value (dotted keys for nested fields)");
  sweep->add_option("--out", out_path, "CSV output path (overrides output_path)");
  sweep->add_option("--threads", threads, "Worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);

  std::string method_name = "omp-sd", prior_name = "adapted";
  double tau = ompsd::TernaryThreshold::kDefault;
  std::size_t L = 256, K = 128, s = 20, E = 30;
  double snr_db = 18.0;
  std::uint64_t seed = 1;
  bool verbose = false;
  auto* single = app.add_subcommand("single", "Run one trial and print a report");
  single->add_option("--method", method_name,
                     "omp-q|q-omp|omp-sd|sd-omp|genie-values|genie-support-sd (optional -<prior> suffix)");
  single->add_option("--prior", prior_name, "adapted|fixed|uniform")->check(CLI::IsMember({"adapted", "fixed", "uniform"}));
  single->add_option("--tau", tau, "Q-OMP ternary threshold");
  single->add_option("--L", L, "Signal length");
  single->add_option("--K", K, "Number of measurements");
  single->add_option("--s", s, "Sparsity");
  single->add_option("--E", E, "OMP iterations");
  single->add_option("--snr-db", snr_db, "1/sigma^2 in dB");
  single->add_option("--seed", seed, "Instance seed");
  single->add_flag("--verbose,-v", verbose, "Print counters");

  std::string depth = "quick";
  auto* selftest = app.add_subcommand("selftest", "Oracle equivalence and invariant checks");
  selftest->add_option("--depth", depth, "quick|full")->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep) return run_sweep_command(config_path, overrides, out_path, threads);
    if (*single) return run_single_command(method_name, prior_name, tau, L, K, s, E, snr_db, seed, verbose);
    const ompsd::SelftestReport report = ompsd::run_selftest(ompsd::parse_selftest_depth(depth), std::cerr);
    return report.passed() ? 0 : kExitSelftest;
  } catch (const UsageError& e) {
    std::cerr << "ompsd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ompsd: " << e.what() << '\n';
    return kExitRuntime;
  }
}
