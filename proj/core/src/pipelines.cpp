#include "ompsd/pipelines.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <type_traits>

#include "ompsd/errors.hpp"

namespace ompsd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string with_prior(std::string_view base, PriorFamily prior) {
  return std::string(base) + "-" + std::string(to_string(prior));
}

void scatter(Vector& x_hat, const SupportSet& support, const Vector& on_support) {
  const auto idx = support.indices();
  for (std::size_t k = 0; k < idx.size(); ++k)
    x_hat(static_cast<Eigen::Index>(idx[k])) = on_support(static_cast<Eigen::Index>(k));
}

Vector gather(const Vector& x, const SupportSet& support) {
  const auto idx = support.indices();
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = x(static_cast<Eigen::Index>(idx[k]));
  return out;
}

// Sphere decode of y on the support columns with s_eff = min(s, |S|).
void decode_on_support(const Instance& inst, PriorFamily family, RecoveryOutput& out) {
  const Matrix a_s = select_columns(inst.a, decode_order(out.support_used));
  const PriorKind prior{family, std::min(inst.s, out.support_used.size())};
  const DecodeResult dr = sd_decode(inst.y, a_s, inst.sigma2, prior, inst.alphabet);
  out.counters.sd.record(dr, prior);
  scatter(out.x_hat, out.support_used, dr.symbols.reverse());
}

void from_least_squares_trace(const OmpTrace& trace, const Instance& inst, RecoveryOutput& out) {
  out.support_used = trace.support;
  out.counters.omp_iterations = trace.iterations_run;
  out.counters.residual_defect = residual_orthogonality_defect(trace, inst.a, inst.y);
}

constexpr std::array<std::string_view, 6> kMethodNames = {
    "omp-q", "q-omp", "omp-sd", "sd-omp", "genie-values", "genie-support-sd"};

}  // namespace

std::string method_label(const MethodKind& m) {
  return std::visit(
      Overloaded{
          [](const method::OmpQ&) { return std::string("omp-q"); },
          [](const method::QOmp&) { return std::string("q-omp"); },
          [](const method::OmpSd& x) { return with_prior("omp-sd", x.prior); },
          [](const method::SdOmp& x) { return with_prior("sd-omp", x.prior); },
          [](const method::GenieValues&) { return std::string("genie-values"); },
          [](const method::GenieSupportSd& x) { return with_prior("genie-support-sd", x.prior); },
      },
      m);
}

MethodKind parse_method(std::string_view name, PriorFamily prior, TernaryThreshold threshold) {
  std::string_view base = name;
  bool suffixed = false;
  for (auto family : {PriorFamily::Adapted, PriorFamily::Fixed, PriorFamily::Uniform}) {
    const std::string suffix = "-" + std::string(to_string(family));
    if (base.size() > suffix.size() && base.ends_with(suffix)) {
      const std::string_view stem = base.substr(0, base.size() - suffix.size());
      if (std::find(kMethodNames.begin(), kMethodNames.end(), stem) != kMethodNames.end()) {
        base = stem;
        prior = family;
        suffixed = true;
        break;
      }
    }
  }
  auto no_prior = [&](MethodKind m) -> MethodKind {
    if (suffixed) throw ParamError("method '" + std::string(base) + "' takes no prior kind");
    return m;
  };
  if (base == "omp-q") return no_prior(method::OmpQ{});
  if (base == "q-omp") return no_prior(method::QOmp{threshold});
  if (base == "genie-values") return no_prior(method::GenieValues{});
  if (base == "omp-sd") return method::OmpSd{prior};
  if (base == "sd-omp") return method::SdOmp{prior};
  if (base == "genie-support-sd") return method::GenieSupportSd{prior};
  throw ParamError("unknown method '" + std::string(name) +
                   "' (omp-q|q-omp|omp-sd|sd-omp|genie-values|genie-support-sd)");
}

bool method_uses_sd(const MethodKind& m) {
  return std::holds_alternative<method::OmpSd>(m) || std::holds_alternative<method::SdOmp>(m) ||
         std::holds_alternative<method::GenieSupportSd>(m);
}

const OmpTrace& OmpCache::least_squares(const Instance& inst, std::size_t E) {
  auto it = traces_.find(E);
  if (it == traces_.end())
    it = traces_.emplace(E, omp_run(inst.y, inst.a, E, LeastSquares{}, inst.sigma2, inst.s,
                                    OmpOptions{true, inst.alphabet}))
             .first;
  return it->second;
}

RecoveryOutput recover(const MethodKind& m, const Instance& inst, std::size_t E, Rng& rng,
                       OmpCache* cache) {
  if (!(inst.s <= E && E <= inst.K() && E <= inst.L()))
    throw ParamError("recover: need s <= E <= K (s=" + std::to_string(inst.s) +
                     ", E=" + std::to_string(E) + ", K=" + std::to_string(inst.K()) + ")");
  if (inst.y.size() != inst.a.rows() || inst.x_true.size() != inst.a.cols())
    throw ParamError("recover: instance dimensions are inconsistent");

  std::optional<OmpCache> local;
  if (cache == nullptr) cache = &local.emplace();
  const OmpOptions options{true, inst.alphabet};

  RecoveryOutput out;
  out.x_hat = Vector::Zero(inst.a.cols());

  std::visit(
      Overloaded{
          [&](const method::OmpQ&) {
            const OmpTrace& tr = cache->least_squares(inst, E);
            from_least_squares_trace(tr, inst, out);
            scatter(out.x_hat, out.support_used,
                    quantize_top_s(gather(tr.estimate, tr.support), inst.s, inst.alphabet));
          },
          [&](const method::QOmp& q) {
            const OmpTrace tr = omp_run(inst.y, inst.a, E, LeastSquaresThenFixedQuant{q.threshold},
                                        inst.sigma2, inst.s, options);
            from_least_squares_trace(tr, inst, out);
            out.x_hat = tr.estimate;
          },
          [&](const method::OmpSd& q) {
            const OmpTrace& tr = cache->least_squares(inst, E);
            from_least_squares_trace(tr, inst, out);
            decode_on_support(inst, q.prior, out);
          },
          [&](const method::SdOmp& q) {
            const OmpTrace tr =
                omp_run(inst.y, inst.a, E, EmbeddedSphereDecoder{q.prior}, inst.sigma2, inst.s, options);
            from_least_squares_trace(tr, inst, out);
            out.counters.sd = tr.sd;
            out.x_hat = tr.estimate;
          },
          [&](const method::GenieValues&) {
            const OmpTrace& tr = cache->least_squares(inst, E);
            from_least_squares_trace(tr, inst, out);
            scatter(out.x_hat, out.support_used, gather(inst.x_true, out.support_used));
          },
          [&](const method::GenieSupportSd& q) {
            SupportSet support(inst.L());
            std::vector<std::size_t> off;
            for (std::size_t i = 0; i < inst.L(); ++i) {
              if (inst.x_true(static_cast<Eigen::Index>(i)) != 0.0)
                support.insert(i);
              else
                off.push_back(i);
            }
            const std::size_t extras = E - std::min(E, support.size());
            if (extras > off.size()) throw ParamError("recover: not enough off-support positions");
            for (std::size_t k = 0; k < extras; ++k) {
              const std::size_t j = k + rng.below(off.size() - k);
              std::swap(off[k], off[j]);
              support.insert(off[k]);
            }
            out.support_used = std::move(support);
            decode_on_support(inst, q.prior, out);
          },
      },
      m);

  out.counters.output_sparsity = count_nonzeros(out.x_hat);
  return out;
}

std::size_t symbol_errors(const Vector& x_hat, const Vector& x_true) {
  if (x_hat.size() != x_true.size()) throw LengthMismatch("symbol_errors: vectors differ in length");
  return static_cast<std::size_t>((x_hat.array() != x_true.array()).count());
}

double ser(const Vector& x_hat, const Vector& x_true) {
  const std::size_t errors = symbol_errors(x_hat, x_true);
  return x_true.size() == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(x_true.size());
}

}  // namespace ompsd
