#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ompsd/errors.hpp"
#include "ompsd/harness.hpp"

namespace ompsd {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": field '" + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

MethodSpec parse_method_spec(const json& m, std::size_t index) {
  const std::string where = "methods[" + std::to_string(index) + "]";
  if (!m.is_object()) throw ConfigError(where + ": expected an object");
  reject_unknown(m, {"method", "prior", "E", "tau"}, where);
  try {
    const PriorFamily prior = parse_prior_family(field_or<std::string>(m, "prior", "adapted", where));
    const TernaryThreshold thr(field_or<double>(m, "tau", TernaryThreshold::kDefault, where));
    MethodSpec spec{parse_method(field<std::string>(m, "method", where), prior, thr),
                    field_or<std::size_t>(m, "E", 0, where)};
    return spec;
  } catch (const ParamError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

SweepAxis parse_axis(const json& ax) {
  const std::string where = "sweep_axis";
  if (!ax.is_object()) throw ConfigError(where + ": expected an object");
  const auto kind = field<std::string>(ax, "kind", where);
  if (kind == "E") {
    reject_unknown(ax, {"kind", "snr_db", "values"}, where);
    return EAxis{field<double>(ax, "snr_db", where), field<std::vector<std::size_t>>(ax, "values", where)};
  }
  if (kind == "snr_db") {
    reject_unknown(ax, {"kind", "values"}, where);
    return SnrAxis{field<std::vector<double>>(ax, "values", where)};
  }
  throw ConfigError(where + ": kind must be \"E\" or \"snr_db\"");
}

}  // namespace

SweepConfig config_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(doc, {"L", "K", "s", "methods", "sweep_axis", "trials", "master_seed", "output_path", "threads"},
                 where);
  SweepConfig cfg;
  cfg.L = field<std::size_t>(doc, "L", where);
  cfg.K = field<std::size_t>(doc, "K", where);
  cfg.s = field<std::size_t>(doc, "s", where);
  if (!doc.contains("methods") || !doc["methods"].is_array()) throw ConfigError("config: 'methods' must be an array");
  for (std::size_t i = 0; i < doc["methods"].size(); ++i) cfg.methods.push_back(parse_method_spec(doc["methods"][i], i));
  if (!doc.contains("sweep_axis")) throw ConfigError("config: missing field 'sweep_axis'");
  cfg.sweep_axis = parse_axis(doc["sweep_axis"]);
  cfg.trials = field<std::size_t>(doc, "trials", where);
  cfg.master_seed = field<std::uint64_t>(doc, "master_seed", where);
  cfg.output_path = field_or<std::string>(doc, "output_path", cfg.output_path, where);
  cfg.threads = field_or<std::size_t>(doc, "threads", 0, where);
  validate(cfg);
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string apply_overrides(const std::string& json_text, std::span<const std::string> overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not key=value");
    std::string pointer = "/" + item.substr(0, eq);
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const std::string raw = item.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    try {
      doc[json::json_pointer(pointer)] = std::move(value);
    } catch (const json::exception& e) {
      throw ConfigError("override '" + item + "': " + e.what());
    }
  }
  return doc.dump(2);
}

}  // namespace ompsd
