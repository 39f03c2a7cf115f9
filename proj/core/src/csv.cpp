#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ompsd/errors.hpp"
#include "ompsd/harness.hpp"

namespace ompsd {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw IoError("csv line " + std::to_string(line_no) + ": bad number '" + text + "'");
  return value;
}

}  // namespace

std::string format_ser(double ser) {
  int decimals = 9;
  if (ser != 0.0) decimals = std::max(0, 9 - static_cast<int>(std::floor(std::log10(std::abs(ser)))));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, ser);
  return buf;
}

std::string to_csv(std::span<const SweepRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRecord& r : records) {
    out += r.method;
    out += ',' + std::to_string(r.E);
    out += ',' + shortest(r.snr_db);
    out += ',' + std::to_string(r.trials);
    out += ',' + std::to_string(r.symbol_errors);
    out += ',' + std::to_string(r.positions);
    out += ',' + format_ser(r.ser);
    out += ',' + shortest(r.mean_sd_nodes);
    out += ',' + shortest(r.mean_output_sparsity);
    out += ',' + std::to_string(r.discarded_trials);
    out += '\n';
  }
  return out;
}

void write_csv(std::span<const SweepRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = to_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// ser is checked against symbol_errors/positions and then restored to full
// precision, so parse_csv(to_csv(r)) == r.
std::vector<SweepRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("csv: unexpected header");
  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw IoError("csv line " + std::to_string(line_no) + ": expected 10 fields");
    SweepRecord r;
    r.method = f[0];
    r.E = parse_number<std::size_t>(f[1], line_no);
    r.snr_db = parse_number<double>(f[2], line_no);
    r.trials = parse_number<std::size_t>(f[3], line_no);
    r.symbol_errors = parse_number<std::size_t>(f[4], line_no);
    r.positions = parse_number<std::size_t>(f[5], line_no);
    parse_number<double>(f[6], line_no);
    r.mean_sd_nodes = parse_number<double>(f[7], line_no);
    r.mean_output_sparsity = parse_number<double>(f[8], line_no);
    r.discarded_trials = parse_number<std::size_t>(f[9], line_no);
    r.ser = r.positions == 0 ? 0.0 : static_cast<double>(r.symbol_errors) / static_cast<double>(r.positions);
    if (format_ser(r.ser) != f[6])
      throw IoError("csv line " + std::to_string(line_no) + ": ser disagrees with counts");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SweepRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace ompsd
