#include "qra/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qra/errors.hpp"

namespace qra {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, const char* column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DataError(std::string("csv column ") + column + ": cannot parse '" + text + "'");
  }
  return value;
}

std::optional<int> parse_optional(const std::string& text, const char* column) {
  if (text.empty()) return std::nullopt;
  return parse_field<int>(text, column);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw DataError("cannot format double");
  return std::string(buf, ptr);
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    if (r.experiment.find(',') != std::string::npos) throw DataError("experiment name must not contain ','");
    out += r.experiment;
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.trial);
    out += ',' + std::to_string(r.nc);
    out += ',';
    if (r.m) out += std::to_string(*r.m);
    out += ',';
    if (r.iteration) out += std::to_string(*r.iteration);
    out += ',' + format_double(r.mse_path1);
    out += ',' + format_double(r.mse_path2);
    out += ',' + format_double(r.loss);
    out += ',' + format_double(r.wall_time_s);
    out += '\n';
  }
  return out;
}

std::vector<ResultRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw DataError("csv header does not match the result schema");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 10) throw DataError("csv row has " + std::to_string(f.size()) + " fields, expected 10");
    ResultRecord r;
    r.experiment = f[0];
    r.seed = parse_field<std::uint64_t>(f[1], "seed");
    r.trial = parse_field<std::uint64_t>(f[2], "trial");
    r.nc = parse_field<int>(f[3], "nc");
    r.m = parse_optional(f[4], "m");
    r.iteration = parse_optional(f[5], "iteration");
    r.mse_path1 = parse_field<double>(f[6], "mse_path1");
    r.mse_path2 = parse_field<double>(f[7], "mse_path2");
    r.loss = parse_field<double>(f[8], "loss");
    r.wall_time_s = parse_field<double>(f[9], "wall_time_s");
    out.push_back(std::move(r));
  }
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string text = records_to_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<ResultRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return records_from_csv(ss.str());
}

}  // namespace qra
