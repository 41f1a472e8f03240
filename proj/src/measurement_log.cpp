#include "hybridloc/measurement_log.hpp"

#include "hybridloc/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace hybridloc {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v))
    throw LogFormatError(line, std::string("bad ") + what + " '" + std::string(field) + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<MeasurementRecord> read_log(std::istream& in) {
  std::vector<MeasurementRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (!line.starts_with("timestamp_s,kind"))
        throw LogFormatError(line_no, "missing header line");
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    MeasurementRecord r;
    if (f.size() < 2) throw LogFormatError(line_no, "too few fields");
    r.timestamp = parse_number(f[0], line_no, "timestamp");
    if (f[1] == "RSS") {
      if (f.size() != 5) throw LogFormatError(line_no, "RSS record needs 5 fields");
      r.kind = MeasurementKind::kRss;
      r.anchor = std::string(f[2]);
      r.value = parse_number(f[3], line_no, "value");
      r.variance = parse_number(f[4], line_no, "variance");
    } else if (f[1] == "TDOA") {
      if (f.size() != 6) throw LogFormatError(line_no, "TDOA record needs 6 fields");
      r.kind = MeasurementKind::kTdoa;
      r.anchor = std::string(f[2]);
      r.reference = std::string(f[3]);
      if (r.reference.empty()) throw LogFormatError(line_no, "empty reference anchor id");
      r.value = parse_number(f[4], line_no, "value");
      r.variance = parse_number(f[5], line_no, "variance");
    } else {
      throw LogFormatError(line_no, "unknown kind '" + std::string(f[1]) + "'");
    }
    if (r.anchor.empty()) throw LogFormatError(line_no, "empty anchor id");
    if (!(r.variance > 0.0)) throw LogFormatError(line_no, "variance must be > 0");
    out.push_back(std::move(r));
  }
  if (!header_seen) throw LogFormatError(1, "missing header line");
  return out;
}

std::vector<MeasurementRecord> read_log(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LogFormatError(0, "cannot open " + file.string());
  return read_log(in);
}

void write_log(std::ostream& out, std::span<const MeasurementRecord> records) {
  out << kLogHeader << '\n';
  for (const MeasurementRecord& r : records) {
    out << format_double(r.timestamp) << ',';
    if (r.kind == MeasurementKind::kRss) {
      out << "RSS," << r.anchor << ',';
    } else {
      out << "TDOA," << r.anchor << ',' << r.reference << ',';
    }
    out << format_double(r.value) << ',' << format_double(r.variance) << '\n';
  }
}

void write_log(const std::filesystem::path& file,
               std::span<const MeasurementRecord> records) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  write_log(out, records);
}

}  // namespace hybridloc
