#pragma once

#include "hybridloc/records.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hybridloc {

// Measurement-log CSV. Header line first, then one record per line:
//   timestamp_s,RSS,anchor_id,value,variance
//   timestamp_s,TDOA,anchor_id,reference_id,value,variance
// Numbers are written in shortest round-trip form, so read(write(r)) == r
// bit for bit and canonical files survive write(read(f)) unchanged.
inline constexpr const char* kLogHeader =
    "timestamp_s,kind,anchor_id,anchor_id2,value,variance";

// Throws LogFormatError with the offending line number.
std::vector<MeasurementRecord> read_log(std::istream& in);
std::vector<MeasurementRecord> read_log(const std::filesystem::path& file);

void write_log(std::ostream& out, std::span<const MeasurementRecord> records);
void write_log(const std::filesystem::path& file,
               std::span<const MeasurementRecord> records);

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace hybridloc
