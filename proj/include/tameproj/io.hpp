#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tameproj/core.hpp"

namespace tameproj {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

/// 17 significant digits ("%.17g"); round-trips exactly.
std::string format_double(double x);

/// Serializes JSON with doubles in format_double form. Non-finite doubles
/// are written as null. indent < 0 gives a single line.
std::string dump_json(const Json& j, int indent = -1);

/// JSONL point set: a header object on line 1, then one JSON array of real
/// coordinates per point. `run` (if not null) is added to the header.
void write_point_set(std::ostream& out, const PointSet& ps, const Json& run = nullptr);
void write_point_set(const std::filesystem::path& path, const PointSet& ps,
                     const Json& run = nullptr);
PointSet read_point_set(std::istream& in);
PointSet read_point_set(const std::filesystem::path& path);

/// CSV with header row "source_index,target_index".
void write_pairing_csv(std::ostream& out, const std::vector<std::size_t>& pairing);
std::vector<std::size_t> read_pairing_csv(std::istream& in);

/// Paired sets are stored as <prefix>.source.jsonl, <prefix>.target.jsonl
/// and <prefix>.pairing.csv.
void write_paired(const std::filesystem::path& prefix, const PairedPointSet& paired,
                  const Json& run = nullptr);
PairedPointSet read_paired(const std::filesystem::path& prefix);

/// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tameproj
