#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "compass/atlas/atlas.hpp"

namespace compass {

nlohmann::json to_json(const ReplotRecord& record);
ReplotRecord replot_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Atlas& atlas);
Atlas atlas_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, no whitespace, shortest round-trip numbers,
/// trailing newline.
std::string serialize_atlas(const Atlas& atlas);
/// Parses, checks the schema and every atlas invariant.
Atlas parse_atlas(const std::string& text);

void save_atlas(const Atlas& atlas, const std::filesystem::path& destination);
Atlas load_atlas(const std::filesystem::path& source);

/// Writes through a temporary sibling and renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace compass
