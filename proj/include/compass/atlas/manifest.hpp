#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "compass/atlas/atlas.hpp"

namespace compass {

class PromptStager;

/// Build manifest. Terms and the ownership table are inline arrays or separate
/// JSON files; embeddings are JSON-lines files of {"id", "vector"} records.
/// Relative paths resolve against the manifest's directory.
struct BuildManifest {
    std::filesystem::path base_dir;
    std::optional<std::filesystem::path> terms_file;
    std::optional<std::filesystem::path> ownership_file;
    nlohmann::json inline_terms;      // array or null
    nlohmann::json inline_ownership;  // array or null
    std::filesystem::path image_embeddings;
    std::filesystem::path text_embeddings;
    nlohmann::json params_overrides = nlohmann::json::object();
    std::optional<std::filesystem::path> output;
};

BuildManifest load_manifest(const std::filesystem::path& path);

/// Reads one embedding per line. Duplicate ids and malformed lines are errors
/// that name the line.
std::map<std::string, std::vector<float>> read_embeddings_jsonl(const std::filesystem::path& path);
void write_embeddings_jsonl(const std::filesystem::path& path,
                            const std::vector<std::pair<std::string, std::vector<float>>>& rows);

/// Applies manifest overrides on top of `base`.
UmapParams apply_param_overrides(UmapParams base, const nlohmann::json& overrides);

/// Resolves every referenced file. Terms without stages are staged with
/// `stager` when given, otherwise that is an error.
BuildInput read_build_input(const BuildManifest& manifest, const UmapParams& params,
                            const PromptStager* stager = nullptr);

}  // namespace compass
