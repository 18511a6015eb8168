#include "compass/atlas/manifest.hpp"

#include <fstream>
#include <set>

#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"
#include "compass/embedding/model_json.hpp"
#include "compass/gateway/providers.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json_file(const fs::path& path, const std::string& what) {
    require(fs::exists(path), ErrorKind::io, what + " '" + path.string() + "' does not exist");
    const auto text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::validation, what + " '" + path.string() + "' is not valid JSON (" + e.what() + ")");
    }
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

std::string string_field(const json& j, const char* key, const std::string& where, bool required = true) {
    if (!j.contains(key) || j.at(key).is_null()) {
        require(!required, ErrorKind::validation, where + ": missing field '" + key + "'");
        return {};
    }
    require(j.at(key).is_string(), ErrorKind::validation, where + ": field '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace

BuildManifest load_manifest(const fs::path& path) {
    const json j = parse_json_file(path, "manifest");
    require(j.is_object(), ErrorKind::validation, "manifest: document must be an object");

    BuildManifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto table = [&](const char* key, std::optional<fs::path>& file, json& inline_rows) {
        require(j.contains(key), ErrorKind::validation, std::string("manifest: missing field '") + key + "'");
        const auto& v = j.at(key);
        if (v.is_string()) {
            file = resolve(m.base_dir, v.get<std::string>());
            require(fs::exists(*file), ErrorKind::io,
                    std::string("manifest: ") + key + " file '" + file->string() + "' does not exist");
        } else {
            require(v.is_array(), ErrorKind::validation,
                    std::string("manifest: '") + key + "' must be a path or an array");
            inline_rows = v;
        }
    };
    table("terms", m.terms_file, m.inline_terms);
    table("ownership", m.ownership_file, m.inline_ownership);

    for (auto [key, target] : {std::pair{"image_embeddings", &m.image_embeddings},
                               std::pair{"text_embeddings", &m.text_embeddings}}) {
        *target = resolve(m.base_dir, string_field(j, key, "manifest"));
        require(fs::exists(*target), ErrorKind::io,
                std::string("manifest: ") + key + " file '" + target->string() + "' does not exist");
    }
    if (j.contains("params")) {
        require(j.at("params").is_object(), ErrorKind::validation, "manifest: 'params' must be an object");
        m.params_overrides = j.at("params");
    }
    if (j.contains("output")) m.output = resolve(m.base_dir, string_field(j, "output", "manifest"));
    return m;
}

std::map<std::string, std::vector<float>> read_embeddings_jsonl(const fs::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot read embeddings '" + path.string() + "'");
    std::map<std::string, std::vector<float>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            fail(ErrorKind::validation, where + ": malformed JSON");
        }
        require(j.is_object() && j.contains("id") && j["id"].is_string() && j.contains("vector") &&
                    j["vector"].is_array(),
                ErrorKind::validation, where + ": expected {\"id\": string, \"vector\": [numbers]}");
        std::vector<float> v;
        v.reserve(j["vector"].size());
        for (const auto& x : j["vector"]) {
            require(x.is_number(), ErrorKind::validation, where + ": vector holds a non-number");
            v.push_back(x.get<float>());
        }
        auto id = j["id"].get<std::string>();
        require(out.emplace(id, std::move(v)).second, ErrorKind::validation,
                where + ": duplicate embedding id '" + id + "'");
    }
    return out;
}

void write_embeddings_jsonl(const fs::path& path,
                            const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
    std::string text;
    for (const auto& [id, v] : rows) {
        text += json{{"id", id}, {"vector", v}}.dump();
        text += '\n';
    }
    write_file_atomic(path, text);
}

UmapParams apply_param_overrides(UmapParams base, const json& overrides) {
    if (overrides.is_null()) return base;
    require(overrides.is_object(), ErrorKind::validation, "params overrides must be an object");
    json merged = to_json(base);
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        require(merged.contains(it.key()), ErrorKind::validation,
                "unknown UMAP parameter '" + it.key() + "'");
        merged[it.key()] = it.value();
    }
    return params_from_json(merged);
}

BuildInput read_build_input(const BuildManifest& manifest, const UmapParams& params,
                            const PromptStager* stager) {
    BuildInput input;
    input.params = params;

    const json terms = manifest.terms_file ? parse_json_file(*manifest.terms_file, "terms file")
                                           : manifest.inline_terms;
    require(terms.is_array(), ErrorKind::validation, "terms must be an array");
    for (const auto& t : terms) {
        require(t.is_object(), ErrorKind::validation, "term entries must be objects");
        TermInput in;
        in.term_id = string_field(t, "term_id", "term");
        const std::string where = "term '" + in.term_id + "'";
        in.surface = string_field(t, "surface", where);
        in.text_embedding_id = string_field(t, "text_embedding_id", where, false);
        if (t.contains("stages") && !t.at("stages").is_null()) {
            const auto& s = t.at("stages");
            in.stages.material = string_field(s, "material", where + " stages");
            in.stages.physical_qualities = string_field(s, "physical_qualities", where + " stages");
            in.stages.english_description = string_field(s, "english_description", where + " stages");
            in.stages.image_prompt = string_field(s, "image_prompt", where + " stages");
        } else {
            require(stager != nullptr, ErrorKind::validation, where + " has no stages and no stager is set");
            in.stages = stager->stage_prompts(in.surface);
        }
        input.terms.push_back(std::move(in));
    }

    const json owned = manifest.ownership_file ? parse_json_file(*manifest.ownership_file, "ownership file")
                                               : manifest.inline_ownership;
    require(owned.is_array(), ErrorKind::validation, "ownership must be an array");
    for (const auto& x : owned) {
        require(x.is_object(), ErrorKind::validation, "ownership entries must be objects");
        TextureInput in;
        in.texture_id = string_field(x, "texture_id", "texture");
        const std::string where = "texture '" + in.texture_id + "'";
        in.term_id = string_field(x, "term_id", where);
        in.image_path = string_field(x, "image_path", where, false);
        in.thumbnail_path = string_field(x, "thumbnail_path", where, false);
        in.image_embedding_id = string_field(x, "image_embedding_id", where, false);
        input.textures.push_back(std::move(in));
    }

    input.image_embeddings = read_embeddings_jsonl(manifest.image_embeddings);
    input.text_embeddings = read_embeddings_jsonl(manifest.text_embeddings);
    return input;
}

}  // namespace compass
