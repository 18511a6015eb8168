#include "compass/atlas/atlas_json.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "compass/core/error.hpp"
#include "compass/embedding/model_json.hpp"

namespace compass {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorKind::validation, where + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::validation, where + ": field '" + key + "' has the wrong type");
    }
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorKind::validation, where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

json to_json(const PromptStages& s) {
    return {{"material", s.material},
            {"physical_qualities", s.physical_qualities},
            {"english_description", s.english_description},
            {"image_prompt", s.image_prompt}};
}

PromptStages stages_from_json(const json& j, const std::string& where) {
    PromptStages s;
    s.material = field<std::string>(j, "material", where);
    s.physical_qualities = field<std::string>(j, "physical_qualities", where);
    s.english_description = field<std::string>(j, "english_description", where);
    s.image_prompt = field<std::string>(j, "image_prompt", where);
    return s;
}

json to_json(const Bounds& b) { return {{"min", to_json(b.min)}, {"max", to_json(b.max)}}; }

Bounds bounds_from_json(const json& j, const std::string& where) {
    return {point_from_json(member(j, "min", where)), point_from_json(member(j, "max", where))};
}

}  // namespace

json to_json(const ReplotRecord& r) {
    return {{"replot_id", r.replot_id},
            {"job_id", r.job_id},
            {"frame_index", r.frame_index},
            {"surface", r.surface},
            {"description", r.description},
            {"image_coord", to_json(r.image_coord)},
            {"text_coord", to_json(r.text_coord)},
            {"image_source_dim", r.image_source_dim},
            {"text_source_dim", r.text_source_dim},
            {"dynamic", r.dynamic},
            {"display_color", r.display_color}};
}

ReplotRecord replot_from_json(const json& j) {
    const std::string where = "dynamic point";
    ReplotRecord r;
    r.replot_id = field<std::string>(j, "replot_id", where);
    r.job_id = field<std::string>(j, "job_id", where);
    r.frame_index = field<int>(j, "frame_index", where);
    r.surface = field<std::string>(j, "surface", where);
    r.description = field<std::string>(j, "description", where);
    r.image_coord = point_from_json(member(j, "image_coord", where));
    r.text_coord = point_from_json(member(j, "text_coord", where));
    r.image_source_dim = field<std::size_t>(j, "image_source_dim", where);
    r.text_source_dim = field<std::size_t>(j, "text_source_dim", where);
    r.dynamic = field<bool>(j, "dynamic", where);
    r.display_color = field<std::string>(j, "display_color", where);
    return r;
}

json to_json(const Atlas& atlas) {
    json terms = json::array();
    for (const auto& t : atlas.terms) {
        terms.push_back({{"term_id", t.term_id},
                         {"surface", t.surface},
                         {"stages", to_json(t.stages)},
                         {"text_embedding_id", t.text_embedding_id},
                         {"coord", to_json(t.coord)}});
    }
    json textures = json::array();
    for (const auto& x : atlas.textures) {
        textures.push_back({{"texture_id", x.texture_id},
                            {"term_id", x.term_id},
                            {"image_path", x.image_path},
                            {"thumbnail_path", x.thumbnail_path},
                            {"image_embedding_id", x.image_embedding_id},
                            {"coord", to_json(x.coord)}});
    }
    json dynamic = json::array();
    for (const auto& r : atlas.dynamic_points) dynamic.push_back(to_json(r));
    return {{"version", atlas.version},
            {"params", to_json(atlas.params)},
            {"terms", std::move(terms)},
            {"textures", std::move(textures)},
            {"dynamic_points", std::move(dynamic)},
            {"image_model", to_json(atlas.image_model)},
            {"text_model", to_json(atlas.text_model)},
            {"bounds", {{"image", to_json(atlas.image_bounds)}, {"text", to_json(atlas.text_bounds)}}}};
}

Atlas atlas_from_json(const json& j) {
    require(j.is_object(), ErrorKind::validation, "atlas: document must be an object");
    Atlas atlas;
    atlas.version = field<int>(j, "version", "atlas");
    require(atlas.version == kAtlasVersion, ErrorKind::validation,
            "atlas: unsupported version " + std::to_string(atlas.version));
    atlas.params = params_from_json(member(j, "params", "atlas"));

    const auto& terms = member(j, "terms", "atlas");
    require(terms.is_array(), ErrorKind::validation, "atlas: 'terms' must be an array");
    for (const auto& t : terms) {
        TermRecord r;
        r.term_id = field<std::string>(t, "term_id", "term");
        const std::string where = "term '" + r.term_id + "'";
        r.surface = field<std::string>(t, "surface", where);
        r.stages = stages_from_json(member(t, "stages", where), where);
        r.text_embedding_id = field<std::string>(t, "text_embedding_id", where);
        r.coord = point_from_json(member(t, "coord", where));
        atlas.terms.push_back(std::move(r));
    }
    const auto& textures = member(j, "textures", "atlas");
    require(textures.is_array(), ErrorKind::validation, "atlas: 'textures' must be an array");
    for (const auto& x : textures) {
        TextureRecord r;
        r.texture_id = field<std::string>(x, "texture_id", "texture");
        const std::string where = "texture '" + r.texture_id + "'";
        r.term_id = field<std::string>(x, "term_id", where);
        r.image_path = field<std::string>(x, "image_path", where);
        r.thumbnail_path = field<std::string>(x, "thumbnail_path", where);
        r.image_embedding_id = field<std::string>(x, "image_embedding_id", where);
        r.coord = point_from_json(member(x, "coord", where));
        atlas.textures.push_back(std::move(r));
    }
    const auto& dynamic = member(j, "dynamic_points", "atlas");
    require(dynamic.is_array(), ErrorKind::validation, "atlas: 'dynamic_points' must be an array");
    for (const auto& r : dynamic) atlas.dynamic_points.push_back(replot_from_json(r));

    atlas.image_model = model_from_json(member(j, "image_model", "atlas"));
    atlas.text_model = model_from_json(member(j, "text_model", "atlas"));
    const auto& bounds = member(j, "bounds", "atlas");
    atlas.image_bounds = bounds_from_json(member(bounds, "image", "bounds"), "bounds.image");
    atlas.text_bounds = bounds_from_json(member(bounds, "text", "bounds"), "bounds.text");
    atlas.reindex();
    return atlas;
}

std::string serialize_atlas(const Atlas& atlas) { return to_json(atlas).dump() + "\n"; }

Atlas parse_atlas(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::validation, std::string("atlas: malformed JSON (") + e.what() + ")");
    }
    Atlas atlas = atlas_from_json(j);
    validate_atlas(atlas);
    return atlas;
}

void save_atlas(const Atlas& atlas, const std::filesystem::path& destination) {
    validate_atlas(atlas);
    write_file_atomic(destination, serialize_atlas(atlas));
}

Atlas load_atlas(const std::filesystem::path& source) { return parse_atlas(read_file(source)); }

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    auto tmp = path;
    static std::atomic<unsigned> counter{0};
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), ErrorKind::io, "cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            fail(ErrorKind::io, "short write to '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorKind::io, "cannot replace '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace compass
