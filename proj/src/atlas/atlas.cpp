#include "compass/atlas/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "compass/core/error.hpp"

namespace compass {

double Bounds::diagonal() const noexcept { return std::hypot(width(), height()); }

Bounds Bounds::expanded(double fraction) const noexcept {
    const double gx = 0.5 * fraction * width();
    const double gy = 0.5 * fraction * height();
    return {{min.x - gx, min.y - gy}, {max.x + gx, max.y + gy}};
}

Bounds tight_bounds(std::span<const Point2> points) {
    if (points.empty()) return {};
    Bounds b{points.front(), points.front()};
    for (const auto& p : points) {
        b.min.x = std::min(b.min.x, p.x);
        b.min.y = std::min(b.min.y, p.y);
        b.max.x = std::max(b.max.x, p.x);
        b.max.y = std::max(b.max.y, p.y);
    }
    return b;
}

void Atlas::reindex() {
    term_index_.clear();
    texture_index_.clear();
    ownership_.clear();
    for (std::size_t i = 0; i < terms.size(); ++i) term_index_.emplace(terms[i].term_id, i);
    for (std::size_t i = 0; i < textures.size(); ++i) {
        texture_index_.emplace(textures[i].texture_id, i);
        ownership_[textures[i].term_id].push_back(textures[i].texture_id);
    }
    for (auto& [term, owned] : ownership_) std::sort(owned.begin(), owned.end());
}

const TermRecord* Atlas::find_term(const std::string& term_id) const {
    auto it = term_index_.find(term_id);
    return it == term_index_.end() ? nullptr : &terms[it->second];
}

const TextureRecord* Atlas::find_texture(const std::string& texture_id) const {
    auto it = texture_index_.find(texture_id);
    return it == texture_index_.end() ? nullptr : &textures[it->second];
}

const ReplotRecord* Atlas::find_replot(const std::string& replot_id) const {
    auto it = std::find_if(dynamic_points.begin(), dynamic_points.end(),
                           [&](const ReplotRecord& r) { return r.replot_id == replot_id; });
    return it == dynamic_points.end() ? nullptr : &*it;
}

const std::vector<std::string>& Atlas::owned_textures(const std::string& term_id) const {
    static const std::vector<std::string> kNone;
    auto it = ownership_.find(term_id);
    return it == ownership_.end() ? kNone : it->second;
}

bool Atlas::operator==(const Atlas& o) const {
    return version == o.version && params == o.params && terms == o.terms &&
           textures == o.textures && image_model == o.image_model && text_model == o.text_model &&
           dynamic_points == o.dynamic_points && image_bounds == o.image_bounds &&
           text_bounds == o.text_bounds;
}

namespace {

EmbeddingMatrix gather(const std::map<std::string, std::vector<float>>& table,
                       const std::vector<std::string>& ids, Modality modality) {
    const std::size_t dim = declared_dim(modality);
    EmbeddingMatrix m(ids.size(), dim);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = table.find(ids[i]);
        require(it != table.end(), ErrorKind::validation,
                "missing " + to_string(modality) + " embedding for '" + ids[i] + "'");
        EmbeddingVector v{ids[i], modality, it->second};
        v.validate();
        require(v.values.size() == dim, ErrorKind::validation,
                to_string(modality) + " embedding '" + ids[i] + "' has " +
                    std::to_string(v.values.size()) + " values, expected " + std::to_string(dim));
        std::copy(v.values.begin(), v.values.end(), m.row(i).begin());
    }
    return m;
}

std::string ownership_rule_message(const std::string& term_id, std::size_t count) {
    return "term '" + term_id + "' owns " + std::to_string(count) +
           " textures; each term must own 1-3 textures";
}

}  // namespace

Atlas build_atlas(BuildInput input) {
    input.params.validate();
    auto& terms = input.terms;
    auto& textures = input.textures;
    std::sort(terms.begin(), terms.end(),
              [](const TermInput& a, const TermInput& b) { return a.term_id < b.term_id; });
    std::sort(textures.begin(), textures.end(),
              [](const TextureInput& a, const TextureInput& b) { return a.texture_id < b.texture_id; });

    std::map<std::string, std::size_t> owned_count;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        require(!t.term_id.empty(), ErrorKind::validation, "term with empty term_id");
        require(i == 0 || terms[i - 1].term_id != t.term_id, ErrorKind::validation,
                "duplicate term_id '" + t.term_id + "'");
        require(!t.surface.empty(), ErrorKind::validation, "term '" + t.term_id + "' has an empty surface");
        require(t.stages.complete(), ErrorKind::validation,
                "term '" + t.term_id + "' is missing prompt stages");
        owned_count[t.term_id] = 0;
    }
    for (std::size_t i = 0; i < textures.size(); ++i) {
        const auto& x = textures[i];
        require(!x.texture_id.empty(), ErrorKind::validation, "texture with empty texture_id");
        require(i == 0 || textures[i - 1].texture_id != x.texture_id, ErrorKind::validation,
                "duplicate texture_id '" + x.texture_id + "'");
        auto it = owned_count.find(x.term_id);
        require(it != owned_count.end(), ErrorKind::validation,
                "orphan texture '" + x.texture_id + "' references unknown term '" + x.term_id + "'");
        ++it->second;
    }
    for (const auto& [term_id, count] : owned_count) {
        require(count >= kMinTexturesPerTerm && count <= kMaxTexturesPerTerm, ErrorKind::validation,
                ownership_rule_message(term_id, count));
    }

    Atlas atlas;
    atlas.params = input.params;
    std::vector<std::string> text_ids, image_ids;
    for (auto& t : terms) {
        TermRecord r;
        r.term_id = t.term_id;
        r.surface = t.surface;
        r.stages = t.stages;
        r.text_embedding_id = t.text_embedding_id.empty() ? t.term_id : t.text_embedding_id;
        text_ids.push_back(r.text_embedding_id);
        atlas.terms.push_back(std::move(r));
    }
    for (auto& x : textures) {
        TextureRecord r;
        r.texture_id = x.texture_id;
        r.term_id = x.term_id;
        r.image_path = x.image_path;
        r.thumbnail_path = x.thumbnail_path;
        r.image_embedding_id = x.image_embedding_id.empty() ? x.texture_id : x.image_embedding_id;
        image_ids.push_back(r.image_embedding_id);
        atlas.textures.push_back(std::move(r));
    }

    auto image_vectors = gather(input.image_embeddings, image_ids, Modality::image);
    auto text_vectors = gather(input.text_embeddings, text_ids, Modality::text);
    atlas.image_model = umap_fit(image_ids, std::move(image_vectors), input.params);
    atlas.text_model = umap_fit(text_ids, std::move(text_vectors), input.params);

    for (std::size_t i = 0; i < atlas.terms.size(); ++i) atlas.terms[i].coord = atlas.text_model.coords[i];
    for (std::size_t i = 0; i < atlas.textures.size(); ++i) {
        atlas.textures[i].coord = atlas.image_model.coords[i];
    }
    atlas.image_bounds = tight_bounds(atlas.image_model.coords);
    atlas.text_bounds = tight_bounds(atlas.text_model.coords);
    atlas.reindex();
    validate_atlas(atlas);
    return atlas;
}

std::vector<std::string> highlight_for_term(const Atlas& atlas, const std::string& term_id) {
    require(atlas.find_term(term_id) != nullptr, ErrorKind::not_found,
            "unknown term '" + term_id + "'");
    return atlas.owned_textures(term_id);
}

std::string highlight_for_texture(const Atlas& atlas, const std::string& texture_id) {
    const auto* x = atlas.find_texture(texture_id);
    require(x != nullptr, ErrorKind::not_found, "unknown texture '" + texture_id + "'");
    return x->term_id;
}

std::vector<std::string> check_atlas(const Atlas& atlas) {
    std::vector<std::string> issues;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) issues.push_back(what);
    };

    check(atlas.version == kAtlasVersion, "unsupported atlas version " + std::to_string(atlas.version));
    try {
        atlas.params.validate();
    } catch (const Error& e) {
        issues.push_back(std::string("params: ") + e.what());
    }

    std::map<std::string, std::size_t> owned;
    for (std::size_t i = 0; i < atlas.terms.size(); ++i) {
        const auto& t = atlas.terms[i];
        check(i == 0 || atlas.terms[i - 1].term_id < t.term_id,
              "terms are not strictly ascending by term_id at '" + t.term_id + "'");
        check(!t.surface.empty(), "term '" + t.term_id + "' has an empty surface");
        check(t.stages.complete(), "term '" + t.term_id + "' is missing prompt stages");
        check(std::isfinite(t.coord.x) && std::isfinite(t.coord.y),
              "term '" + t.term_id + "' has a non-finite coord");
        owned[t.term_id] = 0;
    }
    for (std::size_t i = 0; i < atlas.textures.size(); ++i) {
        const auto& x = atlas.textures[i];
        check(i == 0 || atlas.textures[i - 1].texture_id < x.texture_id,
              "textures are not strictly ascending by texture_id at '" + x.texture_id + "'");
        auto it = owned.find(x.term_id);
        if (it == owned.end()) {
            issues.push_back("orphan texture '" + x.texture_id + "' references unknown term '" +
                             x.term_id + "'");
        } else {
            ++it->second;
        }
    }
    for (const auto& [term_id, count] : owned) {
        check(count >= kMinTexturesPerTerm && count <= kMaxTexturesPerTerm,
              ownership_rule_message(term_id, count));
    }

    auto check_model = [&](const UmapModel& model, const char* name, std::size_t dim,
                           const std::vector<std::string>& ids) {
        try {
            model.validate();
        } catch (const Error& e) {
            issues.push_back(std::string(name) + ": " + e.what());
            return false;
        }
        check(model.params == atlas.params, std::string(name) + " params differ from atlas params");
        check(model.dim() == dim, std::string(name) + " dimension is " + std::to_string(model.dim()) +
                                      ", expected " + std::to_string(dim));
        check(model.training_ids == ids,
              std::string(name) + " training ids do not match the record embedding ids");
        return model.coords.size() == ids.size();
    };

    std::vector<std::string> text_ids, image_ids;
    for (const auto& t : atlas.terms) text_ids.push_back(t.text_embedding_id);
    for (const auto& x : atlas.textures) image_ids.push_back(x.image_embedding_id);
    if (check_model(atlas.text_model, "text_model", kTextEmbeddingDim, text_ids)) {
        for (std::size_t i = 0; i < atlas.terms.size(); ++i) {
            check(atlas.terms[i].coord == atlas.text_model.coords[i],
                  "term '" + atlas.terms[i].term_id + "' coord differs from its text_model row");
        }
        check(atlas.text_bounds == tight_bounds(atlas.text_model.coords),
              "text bounds are not the tight box of the term coords");
    }
    if (check_model(atlas.image_model, "image_model", kImageEmbeddingDim, image_ids)) {
        for (std::size_t i = 0; i < atlas.textures.size(); ++i) {
            check(atlas.textures[i].coord == atlas.image_model.coords[i],
                  "texture '" + atlas.textures[i].texture_id + "' coord differs from its image_model row");
        }
        check(atlas.image_bounds == tight_bounds(atlas.image_model.coords),
              "image bounds are not the tight box of the texture coords");
    }

    std::set<std::string> replot_ids;
    for (const auto& r : atlas.dynamic_points) {
        check(replot_ids.insert(r.replot_id).second, "duplicate replot_id '" + r.replot_id + "'");
        check(r.dynamic, "replot '" + r.replot_id + "' is not flagged dynamic");
        check(r.display_color == kDynamicPointColor, "replot '" + r.replot_id + "' is not orange");
        check(std::isfinite(r.image_coord.x) && std::isfinite(r.image_coord.y) &&
                  std::isfinite(r.text_coord.x) && std::isfinite(r.text_coord.y),
              "replot '" + r.replot_id + "' has a non-finite coord");
        check(r.frame_index >= 0, "replot '" + r.replot_id + "' has a negative frame_index");
        check(r.image_source_dim == kImageEmbeddingDim && r.text_source_dim == kTextEmbeddingDim,
              "replot '" + r.replot_id + "' coords do not come from the image/text models");
        check(atlas.find_texture(r.replot_id) == nullptr && atlas.find_term(r.replot_id) == nullptr,
              "replot_id '" + r.replot_id + "' collides with an authored id");
    }
    return issues;
}

void validate_atlas(const Atlas& atlas) {
    const auto issues = check_atlas(atlas);
    if (!issues.empty()) fail(ErrorKind::validation, issues.front());
}

}  // namespace compass
