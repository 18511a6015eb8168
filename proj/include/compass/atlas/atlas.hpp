#pragma once

#include <map>
#include <string>
#include <vector>

#include "compass/atlas/records.hpp"
#include "compass/embedding/umap.hpp"

namespace compass {

inline constexpr int kAtlasVersion = 1;
inline constexpr std::size_t kMinTexturesPerTerm = 1;
inline constexpr std::size_t kMaxTexturesPerTerm = 3;

/// The built atlas: both maps, their records and the dynamic points.
/// Terms are ordered by term_id and textures by texture_id; model rows follow
/// the same order.
class Atlas {
public:
    int version = kAtlasVersion;
    UmapParams params;
    std::vector<TermRecord> terms;
    std::vector<TextureRecord> textures;
    UmapModel image_model;
    UmapModel text_model;
    std::vector<ReplotRecord> dynamic_points;
    Bounds image_bounds;
    Bounds text_bounds;

    /// Rebuilds the id lookups. Call after mutating terms or textures.
    void reindex();

    const TermRecord* find_term(const std::string& term_id) const;
    const TextureRecord* find_texture(const std::string& texture_id) const;
    const ReplotRecord* find_replot(const std::string& replot_id) const;
    /// Owned texture ids, ascending; empty for an unknown term.
    const std::vector<std::string>& owned_textures(const std::string& term_id) const;

    bool operator==(const Atlas& other) const;

private:
    std::map<std::string, std::size_t> term_index_;
    std::map<std::string, std::size_t> texture_index_;
    std::map<std::string, std::vector<std::string>> ownership_;
};

struct TermInput {
    std::string term_id;
    std::string surface;
    PromptStages stages;
    std::string text_embedding_id;  // defaults to term_id
};

struct TextureInput {
    std::string texture_id;
    std::string term_id;
    std::string image_path;
    std::string thumbnail_path;
    std::string image_embedding_id;  // defaults to texture_id
};

struct BuildInput {
    std::vector<TermInput> terms;
    std::vector<TextureInput> textures;
    std::map<std::string, std::vector<float>> image_embeddings;
    std::map<std::string, std::vector<float>> text_embeddings;
    UmapParams params;
};

/// Validates ownership and embeddings, fits one map per modality, writes the
/// coordinates back into the records and computes bounds. The result does not
/// depend on the order of the input records.
Atlas build_atlas(BuildInput input);

/// Authored textures of a term, ascending by id. Pure lookup, no similarity.
std::vector<std::string> highlight_for_term(const Atlas& atlas, const std::string& term_id);
/// The single term a texture was generated from.
std::string highlight_for_texture(const Atlas& atlas, const std::string& texture_id);

/// Every violated invariant, in check order. Empty means valid.
std::vector<std::string> check_atlas(const Atlas& atlas);
/// Throws Error(validation) with the first violated invariant.
void validate_atlas(const Atlas& atlas);

}  // namespace compass
