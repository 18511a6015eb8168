#include "compass/gateway/mock_dataset.hpp"

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "compass/atlas/atlas_json.hpp"
#include "compass/atlas/manifest.hpp"
#include "compass/core/error.hpp"
#include "compass/core/hash.hpp"
#include "compass/core/rng.hpp"
#include "compass/gateway/mock_providers.hpp"
#include "compass/gateway/png_codec.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSurfaceSalt = 0x5355524600;  // "SURF"

std::string padded(const char* prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, value);
    return buf;
}

}  // namespace

MockDatasetSummary generate_mock_dataset(const fs::path& out_dir, const MockDatasetOptions& options) {
    const std::size_t n_terms = options.terms;
    require(n_terms > 0, ErrorKind::invalid_argument, "mock dataset needs at least one term");
    require(options.textures <= 3 * n_terms && options.textures + n_terms >= 3 * n_terms,
            ErrorKind::invalid_argument,
            "texture count must lie in [2 * terms, 3 * terms] for the mock failure rule");
    const std::size_t want_two = 3 * n_terms - options.textures;
    const std::size_t want_three = n_terms - want_two;

    MockSeedConfig cfg;
    cfg.seed = options.seed;
    MockPromptStager stager(cfg);
    MockTextureGenerator generator(cfg);
    MockTextEmbedder text_embedder(cfg);
    MockImageEmbedder image_embedder(cfg);

    struct Chosen {
        std::string surface;
        PromptStages stages;
    };
    std::vector<Chosen> chosen;
    std::set<std::string> seen;
    std::size_t have_two = 0, have_three = 0;
    const std::size_t max_candidates = 1000 * n_terms + 10000;
    for (std::size_t i = 0; chosen.size() < n_terms; ++i) {
        require(i < max_candidates, ErrorKind::unavailable,
                "could not find enough distinct surfaces for the requested dataset shape");
        auto surface = mimetic_from_key(hash_combine(options.seed ^ kSurfaceSalt, i), cfg.syllables);
        if (!seen.insert(surface).second) continue;
        auto stages = stager.stage_prompts(surface);
        const bool two = generator.drops_third(stages);
        if (two ? have_two == want_two : have_three == want_three) continue;
        (two ? have_two : have_three)++;
        chosen.push_back({std::move(surface), std::move(stages)});
    }

    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "thumbnails");
    json terms = json::array();
    json ownership = json::array();
    std::vector<std::pair<std::string, std::vector<float>>> text_rows, image_rows;
    std::size_t texture_counter = 0;
    for (std::size_t t = 0; t < chosen.size(); ++t) {
        const auto& c = chosen[t];
        const auto term_id = padded("term-", t + 1, 3);
        terms.push_back({{"term_id", term_id},
                         {"surface", c.surface},
                         {"stages",
                          {{"material", c.stages.material},
                           {"physical_qualities", c.stages.physical_qualities},
                           {"english_description", c.stages.english_description},
                           {"image_prompt", c.stages.image_prompt}}}});
        text_rows.emplace_back(term_id, text_embedder.embed_text(c.stages.english_description));

        for (const auto& image : generator.generate_textures(c.stages, 3)) {
            const auto texture_id = padded("tex-", ++texture_counter, 4);
            const auto image_path = "images/" + texture_id + ".png";
            const auto thumb_path = "thumbnails/" + texture_id + ".png";
            write_png(out_dir / image_path, image);
            write_png(out_dir / thumb_path, downsample_box(image, kThumbnailSize, kThumbnailSize));
            ownership.push_back({{"texture_id", texture_id},
                                 {"term_id", term_id},
                                 {"image_path", image_path},
                                 {"thumbnail_path", thumb_path}});
            image_rows.emplace_back(texture_id, image_embedder.embed_image(image));
        }
    }
    require(texture_counter == options.textures, ErrorKind::validation,
            "mock dataset produced " + std::to_string(texture_counter) + " textures, expected " +
                std::to_string(options.textures));

    write_file_atomic(out_dir / "terms.json", terms.dump(2) + "\n");
    write_file_atomic(out_dir / "ownership.json", ownership.dump(2) + "\n");
    write_embeddings_jsonl(out_dir / "text_embeddings.jsonl", text_rows);
    write_embeddings_jsonl(out_dir / "image_embeddings.jsonl", image_rows);
    const json manifest = {{"terms", "terms.json"},
                           {"ownership", "ownership.json"},
                           {"image_embeddings", "image_embeddings.jsonl"},
                           {"text_embeddings", "text_embeddings.jsonl"},
                           {"params", json::object()},
                           {"output", "atlas.json"}};
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

    return {out_dir / "manifest.json", chosen.size(), texture_counter, want_two};
}

}  // namespace compass
