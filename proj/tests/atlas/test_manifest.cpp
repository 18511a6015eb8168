#include <doctest.h>

#include <fstream>

#include "compass/atlas/atlas_json.hpp"
#include "compass/atlas/manifest.hpp"
#include "compass/core/error.hpp"
#include "compass/gateway/mock_providers.hpp"
#include "support/atlas_fixture.hpp"
#include "support/temp_dir.hpp"

using namespace compass;
using namespace compass::testing;
using nlohmann::json;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream(p) << s;
}

// Writes the fixture as a manifest with inline tables.
std::filesystem::path write_fixture_manifest(const TempDir& dir, bool with_stages = true) {
    const auto in = fixture_input();
    json terms = json::array(), owned = json::array();
    for (const auto& t : in.terms) {
        json row = {{"term_id", t.term_id}, {"surface", t.surface}};
        if (with_stages) {
            row["stages"] = {{"material", t.stages.material},
                             {"physical_qualities", t.stages.physical_qualities},
                             {"english_description", t.stages.english_description},
                             {"image_prompt", t.stages.image_prompt}};
        }
        terms.push_back(row);
    }
    for (const auto& x : in.textures) {
        owned.push_back({{"texture_id", x.texture_id}, {"term_id", x.term_id}, {"image_path", x.image_path}});
    }
    std::vector<std::pair<std::string, std::vector<float>>> img(in.image_embeddings.begin(),
                                                               in.image_embeddings.end());
    std::vector<std::pair<std::string, std::vector<float>>> txt(in.text_embeddings.begin(),
                                                               in.text_embeddings.end());
    write_embeddings_jsonl(dir / "img.jsonl", img);
    write_embeddings_jsonl(dir / "txt.jsonl", txt);
    write_text(dir / "terms.json", terms.dump());
    const json manifest = {{"terms", "terms.json"},
                           {"ownership", owned},
                           {"image_embeddings", "img.jsonl"},
                           {"text_embeddings", "txt.jsonl"},
                           {"params", {{"n_neighbors", 5}, {"n_epochs", 60}}},
                           {"output", "out/atlas.json"}};
    write_text(dir / "manifest.json", manifest.dump());
    return dir / "manifest.json";
}

}  // namespace

TEST_CASE("manifest with a terms file and an inline ownership table builds the fixture atlas") {
    TempDir dir("manifest");
    const auto m = load_manifest(write_fixture_manifest(dir));
    CHECK(m.terms_file.has_value());
    CHECK_FALSE(m.ownership_file.has_value());
    CHECK(m.output == dir / "out/atlas.json");
    const auto params = apply_param_overrides(UmapParams{}, m.params_overrides);
    CHECK(params.n_neighbors == 5);
    CHECK(params.min_dist == 0.5);
    const auto atlas = build_atlas(read_build_input(m, params));
    auto expected = fixture_input();
    for (auto& x : expected.textures) x.thumbnail_path.clear();
    CHECK(atlas == build_atlas(expected));
}

TEST_CASE("terms without stages need a stager") {
    TempDir dir("manifest");
    const auto m = load_manifest(write_fixture_manifest(dir, false));
    CHECK_THROWS_AS(read_build_input(m, UmapParams{}), Error);
    MockPromptStager stager(MockSeedConfig{});
    const auto in = read_build_input(m, UmapParams{}, &stager);
    CHECK(in.terms[0].stages == stager.stage_prompts(in.terms[0].surface));
}

TEST_CASE("manifest errors") {
    TempDir dir("manifest");
    const auto path = write_fixture_manifest(dir);
    SUBCASE("missing embeddings file is an I/O error") {
        std::filesystem::remove(dir / "img.jsonl");
        try {
            load_manifest(path);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::io);
            CHECK(std::string(e.what()).find("img.jsonl") != std::string::npos);
        }
    }
    SUBCASE("missing manifest") { CHECK_THROWS_AS(load_manifest(dir / "nope.json"), Error); }
    SUBCASE("unknown parameter override") {
        CHECK_THROWS_AS(apply_param_overrides(UmapParams{}, json{{"n_neighbours", 3}}), Error);
    }
    SUBCASE("invalid override value") {
        CHECK_THROWS_AS(apply_param_overrides(UmapParams{}, json{{"n_neighbors", 1}}), Error);
    }
}

TEST_CASE("embedding files reject malformed lines and duplicate ids, naming the line") {
    TempDir dir("jsonl");
    write_text(dir / "a.jsonl", "{\"id\":\"a\",\"vector\":[1,2]}\n\n{\"id\":\"a\",\"vector\":[3]}\n");
    try {
        read_embeddings_jsonl(dir / "a.jsonl");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("a.jsonl:3") != std::string::npos);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
    write_text(dir / "b.jsonl", "{\"id\":\"a\",\"vector\":[1,\"x\"]}\n");
    CHECK_THROWS_AS(read_embeddings_jsonl(dir / "b.jsonl"), Error);
    write_text(dir / "c.jsonl", "{\"id\":\"a\",\"vector\":[1,2]\n");
    CHECK_THROWS_AS(read_embeddings_jsonl(dir / "c.jsonl"), Error);

    const std::vector<std::pair<std::string, std::vector<float>>> rows = {{"p", {0.1f, -2.5f}},
                                                                          {"q", {1e-30f, 3.0f}}};
    write_embeddings_jsonl(dir / "d.jsonl", rows);
    const auto back = read_embeddings_jsonl(dir / "d.jsonl");
    CHECK(back.at("p") == rows[0].second);
    CHECK(back.at("q") == rows[1].second);
}
