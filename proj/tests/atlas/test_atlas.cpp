#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "compass/atlas/atlas.hpp"
#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"
#include "support/atlas_fixture.hpp"

using namespace compass;
using namespace compass::testing;

namespace {

const Atlas& fixture_atlas() {
    static const Atlas atlas = build_atlas(fixture_input());
    return atlas;
}

template <class F>
std::string error_text(F&& f, ErrorKind expected) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == expected);
        return e.what();
    }
    FAIL("expected an error");
    return {};
}

}  // namespace

TEST_CASE("10 terms owning 2 textures each build into a valid atlas") {
    const auto& a = fixture_atlas();
    CHECK(a.terms.size() == 10);
    CHECK(a.textures.size() == 20);
    CHECK(a.text_model.coords.size() == 10);
    CHECK(a.image_model.coords.size() == 20);
    CHECK(check_atlas(a).empty());
    for (std::size_t i = 0; i < a.terms.size(); ++i) CHECK(a.terms[i].coord == a.text_model.coords[i]);
    for (std::size_t i = 0; i < a.textures.size(); ++i) {
        CHECK(a.textures[i].coord == a.image_model.coords[i]);
    }
    CHECK(a.image_model.dim() == kImageEmbeddingDim);
    CHECK(a.text_model.dim() == kTextEmbeddingDim);
}

TEST_CASE("bounds are tight and contain every static coord") {
    const auto& a = fixture_atlas();
    double min_x = 1e300, max_x = -1e300;
    for (const auto& x : a.textures) {
        CHECK(a.image_bounds.contains(x.coord));
        min_x = std::min(min_x, x.coord.x);
        max_x = std::max(max_x, x.coord.x);
    }
    CHECK(a.image_bounds.min.x == min_x);
    CHECK(a.image_bounds.max.x == max_x);
    for (const auto& t : a.terms) CHECK(a.text_bounds.contains(t.coord));
}

TEST_CASE("Bounds helpers") {
    const std::vector<Point2> pts = {{0, 0}, {4, 1}, {2, 3}};
    const auto b = tight_bounds(pts);
    CHECK(b.min == Point2{0, 0});
    CHECK(b.max == Point2{4, 3});
    CHECK(b.diagonal() == doctest::Approx(5.0));
    const auto e = b.expanded(0.5);
    CHECK(e.width() == doctest::Approx(6.0));
    CHECK(e.height() == doctest::Approx(4.5));
    CHECK(e.contains({-0.9, -0.7}));
    CHECK_FALSE(e.contains({-1.1, 0}));
    const std::vector<Point2> one = {{2, 2}};
    CHECK(tight_bounds(one).width() == 0.0);
}

TEST_CASE("highlighting follows authored ownership only") {
    const auto& a = fixture_atlas();
    CHECK(highlight_for_term(a, "T01") == std::vector<std::string>{"X01", "X02"});
    CHECK(highlight_for_texture(a, "X01") == "T01");
    CHECK(highlight_for_texture(a, "X20") == "T10");
    error_text([&] { highlight_for_term(a, "T99"); }, ErrorKind::not_found);
    error_text([&] { highlight_for_texture(a, "replot-0001"); }, ErrorKind::not_found);
}

TEST_CASE("round trip texture -> term -> textures holds everywhere and ownership partitions") {
    const auto& a = fixture_atlas();
    std::size_t total = 0;
    std::set<std::string> seen;
    for (const auto& t : a.terms) {
        const auto owned = highlight_for_term(a, t.term_id);
        CHECK(owned.size() >= 1);
        CHECK(owned.size() <= 3);
        CHECK(std::is_sorted(owned.begin(), owned.end()));
        total += owned.size();
        for (const auto& x : owned) CHECK(seen.insert(x).second);
    }
    CHECK(total == a.textures.size());
    for (const auto& x : a.textures) {
        const auto owned = highlight_for_term(a, highlight_for_texture(a, x.texture_id));
        CHECK(std::find(owned.begin(), owned.end(), x.texture_id) != owned.end());
    }
}

TEST_CASE("a term owning one texture highlights a singleton") {
    auto in = fixture_input(8, 1);
    const auto a = build_atlas(in);
    CHECK(highlight_for_term(a, "T03") == std::vector<std::string>{"X03"});
}

TEST_CASE("build rejects broken ownership and missing embeddings") {
    SUBCASE("orphan texture") {
        auto in = fixture_input();
        in.textures[4].term_id = "T77";
        const auto msg = error_text([&] { build_atlas(in); }, ErrorKind::validation);
        CHECK(msg.find("orphan texture 'X05'") != std::string::npos);
    }
    SUBCASE("term with four textures") {
        auto in = fixture_input();
        in.textures[2].term_id = "T01";
        in.textures[3].term_id = "T01";
        const auto msg = error_text([&] { build_atlas(in); }, ErrorKind::validation);
        CHECK(msg.find("T01") != std::string::npos);
        CHECK(msg.find("1-3") != std::string::npos);
    }
    SUBCASE("term with no textures") {
        auto in = fixture_input();
        in.textures[0].term_id = "T02";
        in.textures[1].term_id = "T03";
        const auto msg = error_text([&] { build_atlas(in); }, ErrorKind::validation);
        CHECK(msg.find("'T01' owns 0") != std::string::npos);
    }
    SUBCASE("missing image embedding names the id") {
        auto in = fixture_input();
        in.image_embeddings.erase("X07");
        const auto msg = error_text([&] { build_atlas(in); }, ErrorKind::validation);
        CHECK(msg.find("X07") != std::string::npos);
    }
    SUBCASE("missing text embedding names the id") {
        auto in = fixture_input();
        in.text_embeddings.erase("T04");
        const auto msg = error_text([&] { build_atlas(in); }, ErrorKind::validation);
        CHECK(msg.find("T04") != std::string::npos);
    }
    SUBCASE("wrong dimension") {
        auto in = fixture_input();
        in.image_embeddings["X01"].resize(100, 0.5f);
        error_text([&] { build_atlas(in); }, ErrorKind::validation);
    }
    SUBCASE("duplicate ids") {
        auto in = fixture_input();
        in.terms.push_back(in.terms.front());
        error_text([&] { build_atlas(in); }, ErrorKind::validation);
    }
    SUBCASE("incomplete stages") {
        auto in = fixture_input();
        in.terms[3].stages.image_prompt.clear();
        error_text([&] { build_atlas(in); }, ErrorKind::validation);
    }
}

TEST_CASE("serialization is canonical, byte-stable and order independent") {
    const auto& a = fixture_atlas();
    const auto text = serialize_atlas(a);
    CHECK(text.back() == '\n');
    CHECK(serialize_atlas(a) == text);
    const auto back = parse_atlas(text);
    CHECK(back == a);
    CHECK(serialize_atlas(back) == text);

    auto shuffled = fixture_input();
    std::mt19937 gen(5);
    std::shuffle(shuffled.terms.begin(), shuffled.terms.end(), gen);
    std::shuffle(shuffled.textures.begin(), shuffled.textures.end(), gen);
    CHECK(serialize_atlas(build_atlas(shuffled)) == text);

    const auto j = nlohmann::json::parse(text);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"bounds", "dynamic_points", "image_model", "params",
                                           "terms", "text_model", "textures", "version"});
    CHECK(j["dynamic_points"].empty());
}

TEST_CASE("load rejects a document where a term owns four textures") {
    auto j = to_json(fixture_atlas());
    j["textures"][2]["term_id"] = "T01";
    j["textures"][3]["term_id"] = "T01";
    const auto msg = error_text([&] { parse_atlas(j.dump()); }, ErrorKind::validation);
    CHECK(msg.find("'T01' owns 4") != std::string::npos);
    CHECK(msg.find("1-3") != std::string::npos);
}

TEST_CASE("load rejects truncated and schema-violating documents") {
    const auto text = serialize_atlas(fixture_atlas());
    const auto msg = error_text([&] { parse_atlas(text.substr(0, text.size() / 2)); }, ErrorKind::validation);
    CHECK(msg.find("malformed JSON") != std::string::npos);

    auto j = to_json(fixture_atlas());
    j.erase("bounds");
    CHECK(error_text([&] { parse_atlas(j.dump()); }, ErrorKind::validation).find("bounds") !=
          std::string::npos);

    j = to_json(fixture_atlas());
    j["terms"][0]["coord"] = {999.0, 0.0};
    CHECK(error_text([&] { parse_atlas(j.dump()); }, ErrorKind::validation).find("T01") !=
          std::string::npos);

    j = to_json(fixture_atlas());
    j["version"] = 2;
    error_text([&] { parse_atlas(j.dump()); }, ErrorKind::validation);
}

TEST_CASE("dynamic point invariants are checked") {
    Atlas a = fixture_atlas();
    ReplotRecord r;
    r.replot_id = "replot-0001";
    r.job_id = "job-1";
    r.image_source_dim = kImageEmbeddingDim;
    r.text_source_dim = kTextEmbeddingDim;
    a.dynamic_points.push_back(r);
    CHECK(check_atlas(a).empty());
    CHECK(parse_atlas(serialize_atlas(a)) == a);

    auto crossed = a;
    std::swap(crossed.dynamic_points[0].image_source_dim, crossed.dynamic_points[0].text_source_dim);
    CHECK_FALSE(check_atlas(crossed).empty());

    auto blue = a;
    blue.dynamic_points[0].display_color = "blue";
    CHECK_FALSE(check_atlas(blue).empty());

    auto dup = a;
    dup.dynamic_points.push_back(r);
    CHECK_FALSE(check_atlas(dup).empty());
}

TEST_CASE("save and load through the filesystem") {
    const auto path = std::filesystem::temp_directory_path() / "compass-atlas-save-test" / "atlas.json";
    save_atlas(fixture_atlas(), path);
    CHECK(load_atlas(path) == fixture_atlas());
    CHECK(read_file(path) == serialize_atlas(fixture_atlas()));
    std::filesystem::remove_all(path.parent_path());
    error_text([&] { load_atlas(path); }, ErrorKind::io);
}
