#include <doctest.h>

#include <cmath>
#include <map>

#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"
#include "compass/gateway/mock_providers.hpp"
#include "compass/replot/replot.hpp"
#include "support/atlas_fixture.hpp"
#include "support/synthetic.hpp"

using namespace compass;
using namespace compass::testing;

namespace {

const Atlas& base_atlas() {
    static const Atlas atlas = build_atlas(fixture_input());
    return atlas;
}

Gateway mock_gateway() { return Gateway(make_mock_providers(MockSeedConfig{})); }

InterpolationJob done_job(const Gateway& gw, std::uint64_t a = 1, std::uint64_t b = 2) {
    InterpolationJob job("job-0001", "X01", "X02");
    job.start();
    job.finish(gw.interpolate_video(procedural_texture(a), procedural_texture(b)));
    return job;
}

class FailingDescriber final : public ConceptDescriber {
public:
    ProviderInfo info() const override { return {"failing-describer", true}; }
    std::string describe_concept(const std::string&) const override { throw std::runtime_error("boom"); }
};

class ShortEmbedder final : public ImageEmbedder {
public:
    ProviderInfo info() const override { return {"short-embedder", true}; }
    std::vector<float> embed_image(const Image&) const override { return std::vector<float>(8, 0.5f); }
};

}  // namespace

TEST_CASE("job status only moves pending -> running -> done|failed") {
    InterpolationJob job("j", "a", "b");
    CHECK(job.status() == JobStatus::pending);
    CHECK_THROWS_AS(job.finish({procedural_texture(1)}), Error);
    job.start();
    CHECK(job.status() == JobStatus::running);
    CHECK_THROWS_AS(job.start(), Error);
    job.finish({procedural_texture(1)});
    CHECK(job.status() == JobStatus::done);
    CHECK(job.frame_count() == 1);
    CHECK_THROWS_AS(job.fail_with("late"), Error);

    InterpolationJob f("k", "a", "b");
    f.start();
    f.fail_with("provider down");
    CHECK(f.status() == JobStatus::failed);
    CHECK(f.frames().empty());
    CHECK(f.error() == std::optional<std::string>("provider down"));

    CHECK(job_status_from_string(to_string(JobStatus::running)) == JobStatus::running);
    CHECK_THROWS_AS(job_status_from_string("queued"), Error);
    CHECK_THROWS_AS(InterpolationJob::restore("r", "a", "b", JobStatus::done, {}, std::nullopt), Error);
    CHECK_THROWS_AS(
        InterpolationJob::restore("r", "a", "b", JobStatus::failed, {procedural_texture(1)}, "x"), Error);
}

TEST_CASE("extract_frame returns the stored frame and guards its range") {
    const auto gw = mock_gateway();
    const auto job = done_job(gw);
    CHECK(extract_frame(job, 0) == procedural_texture(1));
    CHECK(extract_frame(job, 15) == procedural_texture(2));
    for (int bad : {16, -1}) {
        try {
            extract_frame(job, bad);
            FAIL("expected range error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::conflict);
        }
    }
    InterpolationJob pending("p", "a", "b");
    CHECK_THROWS_AS(extract_frame(pending, 0), Error);
}

TEST_CASE("replot_frame runs the four steps and appends one orange dynamic point") {
    const auto gw = mock_gateway();
    const auto job = done_job(gw);
    Atlas atlas = base_atlas();
    const auto& frame = extract_frame(job, 7);
    const auto r = replot_frame(atlas, gw, frame, job.job_id(), 7);

    const auto surface = gw.analyze_frame(frame);
    CHECK(r.surface == surface);
    CHECK(r.description == gw.describe_concept(surface));
    CHECK(r.replot_id == "replot-0001");
    CHECK(r.job_id == "job-0001");
    CHECK(r.frame_index == 7);
    CHECK(r.dynamic);
    CHECK(r.display_color == "orange");
    CHECK(r.image_source_dim == kImageEmbeddingDim);
    CHECK(r.text_source_dim == kTextEmbeddingDim);
    CHECK(std::isfinite(r.image_coord.x));
    CHECK(std::isfinite(r.text_coord.y));
    REQUIRE(atlas.dynamic_points.size() == 1);
    CHECK(atlas.dynamic_points[0] == r);
    CHECK(check_atlas(atlas).empty());

    // Coordinates come from the matching model: an independent transform agrees.
    const std::vector<std::vector<float>> img{gw.embed_image(frame)};
    CHECK(umap_transform(atlas.image_model, EmbeddingMatrix::from_rows(img))[0] == r.image_coord);
    const std::vector<std::vector<float>> txt{gw.embed_text(r.description)};
    CHECK(umap_transform(atlas.text_model, EmbeddingMatrix::from_rows(txt))[0] == r.text_coord);

    const auto r2 = replot_frame(atlas, gw, frame, job.job_id(), 7);
    CHECK(r2.replot_id == "replot-0002");
    CHECK(r2.image_coord == r.image_coord);
    CHECK(r2.text_coord == r.text_coord);
}

TEST_CASE("replot is deterministic and leaves static coords bit-identical") {
    const auto gw = mock_gateway();
    const auto job = done_job(gw, 3, 4);
    Atlas a = base_atlas();
    Atlas b = base_atlas();
    const auto before = serialize_atlas(a);
    for (int i = 0; i < 16; i += 5) {
        CHECK(replot_frame(a, gw, extract_frame(job, i), "job-0001", i) ==
              replot_frame(b, gw, extract_frame(job, i), "job-0001", i));
    }
    CHECK(a.terms == base_atlas().terms);
    CHECK(a.textures == base_atlas().textures);
    CHECK(a.image_model == base_atlas().image_model);
    CHECK(a.text_model == base_atlas().text_model);
    a.dynamic_points.clear();
    CHECK(serialize_atlas(a) == before);
}

// Maps known images to clustered vectors so the image space has neighborhood
// structure; hash-keyed mock vectors have none.
class ClusteredEmbedder final : public ImageEmbedder {
public:
    explicit ClusteredEmbedder(std::map<std::uint64_t, std::vector<float>> table) : table_(std::move(table)) {}
    ProviderInfo info() const override { return {"clustered-embedder", true}; }
    std::vector<float> embed_image(const Image& image) const override { return table_.at(content_hash(image)); }

private:
    std::map<std::uint64_t, std::vector<float>> table_;
};

TEST_CASE("a frame identical to a texture lands next to that texture") {
    auto in = fixture_input(101, 3, UmapParams{});
    const auto set = low_rank_gaussian_clusters(3, 101, kImageEmbeddingDim, 2, 1.0, 0.2, 10.0, 11);
    std::map<std::uint64_t, std::vector<float>> table;
    for (std::size_t x = 1; x <= 303; ++x) {
        const auto row = set.vectors.row(x - 1);
        std::vector<float> v(row.begin(), row.end());
        table[content_hash(procedural_texture(x))] = v;
        in.image_embeddings[fixture_id("X", x)] = v;
    }
    Atlas atlas = build_atlas(in);
    auto providers = make_mock_providers(MockSeedConfig{});
    providers.image_embedder = std::make_shared<ClusteredEmbedder>(table);
    const Gateway gw(providers);

    // Same tolerance as the transform-locality criterion: at least 28 of 30.
    const double diag = atlas.image_bounds.diagonal();
    int near = 0;
    for (std::size_t x = 1; x <= 300; x += 10) {
        const auto r = replot_frame(atlas, gw, procedural_texture(x), "job", 0);
        const auto& tex = *atlas.find_texture(fixture_id("X", x));
        near += std::hypot(r.image_coord.x - tex.coord.x, r.image_coord.y - tex.coord.y) <= 0.05 * diag;
    }
    CHECK(near >= 28);
}

TEST_CASE("with hash-keyed mock vectors a duplicate frame starts exactly on its twin") {
    const auto gw = mock_gateway();
    const Atlas& atlas = base_atlas();
    for (std::size_t x = 1; x <= 20; ++x) {
        const std::vector<std::vector<float>> rows{gw.embed_image(procedural_texture(x))};
        const auto t = umap_transform_detailed(atlas.image_model, EmbeddingMatrix::from_rows(rows));
        CHECK(t.initial[0] == atlas.find_texture(fixture_id("X", x))->coord);
        CHECK(std::isfinite(t.coords[0].x));
    }
}

TEST_CASE("a provider failure is stage-tagged and appends nothing") {
    auto providers = make_mock_providers(MockSeedConfig{});
    providers.concept_describer = std::make_shared<FailingDescriber>();
    const Gateway gw(providers);
    Atlas atlas = base_atlas();
    try {
        replot_frame(atlas, gw, procedural_texture(1), "job", 0);
        FAIL("expected provider error");
    } catch (const ProviderError& e) {
        CHECK(e.stage() == "describe_concept");
    }
    CHECK(atlas.dynamic_points.empty());

    providers = make_mock_providers(MockSeedConfig{});
    providers.image_embedder = std::make_shared<ShortEmbedder>();
    try {
        replot_frame(atlas, Gateway(providers), procedural_texture(1), "job", 0);
        FAIL("expected dimension error");
    } catch (const ProviderError& e) {
        CHECK(e.stage() == "embed_image");
    }
    CHECK(atlas.dynamic_points.empty());
    CHECK_THROWS_AS(replot_frame(atlas, mock_gateway(), Image{}, "job", 0), Error);
    CHECK(atlas.dynamic_points.empty());
}

TEST_CASE("next_replot_id skips past existing ids") {
    Atlas atlas = base_atlas();
    CHECK(next_replot_id(atlas) == "replot-0001");
    ReplotRecord r;
    r.replot_id = "replot-0041";
    atlas.dynamic_points.push_back(r);
    CHECK(next_replot_id(atlas) == "replot-0042");
}
