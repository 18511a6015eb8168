#include <doctest.h>

#include <sstream>

#include "compass/atlas/atlas_json.hpp"
#include "compass/cli/commands.hpp"
#include "support/service_fixture.hpp"

using namespace compass;
using namespace compass::testing;
using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out, err;
    json report() const { return json::parse(out); }
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "compass");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string s(const std::filesystem::path& p) { return p.string(); }

}  // namespace

TEST_CASE("mock-dataset then build is reproducible and --seed changes the map") {
    TempDir dir("cli-build");
    auto ds = cli({"--json", "mock-dataset", s(dir.path()), "--terms", "20", "--textures", "55"});
    REQUIRE(ds.code == kExitOk);
    CHECK(ds.report()["terms"] == 20);
    CHECK(ds.report()["textures"] == 55);

    const auto manifest = s(dir / "manifest.json");
    auto b1 = cli({"--json", "build", manifest, "-o", s(dir / "a1.json")});
    REQUIRE(b1.code == kExitOk);
    const auto r1 = b1.report();
    CHECK(r1["terms"] == 20);
    CHECK(r1["textures"] == 55);
    CHECK(r1["trustworthiness"]["k"] == 15);
    auto b2 = cli({"--json", "build", manifest, "-o", s(dir / "a2.json")});
    REQUIRE(b2.code == kExitOk);
    CHECK(b2.report()["fnv1a64"] == r1["fnv1a64"]);
    CHECK(read_file(dir / "a1.json") == read_file(dir / "a2.json"));

    auto b3 = cli({"--json", "--seed", "7", "build", manifest, "-o", s(dir / "a3.json")});
    REQUIRE(b3.code == kExitOk);
    CHECK(b3.report()["fnv1a64"] != r1["fnv1a64"]);
    CHECK(b3.report()["params"]["seed"] == 7);

    auto b4 = cli({"--json", "build", manifest, "-o", s(dir / "a4.json"), "--n-neighbors", "8", "--metric", "euclidean"});
    REQUIRE(b4.code == kExitOk);
    CHECK(load_atlas(dir / "a4.json").params.n_neighbors == 8);

    // Human-readable form mentions the counts.
    auto human = cli({"validate", s(dir / "a1.json")});
    CHECK(human.code == kExitOk);
    CHECK(human.out.find("20 terms") != std::string::npos);
}

TEST_CASE("build reports errors with the documented exit codes") {
    TempDir dir("cli-err");
    auto missing = cli({"--json", "build", s(dir / "nope.json")});
    CHECK(missing.code == kExitIo);
    CHECK(missing.report()["error"]["kind"] == "io");

    cli({"mock-dataset", s(dir.path()), "--terms", "20", "--textures", "55"});
    auto bad = cli({"--json", "build", s(dir / "manifest.json"), "--n-neighbors", "1"});
    CHECK(bad.code == kExitValidation);
    CHECK(bad.report()["ok"] == false);

    // Drop one image embedding: the build fails and names the id.
    {
        const auto path = dir / "image_embeddings.jsonl";
        const auto text = read_file(path);
        const auto first_nl = text.find('\n');
        const auto dropped = json::parse(text.substr(0, first_nl))["id"].get<std::string>();
        write_file_atomic(path, text.substr(first_nl + 1));
        auto r = cli({"--json", "build", s(dir / "manifest.json")});
        CHECK(r.code == kExitValidation);
        CHECK(r.report()["error"]["message"].get<std::string>().find(dropped) != std::string::npos);
    }

    CHECK(cli({"frobnicate"}).code == kExitValidation);
    CHECK(cli({}).code == kExitValidation);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("validate names the broken invariant") {
    const auto& tmpl = service_template_dir();
    TempDir dir("cli-validate");
    const auto good = read_file(tmpl / "atlas.json");
    CHECK(cli({"validate", s(tmpl / "atlas.json")}).code == kExitOk);

    SUBCASE("a term with four textures") {
        auto j = json::parse(good);
        std::map<std::string, int> owned;
        for (const auto& t : j["textures"]) ++owned[t["term_id"].get<std::string>()];
        std::string three;
        for (const auto& [term, n] : owned) {
            if (n == 3) three = term;
        }
        REQUIRE(!three.empty());
        for (auto& t : j["textures"]) {
            if (t["term_id"] != three && owned[t["term_id"].get<std::string>()] == 3) {
                t["term_id"] = three;
                break;
            }
        }
        write_file_atomic(dir / "bad.json", j.dump());
        auto r = cli({"--json", "validate", s(dir / "bad.json")});
        CHECK(r.code == kExitValidation);
        const auto report = r.report();
        bool named = false;
        for (const auto& v : report["violations"]) named |= v.get<std::string>().find("owns 4") != std::string::npos;
        CHECK(named);
    }
    SUBCASE("a truncated file") {
        write_file_atomic(dir / "cut.json", good.substr(0, good.size() / 2));
        auto r = cli({"--json", "validate", s(dir / "cut.json")});
        CHECK(r.code == kExitValidation);
        CHECK(r.report()["violations"][0].get<std::string>().find("malformed") != std::string::npos);
    }
    SUBCASE("an edited coordinate") {
        auto j = json::parse(good);
        j["terms"][0]["coord"][0] = j["terms"][0]["coord"][0].get<double>() + 1.0;
        write_file_atomic(dir / "moved.json", j.dump());
        CHECK(cli({"validate", s(dir / "moved.json")}).code == kExitValidation);
    }
    SUBCASE("a missing file") {
        CHECK(cli({"validate", s(dir / "absent.json")}).code == kExitIo);
    }
    SUBCASE("default path comes from --data-dir") {
        CHECK(cli({"--data-dir", s(tmpl), "validate"}).code == kExitOk);
    }
}

TEST_CASE("replot-sim is deterministic and keeps the static map fixed") {
    const auto atlas = s(service_template_dir() / "atlas.json");
    auto a = cli({"--json", "replot-sim", atlas, "--frames", "20"});
    REQUIRE(a.code == kExitOk);
    const auto ra = a.report();
    CHECK(ra["all_finite"] == true);
    CHECK(ra["static_coords_unchanged"] == true);
    CHECK(ra["records"].size() == 20);
    for (const auto& r : ra.at("records")) CHECK(r["display_color"] == "orange");

    auto b = cli({"--json", "replot-sim", atlas, "--frames", "20"});
    CHECK(b.report()["determinism_hash"] == ra["determinism_hash"]);
    auto c = cli({"--json", "--seed", "9", "replot-sim", atlas, "--frames", "20"});
    CHECK(c.report()["determinism_hash"] != ra["determinism_hash"]);

    auto zero = cli({"--json", "replot-sim", atlas, "--frames", "0"});
    CHECK(zero.code == kExitOk);
    CHECK(zero.report()["records"].empty());
    CHECK(!zero.report().contains("coord_bounds"));
    CHECK(cli({"replot-sim", atlas, "--frames", "-1"}).code == kExitValidation);

    TempDir dir("cli-sim");
    auto saved = cli({"replot-sim", atlas, "--frames", "3", "--save", s(dir / "out.json")});
    REQUIRE(saved.code == kExitOk);
    const auto out = load_atlas(dir / "out.json");
    CHECK(out.dynamic_points.size() == 3);
    CHECK(cli({"validate", s(dir / "out.json")}).code == kExitOk);
}
