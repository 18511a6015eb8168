#include "compass/cli/commands.hpp"

#include <chrono>
#include <csignal>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "compass/atlas/atlas_json.hpp"
#include "compass/atlas/manifest.hpp"
#include "compass/core/error.hpp"
#include "compass/core/hash.hpp"
#include "compass/core/rng.hpp"
#include "compass/embedding/model_json.hpp"
#include "compass/embedding/trustworthiness.hpp"
#include "compass/gateway/mock_dataset.hpp"
#include "compass/gateway/mock_providers.hpp"
#include "compass/gateway/png_codec.hpp"
#include "compass/replot/replot.hpp"
#include "compass/service/service.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::io: return kExitIo;
        case ErrorKind::provider:
        case ErrorKind::timeout:
        case ErrorKind::unavailable: return kExitProvider;
        default: return kExitValidation;
    }
}

struct Globals {
    bool json = false;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> data_dir;
};

// Prints either the JSON report or its human rendering.
class Reporter {
public:
    Reporter(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

    void report(const json& j, const std::string& text) const {
        if (g_.json) {
            out_ << j.dump() << "\n";
        } else {
            out_ << text;
        }
    }

    int error(const Error& e) const {
        const int code = exit_code(e.kind());
        if (g_.json) {
            json j = {{"ok", false}, {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
            if (const auto* p = dynamic_cast<const ProviderError*>(&e)) j["error"]["stage"] = p->stage();
            out_ << j.dump() << "\n";
        }
        err_ << "error: " << e.what() << "\n";
        return code;
    }

private:
    const Globals& g_;
    std::ostream& out_;
    std::ostream& err_;
};

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

json bounds_json(const Bounds& b) { return {{"min", to_json(b.min)}, {"max", to_json(b.max)}}; }

struct BuildFlags {
    fs::path manifest;
    std::optional<fs::path> output;
    std::optional<int> n_neighbors;
    std::optional<double> min_dist;
    std::optional<std::string> metric;
    std::optional<int> n_epochs;
};

int cmd_build(const BuildFlags& f, const Globals& g, const Reporter& rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto manifest = load_manifest(f.manifest);
    UmapParams params = apply_param_overrides(UmapParams{}, manifest.params_overrides);
    if (f.n_neighbors) params.n_neighbors = *f.n_neighbors;
    if (f.min_dist) params.min_dist = *f.min_dist;
    if (f.metric) params.metric = metric_from_string(*f.metric);
    if (f.n_epochs) params.n_epochs = *f.n_epochs;
    if (g.seed) params.seed = *g.seed;
    params.validate();

    fs::path output = manifest.base_dir / "atlas.json";
    if (f.output) {
        output = *f.output;
    } else if (g.data_dir) {
        output = *g.data_dir / "atlas.json";
    } else if (manifest.output) {
        output = *manifest.output;
    }

    const Atlas atlas = build_atlas(read_build_input(manifest, params));
    save_atlas(atlas, output);
    const auto text = read_file(output);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto k = static_cast<std::size_t>(params.n_neighbors);
    auto trust = [&](const UmapModel& m) {
        return 2 * m.size() > 3 * k + 1 ? json(trustworthiness(m.training, params.metric, m.coords, k))
                                        : json(nullptr);
    };
    const json report = {{"ok", true},
                         {"command", "build"},
                         {"output", output.string()},
                         {"terms", atlas.terms.size()},
                         {"textures", atlas.textures.size()},
                         {"params", to_json(params)},
                         {"trustworthiness", {{"k", k}, {"image", trust(atlas.image_model)}, {"text", trust(atlas.text_model)}}},
                         {"wall_seconds", seconds},
                         {"bytes", text.size()},
                         {"fnv1a64", hex64(fnv1a64(text))}};
    std::ostringstream s;
    s << "built " << output.string() << ": " << atlas.terms.size() << " terms, " << atlas.textures.size()
      << " textures\n"
      << "trustworthiness(k=" << k << "): image " << report["trustworthiness"]["image"].dump() << ", text "
      << report["trustworthiness"]["text"].dump() << "\n"
      << "wall time " << std::fixed << std::setprecision(2) << seconds << " s, fnv1a64 "
      << report["fnv1a64"].get<std::string>() << "\n";
    rep.report(report, s.str());
    return kExitOk;
}

fs::path atlas_path_or_default(const std::string& given, const Globals& g) {
    if (!given.empty()) return given;
    return (g.data_dir ? *g.data_dir : fs::path(".")) / "atlas.json";
}

int cmd_validate(const fs::path& path, const Reporter& rep) {
    Atlas atlas;
    std::vector<std::string> violations;
    const auto text = read_file(path);
    try {
        atlas = atlas_from_json(json::parse(text));
        violations = check_atlas(atlas);
    } catch (const json::parse_error& e) {
        violations.push_back(std::string("atlas: malformed JSON (") + e.what() + ")");
    } catch (const Error& e) {
        violations.push_back(e.what());
    }
    const bool ok = violations.empty();
    json report = {{"ok", ok}, {"command", "validate"}, {"atlas", path.string()}, {"violations", violations}};
    std::ostringstream s;
    if (ok) {
        report["terms"] = atlas.terms.size();
        report["textures"] = atlas.textures.size();
        report["dynamic_points"] = atlas.dynamic_points.size();
        s << "valid: " << atlas.terms.size() << " terms, " << atlas.textures.size() << " textures, "
          << atlas.dynamic_points.size() << " dynamic points\n";
    } else {
        s << "invalid: " << violations.front() << "\n";
        for (std::size_t i = 1; i < violations.size(); ++i) s << "  also: " << violations[i] << "\n";
    }
    rep.report(report, s.str());
    return ok ? kExitOk : kExitValidation;
}

int cmd_replot_sim(const fs::path& path, int frames, const std::optional<fs::path>& save_to,
                   const Globals& g, const Reporter& rep) {
    require(frames >= 0, ErrorKind::invalid_argument, "--frames must be >= 0");
    Atlas atlas = load_atlas(path);
    MockSeedConfig cfg;
    if (g.seed) cfg.seed = *g.seed;
    const Gateway gw(make_mock_providers(cfg));
    require(atlas.textures.size() >= 2, ErrorKind::validation, "replot-sim needs at least two textures");

    // Texture rasters come from disk when present, else from the seeded generator.
    auto texture_image = [&](const TextureRecord& t) {
        const auto p = path.parent_path() / t.image_path;
        if (!t.image_path.empty() && fs::exists(p)) return read_png(p);
        return procedural_texture(hash_combine(cfg.seed, fnv1a64(t.texture_id)));
    };

    SplitMix64 rng(mix64(cfg.seed ^ 0x5245504C4159ULL));
    std::vector<Image> video;
    std::string job_id;
    json records = json::array();
    std::vector<Point2> image_coords, text_coords;
    const auto before = atlas;
    for (int i = 0; i < frames; ++i) {
        if (i % kMockVideoFrames == 0) {
            const auto a = rng.below(atlas.textures.size());
            auto b = rng.below(atlas.textures.size() - 1);
            if (b >= a) ++b;
            video = gw.interpolate_video(texture_image(atlas.textures[a]), texture_image(atlas.textures[b]));
            job_id = "sim-" + std::to_string(i / kMockVideoFrames + 1);
        }
        const auto r = replot_frame(atlas, gw, video[static_cast<std::size_t>(i % kMockVideoFrames)], job_id,
                                    i % kMockVideoFrames);
        records.push_back(to_json(r));
        image_coords.push_back(r.image_coord);
        text_coords.push_back(r.text_coord);
    }
    const bool static_unchanged = atlas.terms == before.terms && atlas.textures == before.textures &&
                                  atlas.image_model == before.image_model && atlas.text_model == before.text_model;
    auto finite = [](const std::vector<Point2>& v) {
        return std::all_of(v.begin(), v.end(), [](const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); });
    };
    auto inside = [](const std::vector<Point2>& v, const Bounds& b) {
        return std::all_of(v.begin(), v.end(), [&](const Point2& p) { return b.contains(p); });
    };
    const auto eib = atlas.image_bounds.expanded(0.25);
    const auto etb = atlas.text_bounds.expanded(0.25);
    const bool all_finite = finite(image_coords) && finite(text_coords);
    const bool within = inside(image_coords, eib) && inside(text_coords, etb);
    const auto hash = hex64(fnv1a64(records.dump()));
    if (save_to) save_atlas(atlas, *save_to);

    json report = {{"ok", all_finite && static_unchanged},
                   {"command", "replot-sim"},
                   {"atlas", path.string()},
                   {"frames", frames},
                   {"seed", cfg.seed},
                   {"all_finite", all_finite},
                   {"within_expanded_bounds", within},
                   {"static_coords_unchanged", static_unchanged},
                   {"expanded_bounds", {{"image", bounds_json(eib)}, {"text", bounds_json(etb)}}},
                   {"determinism_hash", hash},
                   {"records", records}};
    if (!image_coords.empty()) {
        report["coord_bounds"] = {{"image", bounds_json(tight_bounds(image_coords))},
                                  {"text", bounds_json(tight_bounds(text_coords))}};
    }
    std::ostringstream s;
    s << "replotted " << frames << " frames; finite " << (all_finite ? "yes" : "no") << ", within 25% bounds "
      << (within ? "yes" : "no") << ", static coords unchanged " << (static_unchanged ? "yes" : "no")
      << "\ndeterminism hash " << hash << "\n";
    rep.report(report, s.str());
    return report["ok"].get<bool>() ? kExitOk : kExitValidation;
}

int cmd_mock_dataset(const fs::path& dir, std::size_t terms, std::size_t textures, const Globals& g,
                     const Reporter& rep) {
    MockDatasetOptions opt;
    opt.terms = terms;
    opt.textures = textures;
    if (g.seed) opt.seed = *g.seed;
    const auto s = generate_mock_dataset(dir, opt);
    const json report = {{"ok", true},
                         {"command", "mock-dataset"},
                         {"manifest", s.manifest.string()},
                         {"terms", s.terms},
                         {"textures", s.textures},
                         {"two_texture_terms", s.two_texture_terms},
                         {"seed", opt.seed}};
    std::ostringstream text;
    text << "wrote " << s.manifest.string() << ": " << s.terms << " terms, " << s.textures << " textures ("
         << s.two_texture_terms << " terms with two)\n";
    rep.report(report, text.str());
    return kExitOk;
}

int cmd_serve(const std::optional<fs::path>& config_file, const std::string& listen, const Globals& g,
              const Reporter& rep) {
    auto cfg = load_service_config(config_file, [](const char* k) { return std::getenv(k); });
    if (g.data_dir) cfg.data_dir = *g.data_dir;
    if (g.seed) cfg.providers.seed = *g.seed;
    if (!listen.empty()) parse_listen_address(listen, cfg.host, cfg.port);

    // Signals are taken synchronously by this thread; workers inherit the mask.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    Service service(cfg);
    const int port = service.start();
    rep.report({{"ok", true}, {"command", "serve"}, {"status", "loading"}, {"port", port}},
               "listening on " + cfg.host + ":" + std::to_string(port) + ", loading " +
                   cfg.data_dir.string() + "\n");
    service.load();
    rep.report({{"ok", true}, {"command", "serve"}, {"status", "ready"}, {"port", port}}, "ready\n");
    int sig = 0;
    sigwait(&set, &sig);
    service.stop();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-modal texture atlas tools", "compass"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    std::string data_dir;
    app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for UMAP (build) or the mock providers");
    auto* data_opt = app.add_option("--data-dir", data_dir, "Data directory");
    app.fallthrough();

    BuildFlags bf;
    std::string bf_output, bf_metric;
    int bf_nn = 0, bf_epochs = 0;
    double bf_md = 0;
    auto* build = app.add_subcommand("build", "Fit both maps from a manifest and write the atlas");
    build->add_option("manifest", bf.manifest, "Manifest JSON")->required();
    auto* o_out = build->add_option("-o,--output", bf_output, "Atlas output path");
    auto* o_nn = build->add_option("--n-neighbors", bf_nn, "UMAP n_neighbors (default 15)");
    auto* o_md = build->add_option("--min-dist", bf_md, "UMAP min_dist (default 0.5)");
    auto* o_metric = build->add_option("--metric", bf_metric, "cosine or euclidean (default cosine)");
    auto* o_ep = build->add_option("--n-epochs", bf_epochs, "SGD epochs (default 200)");

    std::string atlas_arg;
    auto* validate = app.add_subcommand("validate", "Check every atlas invariant");
    validate->add_option("atlas", atlas_arg, "Atlas JSON (default <data-dir>/atlas.json)");

    int frames = 10;
    std::string sim_save;
    auto* sim = app.add_subcommand("replot-sim", "Replot mock frames against an atlas");
    sim->add_option("atlas", atlas_arg, "Atlas JSON (default <data-dir>/atlas.json)");
    sim->add_option("--frames", frames, "Number of frames")->capture_default_str();
    auto* o_save = sim->add_option("--save", sim_save, "Write the atlas with the new dynamic points here");

    std::string config_file, listen;
    auto* serve = app.add_subcommand("serve", "Run the exploration service");
    auto* o_cfg = serve->add_option("--config", config_file, "Service config JSON");
    serve->add_option("--listen", listen, "host:port");

    std::string ds_dir;
    std::size_t ds_terms = 235, ds_textures = 676;
    auto* ds = app.add_subcommand("mock-dataset", "Write a seeded mock dataset and manifest");
    ds->add_option("dir", ds_dir, "Output directory")->required();
    ds->add_option("--terms", ds_terms, "Term count")->capture_default_str();
    ds->add_option("--textures", ds_textures, "Texture count")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitValidation;
    }
    if (*seed_opt) g.seed = seed;
    if (*data_opt) g.data_dir = data_dir;
    const Reporter rep(g, out, err);

    try {
        if (*build) {
            if (*o_out) bf.output = bf_output;
            if (*o_nn) bf.n_neighbors = bf_nn;
            if (*o_md) bf.min_dist = bf_md;
            if (*o_metric) bf.metric = bf_metric;
            if (*o_ep) bf.n_epochs = bf_epochs;
            return cmd_build(bf, g, rep);
        }
        if (*validate) return cmd_validate(atlas_path_or_default(atlas_arg, g), rep);
        if (*sim) {
            return cmd_replot_sim(atlas_path_or_default(atlas_arg, g), frames,
                                  *o_save ? std::optional<fs::path>(sim_save) : std::nullopt, g, rep);
        }
        if (*serve) return cmd_serve(*o_cfg ? std::optional<fs::path>(config_file) : std::nullopt, listen, g, rep);
        if (*ds) return cmd_mock_dataset(ds_dir, ds_terms, ds_textures, g, rep);
    } catch (const Error& e) {
        return rep.error(e);
    } catch (const fs::filesystem_error& e) {
        return rep.error(Error(ErrorKind::io, e.what()));
    } catch (const std::exception& e) {
        return rep.error(Error(ErrorKind::validation, e.what()));
    }
    return kExitValidation;
}

}  // namespace compass
