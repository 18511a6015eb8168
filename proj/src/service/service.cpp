#include "compass/service/service.hpp"

#include <httplib.h>

#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"
#include "compass/gateway/png_codec.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

int http_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument:
        case ErrorKind::validation: return 400;
        case ErrorKind::not_found: return 404;
        case ErrorKind::conflict: return 409;
        case ErrorKind::provider:
        case ErrorKind::timeout: return 502;
        case ErrorKind::unavailable: return 503;
        case ErrorKind::io: return 500;
    }
    return 500;
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    json err = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (const auto* p = dynamic_cast<const ProviderError*>(&e)) {
        err["stage"] = p->stage();
        err["provider"] = p->provider();
        err["timed_out"] = p->timed_out();
    }
    send_json(res, http_status(e.kind()), {{"error", err}});
}

// Runs a handler body, turning exceptions into JSON error responses.
template <class F>
auto guarded(F body) {
    return [body](const httplib::Request& req, httplib::Response& res) {
        try {
            body(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const json::exception& e) {
            send_error(res, Error(ErrorKind::invalid_argument, std::string("bad request body: ") + e.what()));
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorKind::io, e.what()));
        }
    };
}

json parse_body(const httplib::Request& req) {
    json j;
    try {
        j = json::parse(req.body);
    } catch (const json::parse_error&) {
        fail(ErrorKind::invalid_argument, "request body is not valid JSON");
    }
    require(j.is_object(), ErrorKind::invalid_argument, "request body must be a JSON object");
    return j;
}

std::string string_param(const json& j, const char* key) {
    require(j.contains(key) && j.at(key).is_string(), ErrorKind::invalid_argument,
            std::string("missing string field '") + key + "'");
    return j.at(key).get<std::string>();
}

std::string url(const std::string& rel) { return "/files/" + rel; }

}  // namespace

Service::Service(ServiceConfig config) : Service(config, make_providers(config.providers)) {}

Service::Service(ServiceConfig config, ProviderSet providers)
    : config_(std::move(config)),
      gateway_(std::move(providers), config_.providers.timeout),
      store_(config_.data_dir),
      runner_(std::make_unique<JobRunner>(store_, gateway_, config_.job_workers)),
      server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() { stop(); }

int Service::start() {
    fs::create_directories(config_.data_dir);
    require(server_->set_mount_point("/files", config_.data_dir.string()), ErrorKind::io,
            "cannot serve files from '" + config_.data_dir.string() + "'");
    if (config_.port == 0) {
        port_ = server_->bind_to_any_port(config_.host);
        require(port_ > 0, ErrorKind::io, "cannot bind " + config_.host);
    } else {
        require(server_->bind_to_port(config_.host, config_.port), ErrorKind::io,
                "cannot bind " + config_.host + ":" + std::to_string(config_.port));
        port_ = config_.port;
    }
    listener_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void Service::load() {
    store_.load();
    ready_ = true;
}

void Service::run() {
    start();
    load();
    if (listener_.joinable()) listener_.join();
}

void Service::stop() {
    if (server_) server_->stop();
    if (listener_.joinable() && listener_.get_id() != std::this_thread::get_id()) listener_.join();
    if (runner_) runner_->stop();
}

void Service::install_routes() {
    auto& s = *server_;
    s.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (ready_ || req.path == "/health") return httplib::Server::HandlerResponse::Unhandled;
        send_error(res, Error(ErrorKind::unavailable, "atlas is still loading"));
        return httplib::Server::HandlerResponse::Handled;
    });

    s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", ready_ ? "ok" : "loading"}});
    });

    s.Get("/atlas", guarded([this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, store_.atlas_summary());
    }));

    s.Get("/highlight", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto kind = req.get_param_value("kind");
        const auto id = req.get_param_value("id");
        require(!id.empty(), ErrorKind::invalid_argument, "missing query parameter 'id'");
        const Atlas& atlas = store_.atlas();
        std::vector<std::string> ids;
        std::string owner;
        if (kind == "term") {
            ids = highlight_for_term(atlas, id);
            owner = id;
        } else if (kind == "texture") {
            owner = highlight_for_texture(atlas, id);
            ids = {owner};
        } else {
            fail(ErrorKind::invalid_argument, "kind must be 'term' or 'texture'");
        }
        json preview = json::array();
        for (const auto& x : atlas.owned_textures(owner)) {
            const auto* t = atlas.find_texture(x);
            preview.push_back({{"texture_id", x},
                               {"thumbnail_url", url(t->thumbnail_path)},
                               {"image_url", url(t->image_path)}});
        }
        const auto* term = atlas.find_term(owner);
        send_json(res, 200,
                  {{"kind", kind},
                   {"id", id},
                   {"highlighted_ids", ids},
                   {"term", {{"term_id", owner}, {"surface", term->surface},
                             {"english_description", term->stages.english_description}}},
                   {"preview", preview}});
    }));

    s.Get("/objects", guarded([this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        for (auto o : {TargetObject::vase, TargetObject::headphones}) {
            out.push_back({{"object_id", to_string(o)}, {"base_image_url", url("objects/" + to_string(o) + ".png")}});
        }
        send_json(res, 200, {{"objects", out}});
    }));

    s.Get("/gallery", guarded([this](const httplib::Request&, httplib::Response& res) {
        json items = json::array();
        for (const auto& g : store_.gallery()) items.push_back(to_json(g));
        send_json(res, 200, {{"items", items}});
    }));

    s.Post("/gallery", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        send_json(res, 201, to_json(store_.add_gallery_item(string_param(body, "ref"))));
    }));

    s.Delete("/gallery/:item_id", guarded([this](const httplib::Request& req, httplib::Response& res) {
        store_.remove_gallery_item(req.path_params.at("item_id"));
        res.status = 204;
    }));

    s.Post("/apply", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto object = target_object_from_string(string_param(body, "object_id"));
        const auto ref = string_param(body, "ref");
        require(store_.ref_exists(ref), ErrorKind::not_found, "unknown ref '" + ref + "'");
        bool cached = true;
        auto rel = store_.cached_composite(object, ref);
        if (!rel) {
            const auto composite =
                gateway_.apply_texture(read_png(store_.object_image_path(object)), store_.ref_image(ref));
            rel = store_.store_composite(object, ref, composite);
            cached = false;
        }
        send_json(res, 200,
                  {{"object_id", to_string(object)},
                   {"ref", ref},
                   {"composite_image_path", *rel},
                   {"composite_url", url(*rel)},
                   {"cached", cached}});
    }));

    s.Post("/interpolate", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto job = store_.create_job(string_param(body, "texture_a"), string_param(body, "texture_b"));
        runner_->submit(job.job_id());
        send_json(res, 202, {{"job_id", job.job_id()}, {"status", to_string(job.status())}});
    }));

    s.Get("/interpolate/:job_id", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto& id = req.path_params.at("job_id");
        const auto entry = store_.find_job(id);
        require(entry.has_value(), ErrorKind::not_found, "unknown job '" + id + "'");
        json frames = json::array();
        for (const auto& p : store_.frame_paths(id)) frames.push_back(url(p));
        const auto& job = entry->job;
        send_json(res, 200,
                  {{"job_id", id},
                   {"texture_a", job.texture_a()},
                   {"texture_b", job.texture_b()},
                   {"status", to_string(job.status())},
                   {"frame_count", job.frame_count()},
                   {"frame_urls", frames},
                   {"error", job.error() ? json(*job.error()) : json(nullptr)},
                   {"created_at", entry->created_at}});
    }));

    s.Post("/interpolate/:job_id/replot", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto& id = req.path_params.at("job_id");
        const auto body = parse_body(req);
        require(body.contains("frame_index") && body.at("frame_index").is_number_integer(),
                ErrorKind::invalid_argument, "missing integer field 'frame_index'");
        const int index = body.at("frame_index").get<int>();
        const auto entry = store_.find_job(id);
        require(entry.has_value(), ErrorKind::not_found, "unknown job '" + id + "'");
        const Image& frame = extract_frame(entry->job, index);
        // Steps 1-4 read only the static models; only the append takes the writer lock.
        auto draft = compute_replot(store_.atlas(), gateway_, frame);
        const auto record = store_.append_replot(std::move(draft), id, index);
        auto out = to_json(record);
        out["frame_url"] = url(store_.frame_paths(id).at(static_cast<std::size_t>(index)));
        send_json(res, 201, out);
    }));
}

}  // namespace compass
