#pragma once

#include <atomic>
#include <memory>
#include <thread>

#include <json.hpp>

#include "compass/core/error.hpp"
#include "compass/gateway/providers.hpp"
#include "compass/service/job_runner.hpp"
#include "compass/service/service_config.hpp"
#include "compass/service/store.hpp"

namespace httplib {
class Server;
}

namespace compass {

/// HTTP front of the exploration service. Routes answer 503 until load()
/// has finished.
///
///   GET    /health
///   GET    /atlas
///   GET    /highlight?kind=term|texture&id=...
///   GET    /objects
///   GET    /gallery            POST /gallery {ref}      DELETE /gallery/{item_id}
///   POST   /apply {object_id, ref}
///   POST   /interpolate {texture_a, texture_b}          GET /interpolate/{job_id}
///   POST   /interpolate/{job_id}/replot {frame_index}
///   GET    /files/...          static files under the data directory
class Service {
public:
    explicit Service(ServiceConfig config);
    Service(ServiceConfig config, ProviderSet providers);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Loads the persisted state; requests before this returns get 503.
    void load();
    /// start() + load(), then blocks until stop().
    void run();
    void stop();

    bool ready() const noexcept { return ready_.load(); }
    int port() const noexcept { return port_; }
    ServiceStore& store() noexcept { return store_; }
    JobRunner& jobs() noexcept { return *runner_; }
    const Gateway& gateway() const noexcept { return gateway_; }

private:
    void install_routes();

    ServiceConfig config_;
    Gateway gateway_;
    ServiceStore store_;
    std::unique_ptr<JobRunner> runner_;
    std::unique_ptr<httplib::Server> server_;
    std::thread listener_;
    std::atomic<bool> ready_{false};
    int port_ = 0;
};

/// HTTP status for an error kind: 400, 404, 409, 502, 503 or 500.
int http_status(ErrorKind kind);

}  // namespace compass
