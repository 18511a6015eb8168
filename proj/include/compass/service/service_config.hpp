#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "compass/gateway/provider_config.hpp"

namespace compass {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::filesystem::path data_dir = "data";
    ProviderConfig providers;
    std::size_t job_workers = 1;
};

/// Parses "host:port" or ":port".
void parse_listen_address(const std::string& text, std::string& host, int& port);

/// File: {"listen", "data_dir", "seed", "job_workers", "providers": {...}}.
/// A relative data_dir resolves against the file's directory.
ServiceConfig service_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir = {});

/// Reads the optional file, then applies COMPASS_LISTEN, COMPASS_DATA_DIR and
/// the provider variables (COMPASS_PROVIDER_MODE, COMPASS_PROVIDER_TIMEOUT_MS,
/// COMPASS_SEED).
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env);

}  // namespace compass
