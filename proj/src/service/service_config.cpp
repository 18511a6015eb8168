#include "compass/service/service_config.hpp"

#include <charconv>

#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

void parse_listen_address(const std::string& text, std::string& host, int& port) {
    const auto colon = text.rfind(':');
    require(colon != std::string::npos, ErrorKind::invalid_argument,
            "listen address must be host:port, got '" + text + "'");
    const auto port_text = text.substr(colon + 1);
    int value = -1;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
    require(ec == std::errc() && ptr == port_text.data() + port_text.size() && value >= 0 &&
                value <= 65535,
            ErrorKind::invalid_argument, "invalid port in listen address '" + text + "'");
    if (colon > 0) host = text.substr(0, colon);
    port = value;
}

ServiceConfig service_config_from_json(const json& j, const fs::path& base_dir) {
    ServiceConfig c;
    require(j.is_object(), ErrorKind::invalid_argument, "service config must be an object");
    try {
        if (j.contains("providers")) c.providers = provider_config_from_json(j.at("providers"));
        if (j.contains("listen")) parse_listen_address(j.at("listen").get<std::string>(), c.host, c.port);
        if (j.contains("data_dir")) {
            fs::path d = j.at("data_dir").get<std::string>();
            c.data_dir = d.is_absolute() || base_dir.empty() ? d : base_dir / d;
        }
        if (j.contains("seed")) c.providers.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("job_workers")) c.job_workers = j.at("job_workers").get<std::size_t>();
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_argument, std::string("service config: ") + e.what());
    }
    require(c.job_workers >= 1, ErrorKind::invalid_argument, "job_workers must be at least 1");
    return c;
}

ServiceConfig load_service_config(const std::optional<fs::path>& file, const EnvLookup& env) {
    ServiceConfig c;
    if (file) {
        json j;
        try {
            j = json::parse(read_file(*file));
        } catch (const json::parse_error& e) {
            fail(ErrorKind::invalid_argument, "service config '" + file->string() + "' is not valid JSON");
        }
        c = service_config_from_json(j, file->parent_path());
    }
    if (const char* v = env("COMPASS_LISTEN"); v && *v) parse_listen_address(v, c.host, c.port);
    if (const char* v = env("COMPASS_DATA_DIR"); v && *v) c.data_dir = v;
    apply_provider_env(c.providers, env);
    return c;
}

}  // namespace compass
