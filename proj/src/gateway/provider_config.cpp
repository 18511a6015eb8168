#include "compass/gateway/provider_config.hpp"

#include <charconv>

#include "compass/core/error.hpp"
#include "compass/gateway/mock_providers.hpp"

namespace compass {

using nlohmann::json;

std::string to_string(ProviderMode mode) { return mode == ProviderMode::mock ? "mock" : "live"; }

ProviderMode provider_mode_from_string(const std::string& name) {
    if (name == "mock") return ProviderMode::mock;
    if (name == "live") return ProviderMode::live;
    fail(ErrorKind::invalid_argument, "provider mode must be 'mock' or 'live', got '" + name + "'");
}

namespace {

std::uint64_t parse_u64(const char* text, const char* what) {
    std::uint64_t v = 0;
    const char* end = text + std::char_traits<char>::length(text);
    auto [ptr, ec] = std::from_chars(text, end, v);
    require(ec == std::errc() && ptr == end && ptr != text, ErrorKind::invalid_argument,
            std::string(what) + " must be a non-negative integer, got '" + text + "'");
    return v;
}

std::chrono::milliseconds checked_timeout(std::uint64_t ms) {
    require(ms > 0, ErrorKind::invalid_argument, "provider timeout must be positive");
    return std::chrono::milliseconds(ms);
}

}  // namespace

ProviderConfig provider_config_from_json(const json& j) {
    ProviderConfig c;
    if (j.is_null()) return c;
    require(j.is_object(), ErrorKind::invalid_argument, "provider config must be an object");
    try {
        if (j.contains("mode")) c.mode = provider_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("timeout_ms")) c.timeout = checked_timeout(j.at("timeout_ms").get<std::uint64_t>());
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("live")) {
            for (const auto& [role, e] : j.at("live").items()) {
                c.live[role] = {e.value("url", ""), e.value("credential_env", "")};
            }
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_argument, std::string("provider config: ") + e.what());
    }
    return c;
}

json to_json(const ProviderConfig& c) {
    json live = json::object();
    for (const auto& [role, e] : c.live) live[role] = {{"url", e.url}, {"credential_env", e.credential_env}};
    return {{"mode", to_string(c.mode)},
            {"timeout_ms", c.timeout.count()},
            {"seed", c.seed},
            {"live", std::move(live)}};
}

void apply_provider_env(ProviderConfig& c, const EnvLookup& env) {
    if (const char* v = env("COMPASS_PROVIDER_MODE"); v && *v) c.mode = provider_mode_from_string(v);
    if (const char* v = env("COMPASS_PROVIDER_TIMEOUT_MS"); v && *v) {
        c.timeout = checked_timeout(parse_u64(v, "COMPASS_PROVIDER_TIMEOUT_MS"));
    }
    if (const char* v = env("COMPASS_SEED"); v && *v) c.seed = parse_u64(v, "COMPASS_SEED");
}

ProviderSet make_providers(const ProviderConfig& c) {
    if (c.mode == ProviderMode::live) {
        fail(ErrorKind::unavailable,
             "live provider mode is configured but no vendor adapters are built in; use mode 'mock'");
    }
    MockSeedConfig cfg;
    cfg.seed = c.seed;
    return make_mock_providers(cfg);
}

}  // namespace compass
