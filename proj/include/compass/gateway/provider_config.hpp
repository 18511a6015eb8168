#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "compass/gateway/providers.hpp"

namespace compass {

enum class ProviderMode { mock, live };
std::string to_string(ProviderMode mode);
ProviderMode provider_mode_from_string(const std::string& name);

/// Endpoint and credential reference for one live role. Credentials are named
/// by environment variable, never stored inline.
struct LiveEndpoint {
    std::string url;
    std::string credential_env;
};

struct ProviderConfig {
    ProviderMode mode = ProviderMode::mock;
    std::chrono::milliseconds timeout = kDefaultProviderTimeout;
    std::uint64_t seed = 42;
    std::map<std::string, LiveEndpoint> live;  // keyed by role name
};

using EnvLookup = std::function<const char*(const char*)>;

/// Reads {"mode", "timeout_ms", "seed", "live": {role: {"url", "credential_env"}}}.
ProviderConfig provider_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProviderConfig& config);

/// COMPASS_PROVIDER_MODE, COMPASS_PROVIDER_TIMEOUT_MS and COMPASS_SEED win over
/// file values.
void apply_provider_env(ProviderConfig& config, const EnvLookup& env);

/// Mock mode builds the seeded mocks. Live mode throws Error(unavailable): no
/// vendor adapter ships with this build.
ProviderSet make_providers(const ProviderConfig& config);

}  // namespace compass
