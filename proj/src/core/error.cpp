#include "compass/core/error.hpp"

namespace compass {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
        case ErrorKind::provider: return "provider";
        case ErrorKind::timeout: return "timeout";
        case ErrorKind::not_found: return "not_found";
        case ErrorKind::conflict: return "conflict";
        case ErrorKind::unavailable: return "unavailable";
    }
    return "unknown";
}

ProviderError::ProviderError(std::string provider, std::string stage, const std::string& message,
                             bool timed_out)
    : Error(timed_out ? ErrorKind::timeout : ErrorKind::provider,
            stage + " [" + provider + "]: " + message),
      provider_(std::move(provider)),
      stage_(std::move(stage)) {}

}  // namespace compass
