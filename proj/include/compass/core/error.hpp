#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace compass {

enum class ErrorKind {
    invalid_argument,
    validation,
    io,
    provider,
    timeout,
    not_found,
    conflict,
    unavailable,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Failure raised by a generation provider. `stage` names the pipeline step
/// ("analyze_frame", "describe_concept", ...) that was executing.
class ProviderError : public Error {
public:
    ProviderError(std::string provider, std::string stage, const std::string& message,
                  bool timed_out = false);

    const std::string& provider() const noexcept { return provider_; }
    const std::string& stage() const noexcept { return stage_; }
    bool timed_out() const noexcept { return kind() == ErrorKind::timeout; }

private:
    std::string provider_;
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool cond, ErrorKind kind, const std::string& message) {
    if (!cond) throw Error(kind, message);
}

}  // namespace compass
