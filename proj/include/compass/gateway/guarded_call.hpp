#pragma once

#include <chrono>
#include <exception>
#include <future>
#include <memory>
#include <string>
#include <thread>

#include "compass/core/error.hpp"

namespace compass {

/// Runs `fn` on a worker thread and waits at most `timeout`. On expiry the
/// worker is detached (it owns copies of everything it touches) and a timeout
/// ProviderError is thrown. Any exception from `fn` is rethrown as a
/// ProviderError for (provider, stage). A zero timeout waits indefinitely.
template <class Fn>
auto guarded_call(const std::string& provider, const std::string& stage,
                  std::chrono::milliseconds timeout, Fn fn) -> decltype(fn()) {
    using Result = decltype(fn());
    auto task = std::make_shared<std::packaged_task<Result()>>(std::move(fn));
    auto future = task->get_future();
    std::thread([task] { (*task)(); }).detach();

    if (timeout.count() > 0 && future.wait_for(timeout) != std::future_status::ready) {
        throw ProviderError(provider, stage,
                            "no response within " + std::to_string(timeout.count()) + " ms", true);
    }
    try {
        return future.get();
    } catch (const ProviderError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProviderError(provider, stage, e.what());
    } catch (...) {
        throw ProviderError(provider, stage, "unknown failure");
    }
}

}  // namespace compass
