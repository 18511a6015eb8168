#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "compass/gateway/providers.hpp"
#include "compass/service/store.hpp"

namespace compass {

/// Background workers that drive interpolation jobs through
/// pending -> running -> done | failed.
class JobRunner {
public:
    JobRunner(ServiceStore& store, const Gateway& gateway, std::size_t workers = 1);
    ~JobRunner();
    JobRunner(const JobRunner&) = delete;
    JobRunner& operator=(const JobRunner&) = delete;

    void submit(const std::string& job_id);
    /// Blocks until the queue is empty and no job is executing.
    void wait_idle();
    /// Stops accepting work; queued jobs stay pending and fail on next load.
    void stop();

private:
    void worker();
    void execute(const std::string& job_id);
    void record_failure(const std::string& job_id, const std::string& message);

    ServiceStore& store_;
    const Gateway& gateway_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::condition_variable idle_cv_;
    std::deque<std::string> queue_;
    std::size_t active_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> threads_;
};

}  // namespace compass
