#include "compass/service/job_runner.hpp"

#include "compass/core/error.hpp"

namespace compass {

JobRunner::JobRunner(ServiceStore& store, const Gateway& gateway, std::size_t workers)
    : store_(store), gateway_(gateway) {
    for (std::size_t i = 0; i < std::max<std::size_t>(workers, 1); ++i) threads_.emplace_back([this] { worker(); });
}

JobRunner::~JobRunner() { stop(); }

void JobRunner::submit(const std::string& job_id) {
    {
        std::lock_guard lock(mutex_);
        require(!stopping_, ErrorKind::unavailable, "job runner is stopping");
        queue_.push_back(job_id);
    }
    cv_.notify_one();
}

void JobRunner::wait_idle() {
    std::unique_lock lock(mutex_);
    idle_cv_.wait(lock, [this] { return (queue_.empty() || stopping_) && active_ == 0; });
}

void JobRunner::stop() {
    {
        std::lock_guard lock(mutex_);
        if (stopping_ && threads_.empty()) return;
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) {
        if (t.joinable()) t.join();
    }
    threads_.clear();
    idle_cv_.notify_all();
}

void JobRunner::worker() {
    for (;;) {
        std::string job_id;
        {
            std::unique_lock lock(mutex_);
            cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            job_id = std::move(queue_.front());
            queue_.pop_front();
            ++active_;
        }
        execute(job_id);
        {
            std::lock_guard lock(mutex_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void JobRunner::record_failure(const std::string& job_id, const std::string& message) {
    try {
        store_.mark_failed(job_id, message);
    } catch (const std::exception&) {
        // already terminal
    }
}

void JobRunner::execute(const std::string& job_id) {
    try {
        store_.mark_running(job_id);
        const auto entry = store_.find_job(job_id);
        const Image a = store_.ref_image(entry->job.texture_a());
        const Image b = store_.ref_image(entry->job.texture_b());
        store_.mark_done(job_id, gateway_.interpolate_video(a, b));
    } catch (const ProviderError& e) {
        record_failure(job_id, e.stage() + ": " + e.what());
    } catch (const std::exception& e) {
        record_failure(job_id, e.what());
    }
}

}  // namespace compass
