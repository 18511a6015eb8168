#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "compass/atlas/atlas.hpp"
#include "compass/gateway/image.hpp"
#include "compass/gateway/mock_providers.hpp"
#include "compass/replot/replot.hpp"

namespace compass {

struct GalleryItem {
    std::string item_id;
    std::string ref;  // texture_id or replot_id
    std::string added_at;  // UTC, ISO 8601 with milliseconds
    std::size_t position = 0;

    bool operator==(const GalleryItem&) const = default;
};

/// Job metadata plus creation time; frames live in the job itself.
struct JobEntry {
    InterpolationJob job;
    std::string created_at;
};

inline constexpr const char* kInterruptedJobError = "interrupted by service restart";

/// Everything the service persists, in one directory:
///   atlas.json, gallery.json, jobs.json, frames/<job_id>/NN.png,
///   composites/<object>__<ref>.png, objects/<object>.png
///
/// The static part of the atlas (records, models, bounds) never changes after
/// load and is read without locking. dynamic_points, the gallery and job
/// metadata sit behind one reader/writer lock; every mutation is written to
/// disk before the lock is released.
class ServiceStore {
public:
    explicit ServiceStore(std::filesystem::path data_dir);

    /// Loads atlas.json (required), gallery.json and jobs.json (optional).
    /// Jobs that were pending or running are marked failed.
    void load();

    const std::filesystem::path& data_dir() const noexcept { return dir_; }
    /// Valid after load(). Only dynamic_points may change afterwards, and only
    /// through this store.
    const Atlas& atlas() const noexcept { return atlas_; }

    // Reads under the shared lock.
    nlohmann::json atlas_summary() const;
    std::vector<ReplotRecord> dynamic_points() const;
    std::optional<ReplotRecord> find_replot(const std::string& replot_id) const;
    bool ref_exists(const std::string& ref) const;
    /// The raster behind a texture or replot ref. Error(not_found) otherwise.
    Image ref_image(const std::string& ref) const;

    std::vector<GalleryItem> gallery() const;
    GalleryItem add_gallery_item(const std::string& ref);
    /// Error(not_found) for an unknown item.
    void remove_gallery_item(const std::string& item_id);

    /// Registers a pending job; both refs must resolve and differ.
    InterpolationJob create_job(const std::string& ref_a, const std::string& ref_b);
    std::optional<JobEntry> find_job(const std::string& job_id) const;
    void mark_running(const std::string& job_id);
    void mark_done(const std::string& job_id, std::vector<Image> frames);
    void mark_failed(const std::string& job_id, const std::string& message);
    std::vector<std::string> frame_paths(const std::string& job_id) const;

    /// Assigns the next replot id and appends under the writer lock.
    ReplotRecord append_replot(ReplotDraft draft, const std::string& job_id, int frame_index);

    std::filesystem::path object_image_path(TargetObject object) const;
    /// Relative path of the cached composite, if it exists on disk.
    std::optional<std::string> cached_composite(TargetObject object, const std::string& ref) const;
    std::string store_composite(TargetObject object, const std::string& ref, const Image& composite);

private:
    void load_locked();
    void persist_gallery_locked() const;
    void persist_jobs_locked() const;
    void persist_atlas_locked() const;
    void renumber_gallery_locked();
    std::string frame_rel_path(const std::string& job_id, std::size_t index) const;
    bool ref_exists_locked(const std::string& ref) const;

    std::filesystem::path dir_;
    Atlas atlas_;
    mutable std::shared_mutex mutex_;
    std::vector<GalleryItem> gallery_;
    std::uint64_t next_item_ = 1;
    std::map<std::string, JobEntry> jobs_;
    std::uint64_t next_job_ = 1;
    mutable std::mutex composite_mutex_;
};

std::string utc_timestamp();

nlohmann::json to_json(const GalleryItem& item);

}  // namespace compass
