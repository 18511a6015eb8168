#include "compass/service/store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "compass/atlas/atlas_json.hpp"
#include "compass/core/error.hpp"
#include "compass/embedding/model_json.hpp"
#include "compass/gateway/png_codec.hpp"

namespace compass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string numbered(const char* prefix, std::uint64_t n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%04llu", prefix, static_cast<unsigned long long>(n));
    return buf;
}

json bounds_json(const Bounds& b) { return {{"min", to_json(b.min)}, {"max", to_json(b.max)}}; }

std::string file_url(const std::string& rel) { return rel.empty() ? rel : "/files/" + rel; }

}  // namespace

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03lldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<long long>(ms));
    return buf;
}

json to_json(const GalleryItem& g) {
    return {{"item_id", g.item_id}, {"ref", g.ref}, {"added_at", g.added_at}, {"position", g.position}};
}

ServiceStore::ServiceStore(fs::path data_dir) : dir_(std::move(data_dir)) {}

void ServiceStore::load() {
    try {
        load_locked();
    } catch (const json::exception& e) {
        fail(ErrorKind::validation, std::string("corrupt service state in '") + dir_.string() + "': " + e.what());
    }
}

void ServiceStore::load_locked() {
    std::unique_lock lock(mutex_);
    const auto atlas_path = dir_ / "atlas.json";
    require(fs::exists(atlas_path), ErrorKind::io, "no atlas at '" + atlas_path.string() + "'");
    atlas_ = load_atlas(atlas_path);

    gallery_.clear();
    next_item_ = 1;
    if (fs::exists(dir_ / "gallery.json")) {
        const auto j = json::parse(read_file(dir_ / "gallery.json"));
        next_item_ = j.at("next_item").get<std::uint64_t>();
        for (const auto& g : j.at("items")) {
            gallery_.push_back({g.at("item_id").get<std::string>(), g.at("ref").get<std::string>(),
                                g.at("added_at").get<std::string>(), g.at("position").get<std::size_t>()});
        }
        renumber_gallery_locked();
    }

    jobs_.clear();
    next_job_ = 1;
    bool interrupted = false;
    if (fs::exists(dir_ / "jobs.json")) {
        const auto j = json::parse(read_file(dir_ / "jobs.json"));
        next_job_ = j.at("next_job").get<std::uint64_t>();
        for (const auto& r : j.at("jobs")) {
            const auto id = r.at("job_id").get<std::string>();
            auto status = job_status_from_string(r.at("status").get<std::string>());
            std::optional<std::string> error;
            if (r.contains("error") && !r.at("error").is_null()) error = r.at("error").get<std::string>();
            std::vector<Image> frames;
            if (status == JobStatus::done) {
                const auto count = r.at("frame_count").get<std::size_t>();
                try {
                    for (std::size_t i = 0; i < count; ++i) frames.push_back(read_png(dir_ / frame_rel_path(id, i)));
                } catch (const Error& e) {
                    frames.clear();
                    status = JobStatus::failed;
                    error = std::string("frames missing on disk: ") + e.what();
                    interrupted = true;
                }
            } else if (status == JobStatus::pending || status == JobStatus::running) {
                status = JobStatus::failed;
                error = kInterruptedJobError;
                interrupted = true;
            }
            jobs_[id] = {InterpolationJob::restore(id, r.at("texture_a").get<std::string>(),
                                                   r.at("texture_b").get<std::string>(), status,
                                                   std::move(frames), std::move(error)),
                         r.at("created_at").get<std::string>()};
        }
    }
    if (interrupted) persist_jobs_locked();

    fs::create_directories(dir_ / "objects");
    for (auto object : {TargetObject::vase, TargetObject::headphones}) {
        const auto path = object_image_path(object);
        if (!fs::exists(path)) write_png(path, mock_object_image(object));
    }
}

json ServiceStore::atlas_summary() const {
    json terms = json::array();
    for (const auto& t : atlas_.terms) {
        terms.push_back({{"term_id", t.term_id},
                         {"surface", t.surface},
                         {"english_description", t.stages.english_description},
                         {"coord", to_json(t.coord)},
                         {"texture_ids", atlas_.owned_textures(t.term_id)}});
    }
    json textures = json::array();
    for (const auto& x : atlas_.textures) {
        textures.push_back({{"texture_id", x.texture_id},
                            {"term_id", x.term_id},
                            {"image_url", file_url(x.image_path)},
                            {"thumbnail_url", file_url(x.thumbnail_path)},
                            {"coord", to_json(x.coord)}});
    }
    json dynamic = json::array();
    {
        std::shared_lock lock(mutex_);
        for (const auto& r : atlas_.dynamic_points) {
            auto j = to_json(r);
            j["frame_url"] = file_url(frame_rel_path(r.job_id, static_cast<std::size_t>(r.frame_index)));
            dynamic.push_back(std::move(j));
        }
    }
    return {{"version", atlas_.version},
            {"params", to_json(atlas_.params)},
            {"terms", std::move(terms)},
            {"textures", std::move(textures)},
            {"dynamic_points", std::move(dynamic)},
            {"bounds", {{"image", bounds_json(atlas_.image_bounds)}, {"text", bounds_json(atlas_.text_bounds)}}}};
}

std::vector<ReplotRecord> ServiceStore::dynamic_points() const {
    std::shared_lock lock(mutex_);
    return atlas_.dynamic_points;
}

std::optional<ReplotRecord> ServiceStore::find_replot(const std::string& replot_id) const {
    std::shared_lock lock(mutex_);
    const auto* r = atlas_.find_replot(replot_id);
    return r ? std::optional<ReplotRecord>(*r) : std::nullopt;
}

bool ServiceStore::ref_exists_locked(const std::string& ref) const {
    return atlas_.find_texture(ref) != nullptr || atlas_.find_replot(ref) != nullptr;
}

bool ServiceStore::ref_exists(const std::string& ref) const {
    std::shared_lock lock(mutex_);
    return ref_exists_locked(ref);
}

Image ServiceStore::ref_image(const std::string& ref) const {
    if (const auto* x = atlas_.find_texture(ref)) return read_png(dir_ / x->image_path);
    std::shared_lock lock(mutex_);
    const auto* r = atlas_.find_replot(ref);
    require(r != nullptr, ErrorKind::not_found, "unknown ref '" + ref + "'");
    auto it = jobs_.find(r->job_id);
    if (it != jobs_.end() && it->second.job.status() == JobStatus::done) {
        return extract_frame(it->second.job, r->frame_index);
    }
    return read_png(dir_ / frame_rel_path(r->job_id, static_cast<std::size_t>(r->frame_index)));
}

std::vector<GalleryItem> ServiceStore::gallery() const {
    std::shared_lock lock(mutex_);
    return gallery_;
}

GalleryItem ServiceStore::add_gallery_item(const std::string& ref) {
    std::unique_lock lock(mutex_);
    require(ref_exists_locked(ref), ErrorKind::not_found, "unknown ref '" + ref + "'");
    GalleryItem item{numbered("item-", next_item_++), ref, utc_timestamp(), gallery_.size()};
    gallery_.push_back(item);
    persist_gallery_locked();
    return item;
}

void ServiceStore::remove_gallery_item(const std::string& item_id) {
    std::unique_lock lock(mutex_);
    auto it = std::find_if(gallery_.begin(), gallery_.end(),
                           [&](const GalleryItem& g) { return g.item_id == item_id; });
    require(it != gallery_.end(), ErrorKind::not_found, "unknown gallery item '" + item_id + "'");
    gallery_.erase(it);
    renumber_gallery_locked();
    persist_gallery_locked();
}

void ServiceStore::renumber_gallery_locked() {
    std::stable_sort(gallery_.begin(), gallery_.end(),
                     [](const GalleryItem& a, const GalleryItem& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < gallery_.size(); ++i) gallery_[i].position = i;
}

InterpolationJob ServiceStore::create_job(const std::string& ref_a, const std::string& ref_b) {
    std::unique_lock lock(mutex_);
    require(ref_exists_locked(ref_a), ErrorKind::not_found, "unknown ref '" + ref_a + "'");
    require(ref_exists_locked(ref_b), ErrorKind::not_found, "unknown ref '" + ref_b + "'");
    require(ref_a != ref_b, ErrorKind::conflict, "interpolation needs two different images");
    InterpolationJob job(numbered("job-", next_job_++), ref_a, ref_b);
    jobs_[job.job_id()] = {job, utc_timestamp()};
    persist_jobs_locked();
    return job;
}

std::optional<JobEntry> ServiceStore::find_job(const std::string& job_id) const {
    std::shared_lock lock(mutex_);
    auto it = jobs_.find(job_id);
    return it == jobs_.end() ? std::nullopt : std::optional<JobEntry>(it->second);
}

void ServiceStore::mark_running(const std::string& job_id) {
    std::unique_lock lock(mutex_);
    jobs_.at(job_id).job.start();
    persist_jobs_locked();
}

void ServiceStore::mark_done(const std::string& job_id, std::vector<Image> frames) {
    // Frames reach disk before the job is recorded as done.
    for (std::size_t i = 0; i < frames.size(); ++i) write_png(dir_ / frame_rel_path(job_id, i), frames[i]);
    std::unique_lock lock(mutex_);
    jobs_.at(job_id).job.finish(std::move(frames));
    persist_jobs_locked();
}

void ServiceStore::mark_failed(const std::string& job_id, const std::string& message) {
    std::unique_lock lock(mutex_);
    jobs_.at(job_id).job.fail_with(message);
    persist_jobs_locked();
}

std::vector<std::string> ServiceStore::frame_paths(const std::string& job_id) const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) return out;
    for (std::size_t i = 0; i < it->second.job.frame_count(); ++i) out.push_back(frame_rel_path(job_id, i));
    return out;
}

ReplotRecord ServiceStore::append_replot(ReplotDraft draft, const std::string& job_id, int frame_index) {
    std::unique_lock lock(mutex_);
    auto record = make_replot_record(std::move(draft), next_replot_id(atlas_), job_id, frame_index);
    atlas_.dynamic_points.push_back(record);
    try {
        persist_atlas_locked();
    } catch (...) {
        atlas_.dynamic_points.pop_back();
        throw;
    }
    return record;
}

fs::path ServiceStore::object_image_path(TargetObject object) const {
    return dir_ / "objects" / (to_string(object) + ".png");
}

std::optional<std::string> ServiceStore::cached_composite(TargetObject object, const std::string& ref) const {
    const auto rel = "composites/" + to_string(object) + "__" + ref + ".png";
    std::lock_guard lock(composite_mutex_);
    if (fs::exists(dir_ / rel)) return rel;
    return std::nullopt;
}

std::string ServiceStore::store_composite(TargetObject object, const std::string& ref, const Image& composite) {
    const auto rel = "composites/" + to_string(object) + "__" + ref + ".png";
    const auto bytes = encode_png(composite);
    std::lock_guard lock(composite_mutex_);
    if (!fs::exists(dir_ / rel)) {
        write_file_atomic(dir_ / rel, std::string(bytes.begin(), bytes.end()));
    }
    return rel;
}

std::string ServiceStore::frame_rel_path(const std::string& job_id, std::size_t index) const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu.png", index);
    return "frames/" + job_id + "/" + buf;
}

void ServiceStore::persist_gallery_locked() const {
    json items = json::array();
    for (const auto& g : gallery_) items.push_back(to_json(g));
    write_file_atomic(dir_ / "gallery.json", json{{"next_item", next_item_}, {"items", items}}.dump(2) + "\n");
}

void ServiceStore::persist_jobs_locked() const {
    json jobs = json::array();
    for (const auto& [id, e] : jobs_) {
        jobs.push_back({{"job_id", id},
                        {"texture_a", e.job.texture_a()},
                        {"texture_b", e.job.texture_b()},
                        {"status", to_string(e.job.status())},
                        {"frame_count", e.job.frame_count()},
                        {"error", e.job.error() ? json(*e.job.error()) : json(nullptr)},
                        {"created_at", e.created_at}});
    }
    write_file_atomic(dir_ / "jobs.json", json{{"next_job", next_job_}, {"jobs", jobs}}.dump(2) + "\n");
}

void ServiceStore::persist_atlas_locked() const { save_atlas(atlas_, dir_ / "atlas.json"); }

}  // namespace compass
