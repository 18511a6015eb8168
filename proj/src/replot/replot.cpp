#include "compass/replot/replot.hpp"

#include <cmath>
#include <cstdio>

#include "compass/core/error.hpp"

namespace compass {

std::string to_string(JobStatus s) {
    switch (s) {
        case JobStatus::pending: return "pending";
        case JobStatus::running: return "running";
        case JobStatus::done: return "done";
        case JobStatus::failed: return "failed";
    }
    return "unknown";
}

JobStatus job_status_from_string(const std::string& name) {
    if (name == "pending") return JobStatus::pending;
    if (name == "running") return JobStatus::running;
    if (name == "done") return JobStatus::done;
    if (name == "failed") return JobStatus::failed;
    fail(ErrorKind::validation, "unknown job status '" + name + "'");
}

InterpolationJob::InterpolationJob(std::string job_id, std::string texture_a, std::string texture_b)
    : job_id_(std::move(job_id)), texture_a_(std::move(texture_a)), texture_b_(std::move(texture_b)) {}

void InterpolationJob::start() {
    require(status_ == JobStatus::pending, ErrorKind::conflict,
            "job " + job_id_ + " cannot start from " + to_string(status_));
    status_ = JobStatus::running;
}

void InterpolationJob::finish(std::vector<Image> frames) {
    require(status_ == JobStatus::running, ErrorKind::conflict,
            "job " + job_id_ + " cannot finish from " + to_string(status_));
    require(!frames.empty(), ErrorKind::conflict, "job " + job_id_ + " finished without frames");
    frames_ = std::move(frames);
    status_ = JobStatus::done;
}

void InterpolationJob::fail_with(std::string message) {
    require(status_ == JobStatus::pending || status_ == JobStatus::running, ErrorKind::conflict,
            "job " + job_id_ + " cannot fail from " + to_string(status_));
    frames_.clear();
    error_ = std::move(message);
    status_ = JobStatus::failed;
}

InterpolationJob InterpolationJob::restore(std::string job_id, std::string texture_a,
                                           std::string texture_b, JobStatus status,
                                           std::vector<Image> frames,
                                           std::optional<std::string> error) {
    require((status == JobStatus::done) == !frames.empty(), ErrorKind::validation,
            "job " + job_id + ": frames must be present exactly when done");
    InterpolationJob job(std::move(job_id), std::move(texture_a), std::move(texture_b));
    job.status_ = status;
    job.frames_ = std::move(frames);
    job.error_ = std::move(error);
    return job;
}

const Image& extract_frame(const InterpolationJob& job, int index) {
    require(job.status() == JobStatus::done, ErrorKind::conflict,
            "job " + job.job_id() + " is " + to_string(job.status()) + ", not done");
    require(index >= 0 && static_cast<std::size_t>(index) < job.frame_count(), ErrorKind::conflict,
            "frame index " + std::to_string(index) + " is outside [0, " +
                std::to_string(job.frame_count()) + ")");
    return job.frames()[static_cast<std::size_t>(index)];
}

namespace {

Point2 place(const UmapModel& model, std::vector<float> vector, const std::string& provider,
             const char* stage) {
    if (vector.size() != model.dim()) {
        throw ProviderError(provider, stage,
                            "returned " + std::to_string(vector.size()) + " values, model expects " +
                                std::to_string(model.dim()));
    }
    const std::vector<std::vector<float>> rows{std::move(vector)};
    const auto coords = umap_transform(model, EmbeddingMatrix::from_rows(rows));
    const Point2 p = coords.front();
    require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::validation,
            std::string("transform produced a non-finite coordinate for ") + stage);
    return p;
}

}  // namespace

ReplotDraft compute_replot(const Atlas& atlas, const Gateway& gateway, const Image& frame) {
    require_decodable(frame, "frame");
    ReplotDraft d;
    d.surface = gateway.analyze_frame(frame);
    d.description = gateway.describe_concept(d.surface);
    auto image_vec = gateway.embed_image(frame);
    auto text_vec = gateway.embed_text(d.description);
    const auto& p = gateway.providers();
    d.image_coord = place(atlas.image_model, std::move(image_vec), p.image_embedder->info().name, "embed_image");
    d.text_coord = place(atlas.text_model, std::move(text_vec), p.text_embedder->info().name, "embed_text");
    d.image_source_dim = atlas.image_model.dim();
    d.text_source_dim = atlas.text_model.dim();
    return d;
}

std::string next_replot_id(const Atlas& atlas) {
    unsigned long next = 1;
    for (const auto& r : atlas.dynamic_points) {
        const auto& id = r.replot_id;
        if (id.rfind("replot-", 0) != 0) continue;
        try {
            next = std::max(next, std::stoul(id.substr(7)) + 1);
        } catch (const std::exception&) {
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "replot-%04lu", next);
    return buf;
}

ReplotRecord make_replot_record(ReplotDraft d, std::string replot_id, std::string job_id,
                                int frame_index) {
    ReplotRecord r;
    r.replot_id = std::move(replot_id);
    r.job_id = std::move(job_id);
    r.frame_index = frame_index;
    r.surface = std::move(d.surface);
    r.description = std::move(d.description);
    r.image_coord = d.image_coord;
    r.text_coord = d.text_coord;
    r.image_source_dim = d.image_source_dim;
    r.text_source_dim = d.text_source_dim;
    return r;
}

ReplotRecord replot_frame(Atlas& atlas, const Gateway& gateway, const Image& frame,
                          const std::string& job_id, int frame_index) {
    auto draft = compute_replot(atlas, gateway, frame);
    auto record = make_replot_record(std::move(draft), next_replot_id(atlas), job_id, frame_index);
    atlas.dynamic_points.push_back(record);
    return record;
}

}  // namespace compass
