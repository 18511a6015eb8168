#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compass/atlas/atlas.hpp"
#include "compass/gateway/image.hpp"
#include "compass/gateway/providers.hpp"

namespace compass {

enum class JobStatus { pending, running, done, failed };
std::string to_string(JobStatus status);
JobStatus job_status_from_string(const std::string& name);

/// A one-way A -> B video job. Status only moves pending -> running ->
/// {done, failed}; frames are present exactly when done.
class InterpolationJob {
public:
    InterpolationJob() = default;
    InterpolationJob(std::string job_id, std::string texture_a, std::string texture_b);

    const std::string& job_id() const noexcept { return job_id_; }
    const std::string& texture_a() const noexcept { return texture_a_; }
    const std::string& texture_b() const noexcept { return texture_b_; }
    JobStatus status() const noexcept { return status_; }
    const std::vector<Image>& frames() const noexcept { return frames_; }
    const std::optional<std::string>& error() const noexcept { return error_; }
    std::size_t frame_count() const noexcept { return frames_.size(); }

    /// Each throws Error(conflict) on an illegal transition.
    void start();
    void finish(std::vector<Image> frames);
    void fail_with(std::string message);

    /// Rebuilds a job from persisted state, checking the frames-iff-done rule.
    static InterpolationJob restore(std::string job_id, std::string texture_a, std::string texture_b,
                                    JobStatus status, std::vector<Image> frames,
                                    std::optional<std::string> error);

private:
    std::string job_id_;
    std::string texture_a_;
    std::string texture_b_;
    JobStatus status_ = JobStatus::pending;
    std::vector<Image> frames_;
    std::optional<std::string> error_;
};

/// The exact stored frame. Error(conflict) when the job is not done or the
/// index is outside [0, frame_count).
const Image& extract_frame(const InterpolationJob& job, int index);

/// Steps 1-4 for one frame, computed without touching the atlas.
struct ReplotDraft {
    std::string surface;
    std::string description;
    Point2 image_coord;
    Point2 text_coord;
    std::size_t image_source_dim = 0;
    std::size_t text_source_dim = 0;
};

/// analyze_frame -> describe_concept -> embed_image + embed_text -> transform
/// against image_model and text_model. Provider failures surface as
/// ProviderError carrying the stage name.
ReplotDraft compute_replot(const Atlas& atlas, const Gateway& gateway, const Image& frame);

/// Next free id of the form "replot-NNNN".
std::string next_replot_id(const Atlas& atlas);

ReplotRecord make_replot_record(ReplotDraft draft, std::string replot_id, std::string job_id,
                                int frame_index);

/// compute_replot followed by the append. Nothing is appended on failure.
ReplotRecord replot_frame(Atlas& atlas, const Gateway& gateway, const Image& frame,
                          const std::string& job_id, int frame_index);

}  // namespace compass
