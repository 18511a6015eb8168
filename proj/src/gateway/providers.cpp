#include "compass/gateway/providers.hpp"

#include "compass/core/error.hpp"
#include "compass/gateway/guarded_call.hpp"

namespace compass {

bool ProviderSet::complete() const noexcept {
    return prompt_stager && texture_generator && texture_applier && video_interpolator &&
           frame_analyzer && concept_describer && text_embedder && image_embedder;
}

void ProviderSet::require_complete() const {
    auto need = [](bool present, const char* role) {
        require(present, ErrorKind::invalid_argument, std::string("provider set is missing ") + role);
    };
    need(prompt_stager != nullptr, "prompt_stager");
    need(texture_generator != nullptr, "texture_generator");
    need(texture_applier != nullptr, "texture_applier");
    need(video_interpolator != nullptr, "video_interpolator");
    need(frame_analyzer != nullptr, "frame_analyzer");
    need(concept_describer != nullptr, "concept_describer");
    need(text_embedder != nullptr, "text_embedder");
    need(image_embedder != nullptr, "image_embedder");
}

Gateway::Gateway(ProviderSet providers, std::chrono::milliseconds timeout)
    : providers_(std::move(providers)), timeout_(timeout) {
    providers_.require_complete();
}

// Each lambda captures the provider handle and its inputs by value so a
// timed-out worker never dangles.

PromptStages Gateway::stage_prompts(const std::string& surface) const {
    auto p = providers_.prompt_stager;
    return guarded_call(p->info().name, "stage_prompts", timeout_,
                        [p, surface] { return p->stage_prompts(surface); });
}

std::vector<Image> Gateway::generate_textures(const PromptStages& stages, int count) const {
    auto p = providers_.texture_generator;
    return guarded_call(p->info().name, "generate_textures", timeout_,
                        [p, stages, count] { return p->generate_textures(stages, count); });
}

Image Gateway::apply_texture(const Image& object_image, const Image& texture_image) const {
    auto p = providers_.texture_applier;
    return guarded_call(p->info().name, "apply_texture", timeout_, [p, object_image, texture_image] {
        return p->apply_texture(object_image, texture_image);
    });
}

std::vector<Image> Gateway::interpolate_video(const Image& a, const Image& b) const {
    auto p = providers_.video_interpolator;
    return guarded_call(p->info().name, "interpolate_video", timeout_,
                        [p, a, b] { return p->interpolate_video(a, b); });
}

std::string Gateway::analyze_frame(const Image& frame) const {
    auto p = providers_.frame_analyzer;
    return guarded_call(p->info().name, "analyze_frame", timeout_,
                        [p, frame] { return p->analyze_frame(frame); });
}

std::string Gateway::describe_concept(const std::string& surface) const {
    auto p = providers_.concept_describer;
    return guarded_call(p->info().name, "describe_concept", timeout_,
                        [p, surface] { return p->describe_concept(surface); });
}

std::vector<float> Gateway::embed_text(const std::string& text) const {
    auto p = providers_.text_embedder;
    return guarded_call(p->info().name, "embed_text", timeout_,
                        [p, text] { return p->embed_text(text); });
}

std::vector<float> Gateway::embed_image(const Image& image) const {
    auto p = providers_.image_embedder;
    return guarded_call(p->info().name, "embed_image", timeout_,
                        [p, image] { return p->embed_image(image); });
}

}  // namespace compass
