#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "compass/atlas/prompt_stages.hpp"
#include "compass/gateway/image.hpp"

namespace compass {

struct ProviderInfo {
    std::string name;
    bool deterministic = false;
};

// One interface per generative role. Implementations must be safe to call
// concurrently and report failures by throwing.

class PromptStager {
public:
    virtual ~PromptStager() = default;
    virtual ProviderInfo info() const = 0;
    virtual PromptStages stage_prompts(const std::string& surface) const = 0;
};

class TextureGenerator {
public:
    virtual ~TextureGenerator() = default;
    virtual ProviderInfo info() const = 0;
    /// 1..count images; fewer than requested when some generations fail.
    virtual std::vector<Image> generate_textures(const PromptStages& stages, int count) const = 0;
};

class TextureApplier {
public:
    virtual ~TextureApplier() = default;
    virtual ProviderInfo info() const = 0;
    virtual Image apply_texture(const Image& object_image, const Image& texture_image) const = 0;
};

class VideoInterpolator {
public:
    virtual ~VideoInterpolator() = default;
    virtual ProviderInfo info() const = 0;
    /// One-way A -> B frame sequence.
    virtual std::vector<Image> interpolate_video(const Image& a, const Image& b) const = 0;
};

class FrameAnalyzer {
public:
    virtual ~FrameAnalyzer() = default;
    virtual ProviderInfo info() const = 0;
    virtual std::string analyze_frame(const Image& frame) const = 0;
};

class ConceptDescriber {
public:
    virtual ~ConceptDescriber() = default;
    virtual ProviderInfo info() const = 0;
    virtual std::string describe_concept(const std::string& surface) const = 0;
};

class TextEmbedder {
public:
    virtual ~TextEmbedder() = default;
    virtual ProviderInfo info() const = 0;
    virtual std::vector<float> embed_text(const std::string& text) const = 0;
};

class ImageEmbedder {
public:
    virtual ~ImageEmbedder() = default;
    virtual ProviderInfo info() const = 0;
    virtual std::vector<float> embed_image(const Image& image) const = 0;
};

struct ProviderSet {
    std::shared_ptr<const PromptStager> prompt_stager;
    std::shared_ptr<const TextureGenerator> texture_generator;
    std::shared_ptr<const TextureApplier> texture_applier;
    std::shared_ptr<const VideoInterpolator> video_interpolator;
    std::shared_ptr<const FrameAnalyzer> frame_analyzer;
    std::shared_ptr<const ConceptDescriber> concept_describer;
    std::shared_ptr<const TextEmbedder> text_embedder;
    std::shared_ptr<const ImageEmbedder> image_embedder;

    bool complete() const noexcept;
    /// Throws Error(invalid_argument) naming the first missing role.
    void require_complete() const;
};

inline constexpr std::chrono::milliseconds kDefaultProviderTimeout{30000};

/// Front door to a ProviderSet: every call runs under a timeout and any
/// failure surfaces as a ProviderError tagged with the operation name.
class Gateway {
public:
    explicit Gateway(ProviderSet providers,
                     std::chrono::milliseconds timeout = kDefaultProviderTimeout);

    PromptStages stage_prompts(const std::string& surface) const;
    std::vector<Image> generate_textures(const PromptStages& stages, int count) const;
    Image apply_texture(const Image& object_image, const Image& texture_image) const;
    std::vector<Image> interpolate_video(const Image& a, const Image& b) const;
    std::string analyze_frame(const Image& frame) const;
    std::string describe_concept(const std::string& surface) const;
    std::vector<float> embed_text(const std::string& text) const;
    std::vector<float> embed_image(const Image& image) const;

    const ProviderSet& providers() const noexcept { return providers_; }
    std::chrono::milliseconds timeout() const noexcept { return timeout_; }

private:
    ProviderSet providers_;
    std::chrono::milliseconds timeout_;
};

}  // namespace compass
