#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "compass/embedding/types.hpp"
#include "compass/gateway/providers.hpp"

namespace compass {

/// Everything the mock providers depend on. Equal configs give byte-identical
/// outputs for equal inputs.
struct MockSeedConfig {
    std::uint64_t seed = 42;
    std::size_t image_dim = kImageEmbeddingDim;
    std::size_t text_dim = kTextEmbeddingDim;
    std::vector<std::string> syllables = default_syllables();

    static std::vector<std::string> default_syllables();
};

inline constexpr int kMockVideoFrames = 16;
// Largest per-channel perturbation the mock interpolator adds mid-sequence.
inline constexpr int kMockFramePerturbation = 24;

class MockPromptStager final : public PromptStager {
public:
    explicit MockPromptStager(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-prompt-stager", true}; }
    PromptStages stage_prompts(const std::string& surface) const override;

private:
    MockSeedConfig cfg_;
};

class MockTextureGenerator final : public TextureGenerator {
public:
    explicit MockTextureGenerator(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-texture-generator", true}; }
    std::vector<Image> generate_textures(const PromptStages& stages, int count) const override;

    /// True when the simulated generation of index 2 fails for this prompt.
    bool drops_third(const PromptStages& stages) const;

private:
    MockSeedConfig cfg_;
};

class MockTextureApplier final : public TextureApplier {
public:
    explicit MockTextureApplier(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-texture-applier", true}; }
    Image apply_texture(const Image& object_image, const Image& texture_image) const override;

private:
    MockSeedConfig cfg_;
};

class MockVideoInterpolator final : public VideoInterpolator {
public:
    explicit MockVideoInterpolator(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-video-interpolator", true}; }
    std::vector<Image> interpolate_video(const Image& a, const Image& b) const override;

private:
    MockSeedConfig cfg_;
};

class MockFrameAnalyzer final : public FrameAnalyzer {
public:
    explicit MockFrameAnalyzer(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-frame-analyzer", true}; }
    std::string analyze_frame(const Image& frame) const override;

private:
    MockSeedConfig cfg_;
};

class MockConceptDescriber final : public ConceptDescriber {
public:
    explicit MockConceptDescriber(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-concept-describer", true}; }
    std::string describe_concept(const std::string& surface) const override;

private:
    MockSeedConfig cfg_;
};

class MockTextEmbedder final : public TextEmbedder {
public:
    explicit MockTextEmbedder(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-text-embedder", true}; }
    std::vector<float> embed_text(const std::string& text) const override;

private:
    MockSeedConfig cfg_;
};

class MockImageEmbedder final : public ImageEmbedder {
public:
    explicit MockImageEmbedder(MockSeedConfig cfg) : cfg_(std::move(cfg)) {}
    ProviderInfo info() const override { return {"mock-image-embedder", true}; }
    std::vector<float> embed_image(const Image& image) const override;

private:
    MockSeedConfig cfg_;
};

ProviderSet make_mock_providers(const MockSeedConfig& cfg);

/// Unit-norm pseudo-random vector drawn from SplitMix64(key).
std::vector<float> seeded_unit_vector(std::uint64_t key, std::size_t dim);

/// Reduplicated mimetic built from the syllable inventory, e.g. "Fuwafuwa".
std::string mimetic_from_key(std::uint64_t key, const std::vector<std::string>& syllables);

/// Procedural value-noise texture keyed by `key`.
Image procedural_texture(std::uint64_t key, std::uint32_t size = kMockImageSize);

enum class TargetObject { vase, headphones };
std::string to_string(TargetObject object);
TargetObject target_object_from_string(const std::string& name);
/// Gray-shaded silhouette on a white background.
Image mock_object_image(TargetObject object, std::uint32_t size = kMockImageSize);

}  // namespace compass
