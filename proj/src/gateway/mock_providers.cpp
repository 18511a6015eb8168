#include "compass/gateway/mock_providers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "compass/core/error.hpp"
#include "compass/core/hash.hpp"
#include "compass/core/rng.hpp"

namespace compass {

namespace {

// Stream salts keep the providers' key spaces apart.
constexpr std::uint64_t kStagerSalt = 0x5354414745ULL;
constexpr std::uint64_t kTextureSalt = 0x54455854ULL;
constexpr std::uint64_t kVideoSalt = 0x564944454FULL;
constexpr std::uint64_t kAnalyzerSalt = 0x414E414CULL;
constexpr std::uint64_t kDescriberSalt = 0x44455343ULL;
constexpr std::uint64_t kTextEmbedSalt = 0x54454D42ULL;
constexpr std::uint64_t kImageEmbedSalt = 0x49454D42ULL;

constexpr std::array kMaterials = {
    "wet clay",   "brushed aluminum", "moss",     "boiled wool", "glass beads", "natural rubber",
    "raw silk",   "sandstone",        "memory foam", "lacquered wood", "slime", "river ice",
    "cork",       "crushed velvet",   "rusted iron", "beeswax",
};

constexpr std::array kQualities = {
    "soft",    "springy", "grainy", "glossy",  "fibrous", "brittle", "sticky",  "velvety",
    "ridged",  "bubbly",  "damp",   "powdery", "elastic", "crinkled", "pitted", "smooth",
    "fuzzy",   "slick",   "knobbly", "flaky",
};

constexpr std::array kRhythms = {
    "slow rolling", "quick pattering", "trembling", "swelling", "crackling", "lazy drifting",
    "tight pulsing", "scattered",
};

std::string pick(std::uint64_t key, std::span<const char* const> list) {
    return list[key % list.size()];
}

// Three distinct qualities.
std::array<std::string, 3> qualities(std::uint64_t key) {
    SplitMix64 rng(key);
    std::array<std::size_t, 3> idx{};
    for (std::size_t i = 0; i < 3; ++i) {
        std::size_t q;
        do {
            q = rng.below(kQualities.size());
        } while (std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(i), q) !=
                 idx.begin() + static_cast<std::ptrdiff_t>(i));
        idx[i] = q;
    }
    return {kQualities[idx[0]], kQualities[idx[1]], kQualities[idx[2]]};
}

// Tileable value noise in [-1, 1]: a (size / cell)^2 lattice of uniform values,
// smoothstep-bilinear interpolated with wrap-around.
class NoiseLattice {
public:
    NoiseLattice(SplitMix64& rng, std::uint32_t size, std::uint32_t cell)
        : cell_(std::max<std::uint32_t>(cell, 1)), cells_(std::max<std::uint32_t>(size / cell_, 1)),
          values_(std::size_t{cells_} * cells_) {
        for (auto& v : values_) v = rng.uniform(-1.0, 1.0);
    }

    double operator()(std::uint32_t x, std::uint32_t y) const noexcept {
        const double fx = static_cast<double>(x) / cell_;
        const double fy = static_cast<double>(y) / cell_;
        const auto x0 = static_cast<std::uint32_t>(fx);
        const auto y0 = static_cast<std::uint32_t>(fy);
        const double tx = smooth(fx - x0);
        const double ty = smooth(fy - y0);
        const double v00 = at(x0, y0), v10 = at(x0 + 1, y0);
        const double v01 = at(x0, y0 + 1), v11 = at(x0 + 1, y0 + 1);
        const double top = v00 + (v10 - v00) * tx;
        const double bottom = v01 + (v11 - v01) * tx;
        return top + (bottom - top) * ty;
    }

private:
    static double smooth(double t) noexcept { return t * t * (3.0 - 2.0 * t); }
    double at(std::uint32_t x, std::uint32_t y) const noexcept {
        return values_[std::size_t{y % cells_} * cells_ + x % cells_];
    }

    std::uint32_t cell_;
    std::uint32_t cells_;
    std::vector<double> values_;
};

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void require_text(const std::string& text, const char* what) {
    require(!text.empty(), ErrorKind::invalid_argument, std::string(what) + " must be non-empty");
}

}  // namespace

std::vector<std::string> MockSeedConfig::default_syllables() {
    return {"ka", "ki", "ku", "ke", "ko", "sa", "shi", "su", "se", "so", "ta", "chi",
            "tsu", "te", "to", "na", "ni", "nu", "ne", "no", "ha", "hi", "fu", "he",
            "ho", "ma", "mi", "mu", "me", "mo", "yu", "yo", "ra", "ri", "ru", "ro",
            "wa", "ga", "gu", "go", "zu", "do", "bo", "pa", "pi", "pu", "nyo", "pyo"};
}

std::vector<float> seeded_unit_vector(std::uint64_t key, std::size_t dim) {
    SplitMix64 rng(key);
    std::vector<double> raw(dim);
    double norm = 0.0;
    for (auto& v : raw) {
        v = rng.normal();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    std::vector<float> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(raw[i] / norm);
    return out;
}

std::string mimetic_from_key(std::uint64_t key, const std::vector<std::string>& syllables) {
    require(!syllables.empty(), ErrorKind::invalid_argument, "empty syllable inventory");
    const auto n = syllables.size();
    const auto& a = syllables[key % n];
    const auto& b = syllables[(key >> 20) % n];
    std::string s;
    switch ((key >> 40) % 4) {
        case 0: s = a + b + a + b; break;              // fuwafuwa
        case 1: s = a + b + b + "n"; break;            // honyonyon
        case 2: s = a + b + "n" + a + b + "n"; break;  // pokanpokan
        default: s = a + b + "ri" + a + b + "ri"; break;
    }
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

Image procedural_texture(std::uint64_t key, std::uint32_t size) {
    SplitMix64 rng(key);
    constexpr std::array<std::uint32_t, 3> kCells = {16, 32, 64};
    const std::uint32_t cell = kCells[rng.below(kCells.size())];
    double base[3], tint[3];
    for (int c = 0; c < 3; ++c) base[c] = 48.0 + static_cast<double>(rng.below(160));
    for (int c = 0; c < 3; ++c) tint[c] = rng.uniform(0.6, 1.0);
    const double contrast = 40.0 + static_cast<double>(rng.below(60));
    const NoiseLattice coarse(rng, size, cell);
    const NoiseLattice fine(rng, size, std::max<std::uint32_t>(cell / 4, 2));

    Image img(size, size);
    for (std::uint32_t y = 0; y < size; ++y) {
        for (std::uint32_t x = 0; x < size; ++x) {
            const double v = coarse(x, y) + 0.35 * fine(x, y);
            auto* p = img.at(x, y);
            for (int c = 0; c < 3; ++c) p[c] = to_byte(base[c] + contrast * tint[c] * v);
        }
    }
    return img;
}

PromptStages MockPromptStager::stage_prompts(const std::string& surface) const {
    require_text(surface, "surface");
    const std::uint64_t key = hash_combine(cfg_.seed ^ kStagerSalt, fnv1a64(surface));
    const auto q = qualities(mix64(key));
    PromptStages s;
    s.material = pick(key, kMaterials);
    s.physical_qualities = q[0] + ", " + q[1] + ", " + q[2];
    s.english_description = "A " + q[0] + " and " + q[1] + " " + s.material +
                            " surface that feels the way \"" + surface + "\" sounds, " + q[2] +
                            " to the touch";
    s.image_prompt = "seamless tileable texture, " + s.english_description +
                     ", macro photograph, even diffuse lighting";
    return s;
}

bool MockTextureGenerator::drops_third(const PromptStages& stages) const {
    return hash_combine(cfg_.seed ^ kTextureSalt, fnv1a64(stages.image_prompt)) % 7 == 0;
}

std::vector<Image> MockTextureGenerator::generate_textures(const PromptStages& stages,
                                                           int count) const {
    require(count >= 1 && count <= 3, ErrorKind::invalid_argument,
            "texture count must be in [1, 3]");
    require_text(stages.image_prompt, "image_prompt");
    const std::uint64_t prompt_key = hash_combine(cfg_.seed ^ kTextureSalt, fnv1a64(stages.image_prompt));
    const bool drop = drops_third(stages);
    std::vector<Image> out;
    for (int i = 0; i < count; ++i) {
        if (i == 2 && drop) continue;
        out.push_back(procedural_texture(hash_combine(prompt_key, static_cast<std::uint64_t>(i))));
    }
    require(!out.empty(), ErrorKind::provider, "every texture generation failed");
    return out;
}

Image MockTextureApplier::apply_texture(const Image& object_image, const Image& texture_image) const {
    require_decodable(object_image, "object image");
    require_decodable(texture_image, "texture image");
    Image out = object_image;
    for (std::uint32_t y = 0; y < out.height; ++y) {
        for (std::uint32_t x = 0; x < out.width; ++x) {
            auto* o = out.at(x, y);
            if (o[0] == 255 && o[1] == 255 && o[2] == 255) continue;  // background
            const auto* t = texture_image.at(x % texture_image.width, y % texture_image.height);
            for (int c = 0; c < 3; ++c) o[c] = static_cast<std::uint8_t>((o[c] + t[c]) / 2);
        }
    }
    return out;
}

std::vector<Image> MockVideoInterpolator::interpolate_video(const Image& a, const Image& b_in) const {
    require_decodable(a, "interpolation start frame");
    require_decodable(b_in, "interpolation end frame");
    const Image b = resize_nearest(b_in, a.width, a.height);
    const std::uint64_t key =
        hash_combine(cfg_.seed ^ kVideoSalt, hash_combine(content_hash(a), content_hash(b)));

    std::vector<Image> frames;
    frames.reserve(kMockVideoFrames);
    for (int t = 0; t < kMockVideoFrames; ++t) {
        const double alpha = static_cast<double>(t) / (kMockVideoFrames - 1);
        const bool endpoint = t == 0 || t == kMockVideoFrames - 1;
        const double amplitude = endpoint ? 0.0 : kMockFramePerturbation * std::sin(M_PI * alpha);
        SplitMix64 rng(hash_combine(key, static_cast<std::uint64_t>(t)));
        const NoiseLattice field(rng, a.width, 32);

        Image f(a.width, a.height);
        for (std::uint32_t y = 0; y < a.height; ++y) {
            for (std::uint32_t x = 0; x < a.width; ++x) {
                const double shift = amplitude * field(x, y);
                const auto* pa = a.at(x, y);
                const auto* pb = b.at(x, y);
                auto* q = f.at(x, y);
                for (int c = 0; c < 3; ++c) {
                    q[c] = to_byte((1.0 - alpha) * pa[c] + alpha * pb[c] + shift);
                }
            }
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::string MockFrameAnalyzer::analyze_frame(const Image& frame) const {
    require_decodable(frame, "frame");
    return mimetic_from_key(hash_combine(cfg_.seed ^ kAnalyzerSalt, content_hash(frame)),
                            cfg_.syllables);
}

std::string MockConceptDescriber::describe_concept(const std::string& surface) const {
    require_text(surface, "surface");
    const std::uint64_t key = hash_combine(cfg_.seed ^ kDescriberSalt, fnv1a64(surface));
    const auto q = qualities(mix64(key));
    return "\"" + surface + "\" suggests a " + q[0] + ", " + q[1] + " material like " +
           pick(key, kMaterials) + ", with a " + pick(key >> 17, kRhythms) + " rhythm and a " +
           q[2] + " finish";
}

std::vector<float> MockTextEmbedder::embed_text(const std::string& text) const {
    require_text(text, "text");
    return seeded_unit_vector(hash_combine(cfg_.seed ^ kTextEmbedSalt, fnv1a64(text)), cfg_.text_dim);
}

std::vector<float> MockImageEmbedder::embed_image(const Image& image) const {
    require_decodable(image, "image to embed");
    return seeded_unit_vector(hash_combine(cfg_.seed ^ kImageEmbedSalt, content_hash(image)),
                              cfg_.image_dim);
}

ProviderSet make_mock_providers(const MockSeedConfig& cfg) {
    ProviderSet p;
    p.prompt_stager = std::make_shared<MockPromptStager>(cfg);
    p.texture_generator = std::make_shared<MockTextureGenerator>(cfg);
    p.texture_applier = std::make_shared<MockTextureApplier>(cfg);
    p.video_interpolator = std::make_shared<MockVideoInterpolator>(cfg);
    p.frame_analyzer = std::make_shared<MockFrameAnalyzer>(cfg);
    p.concept_describer = std::make_shared<MockConceptDescriber>(cfg);
    p.text_embedder = std::make_shared<MockTextEmbedder>(cfg);
    p.image_embedder = std::make_shared<MockImageEmbedder>(cfg);
    return p;
}

std::string to_string(TargetObject object) {
    return object == TargetObject::vase ? "vase" : "headphones";
}

TargetObject target_object_from_string(const std::string& name) {
    if (name == "vase") return TargetObject::vase;
    if (name == "headphones") return TargetObject::headphones;
    fail(ErrorKind::not_found, "unknown object '" + name + "'");
}

Image mock_object_image(TargetObject object, std::uint32_t size) {
    Image img(size, size);
    std::fill(img.rgb.begin(), img.rgb.end(), std::uint8_t{255});
    const double s = size;
    auto shade = [&](std::uint32_t x, std::uint32_t y, double cx, double half) {
        // Lighter toward the upper-left, never pure white.
        const double u = std::clamp((x - cx) / std::max(half, 1.0), -1.0, 1.0);
        const double v = 150.0 + 60.0 * (1.0 - std::abs(u)) - 30.0 * (static_cast<double>(y) / s);
        auto* p = img.at(x, y);
        p[0] = p[1] = p[2] = to_byte(std::min(v, 230.0));
    };
    for (std::uint32_t y = 0; y < size; ++y) {
        const double fy = (y + 0.5) / s;
        for (std::uint32_t x = 0; x < size; ++x) {
            const double fx = (x + 0.5) / s;
            bool inside = false;
            double cx = 0.5 * s, half = 0.25 * s;
            if (object == TargetObject::vase) {
                // Neck, shoulder bulge and foot of a turned vase.
                if (fy > 0.12 && fy < 0.92) {
                    const double t = (fy - 0.12) / 0.8;
                    const double r = 0.09 + 0.22 * std::sin(M_PI * std::pow(t, 0.8)) *
                                                (t > 0.15 ? 1.0 : t / 0.15);
                    inside = std::abs(fx - 0.5) < r;
                    half = r * s;
                }
            } else {
                // Headband arc plus two ear cups.
                const double dx = fx - 0.5, dy = fy - 0.55;
                const double rr = std::sqrt(dx * dx + dy * dy);
                const bool band = fy < 0.55 && rr > 0.30 && rr < 0.36;
                const bool left = std::pow((fx - 0.2) / 0.09, 2) + std::pow((fy - 0.62) / 0.15, 2) < 1.0;
                const bool right = std::pow((fx - 0.8) / 0.09, 2) + std::pow((fy - 0.62) / 0.15, 2) < 1.0;
                inside = band || left || right;
                cx = (left ? 0.2 : right ? 0.8 : 0.5) * s;
                half = (left || right ? 0.09 : 0.36) * s;
            }
            if (inside) shade(x, y, cx, half);
        }
    }
    return img;
}

}  // namespace compass
