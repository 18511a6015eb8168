#pragma once

#include <cstddef>
#include <string>

#include "compass/atlas/prompt_stages.hpp"
#include "compass/embedding/types.hpp"

namespace compass {

struct TermRecord {
    std::string term_id;
    std::string surface;  // the invented onomatopoeia, e.g. "Honyonyon"
    PromptStages stages;
    std::string text_embedding_id;
    Point2 coord;

    bool operator==(const TermRecord&) const = default;
};

struct TextureRecord {
    std::string texture_id;
    std::string term_id;  // owning term
    std::string image_path;
    std::string thumbnail_path;  // 64x64 raster
    std::string image_embedding_id;
    Point2 coord;

    bool operator==(const TextureRecord&) const = default;
};

inline constexpr const char* kDynamicPointColor = "orange";

/// A video frame re-embedded into both maps. Coordinates come from the fitted
/// models; the source dimensions record which model produced which coordinate.
struct ReplotRecord {
    std::string replot_id;
    std::string job_id;
    int frame_index = 0;
    std::string surface;      // step 1 output
    std::string description;  // step 2 output
    Point2 image_coord;
    Point2 text_coord;
    std::size_t image_source_dim = 0;
    std::size_t text_source_dim = 0;
    bool dynamic = true;
    std::string display_color = kDynamicPointColor;

    bool operator==(const ReplotRecord&) const = default;
};

struct Bounds {
    Point2 min;
    Point2 max;

    bool contains(const Point2& p) const noexcept {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    double width() const noexcept { return max.x - min.x; }
    double height() const noexcept { return max.y - min.y; }
    double diagonal() const noexcept;
    /// Scaled by (1 + fraction) about its centre.
    Bounds expanded(double fraction) const noexcept;

    bool operator==(const Bounds&) const = default;
};

/// Tight axis-aligned box; a single point gives a zero-extent box.
Bounds tight_bounds(std::span<const Point2> points);

}  // namespace compass
