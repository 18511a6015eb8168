#pragma once

#include <string>

namespace compass {

/// Staged prompt text for one invented term. `english_description` is both the
/// text embedded for the language map and the text that links the term to its
/// generated textures.
struct PromptStages {
    std::string material;
    std::string physical_qualities;
    std::string english_description;
    std::string image_prompt;

    bool complete() const noexcept {
        return !material.empty() && !physical_qualities.empty() && !english_description.empty() &&
               !image_prompt.empty();
    }
    bool operator==(const PromptStages&) const = default;
};

}  // namespace compass
