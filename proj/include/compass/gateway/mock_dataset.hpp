#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

namespace compass {

/// Shape of a generated dataset. Every term asks for three textures; the mock
/// generator's failure rule decides which terms keep only two, and candidate
/// surfaces are chosen so the totals come out exactly as requested.
struct MockDatasetOptions {
    std::size_t terms = 235;
    std::size_t textures = 676;
    std::uint64_t seed = 42;
};

struct MockDatasetSummary {
    std::filesystem::path manifest;
    std::size_t terms = 0;
    std::size_t textures = 0;
    std::size_t two_texture_terms = 0;
};

/// Writes manifest.json, terms.json, ownership.json, the two embedding files,
/// images/<texture_id>.png and thumbnails/<texture_id>.png under `out_dir`.
/// The manifest's output is atlas.json in the same directory. Output bytes
/// depend only on the options.
MockDatasetSummary generate_mock_dataset(const std::filesystem::path& out_dir,
                                         const MockDatasetOptions& options);

}  // namespace compass
