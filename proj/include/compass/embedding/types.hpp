#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace compass {

enum class Metric { cosine, euclidean };
enum class Modality { image, text };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);
std::string to_string(Modality modality);
Modality modality_from_string(const std::string& name);

// Dimension each modality is declared with in an atlas.
constexpr std::size_t kImageEmbeddingDim = 512;
constexpr std::size_t kTextEmbeddingDim = 1536;

constexpr std::size_t declared_dim(Modality m) noexcept {
    return m == Modality::image ? kImageEmbeddingDim : kTextEmbeddingDim;
}

struct EmbeddingVector {
    std::string id;
    Modality modality = Modality::image;
    std::vector<float> values;

    // Finite, length >= 2, not all zero. Dimension checks happen where the
    // expected length is known.
    void validate() const;
};

// Row-major n x dim block of float32 vectors.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim) {}
    EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data);

    static EmbeddingMatrix from_rows(std::span<const std::vector<float>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const float> row(std::size_t i) const noexcept {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<float> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }

    const std::vector<float>& data() const noexcept { return data_; }

    bool operator==(const EmbeddingMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<float> data_;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

// n x k neighbor table; each row ascending by (distance, index), self excluded.
struct KnnGraph {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::uint32_t> indices;
    std::vector<double> distances;

    std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
        return {indices.data() + i * k, k};
    }
    std::span<const double> row_distances(std::size_t i) const noexcept {
        return {distances.data() + i * k, k};
    }

    void validate() const;
    bool operator==(const KnnGraph&) const = default;
};

// Symmetric sparse membership matrix in CSR form (columns ascending per row),
// plus the per-point calibration that produced it.
struct FuzzyGraph {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // n + 1 offsets
    std::vector<std::uint32_t> cols;
    std::vector<double> weights;
    std::vector<double> rho;
    std::vector<double> sigma;

    std::size_t nnz() const noexcept { return cols.size(); }
    // 0 when (i, j) is not stored.
    double weight(std::size_t i, std::size_t j) const noexcept;

    void validate() const;
    bool operator==(const FuzzyGraph&) const = default;
};

}  // namespace compass
