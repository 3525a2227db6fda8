#pragma once

#include <span>
#include <vector>

namespace newsim::embedding {

inline constexpr std::size_t kDefaultDim = 384;

// Fixed-length vector of finite reals. Construction validates both.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& data() const noexcept { return values_; }

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<double> values_;
};

// k >= 1 rows of equal dimension, one per embedded span.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    explicit EmbeddingMatrix(std::vector<EmbeddingVector> rows);

    void add_row(EmbeddingVector row);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t dim() const noexcept { return rows_.empty() ? 0 : rows_.front().dim(); }
    const EmbeddingVector& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<EmbeddingVector>& row_vectors() const noexcept { return rows_; }

    bool operator==(const EmbeddingMatrix&) const = default;

private:
    std::vector<EmbeddingVector> rows_;
};

// Coordinate-wise mean. Exactly invariant under row permutation and clamped to
// each coordinate's [min, max]. Throws ArgumentError for an empty matrix.
EmbeddingVector mean_pool(const EmbeddingMatrix& m);

double dot(const EmbeddingVector& a, const EmbeddingVector& b);
double norm(const EmbeddingVector& v);

// dot / (|a| |b|), clamped to [-1, 1]. Throws DimensionError on mismatched
// dims and ZeroVectorError if either vector is all zeros.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// max(0, cosine), on the same [0, 1] scale as normalized labels.
double baseline_score(const EmbeddingVector& a, const EmbeddingVector& b);

// a followed by b. Throws DimensionError if dims differ.
EmbeddingVector concat(const EmbeddingVector& a, const EmbeddingVector& b);

} // namespace newsim::embedding
