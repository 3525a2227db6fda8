#include "newsim/embedding/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsim/errors.hpp"

namespace newsim::embedding {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DimensionError("embedding vector must have dim >= 1");
    for (double v : values_)
        if (!std::isfinite(v)) throw RangeError("embedding vector has a non-finite value");
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<EmbeddingVector> rows) {
    for (auto& r : rows) add_row(std::move(r));
}

void EmbeddingMatrix::add_row(EmbeddingVector row) {
    if (!rows_.empty() && row.dim() != dim())
        throw DimensionError("matrix row has dim " + std::to_string(row.dim()) + ", expected " +
                             std::to_string(dim()));
    rows_.push_back(std::move(row));
}

EmbeddingVector mean_pool(const EmbeddingMatrix& m) {
    if (m.rows() == 0) throw ArgumentError("mean_pool of an empty matrix");
    const std::size_t k = m.rows();
    const std::size_t d = m.dim();
    std::vector<double> out(d);
    std::vector<double> column(k);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < k; ++i) column[i] = m.row(i)[j];
        // Summing in sorted order makes the result independent of row order.
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (double v : column) sum += v;
        out[j] = std::clamp(sum / static_cast<double>(k), column.front(), column.back());
    }
    return EmbeddingVector(std::move(out));
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionError("dot of dims " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const EmbeddingVector& v) { return std::sqrt(dot(v, v)); }

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    const double ab = dot(a, b);
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw ZeroVectorError("cosine similarity with a zero vector");
    return std::clamp(ab / (na * nb), -1.0, 1.0);
}

double baseline_score(const EmbeddingVector& a, const EmbeddingVector& b) {
    return std::max(0.0, cosine_similarity(a, b));
}

EmbeddingVector concat(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionError("concat of dims " + std::to_string(a.dim()) + " and " +
                             std::to_string(b.dim()));
    std::vector<double> out;
    out.reserve(a.dim() + b.dim());
    out.insert(out.end(), a.data().begin(), a.data().end());
    out.insert(out.end(), b.data().begin(), b.data().end());
    return EmbeddingVector(std::move(out));
}

} // namespace newsim::embedding
