#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cfsmote/dataset.hpp"

namespace cfsmote {

// Euclidean distance; throws DataError on length mismatch or non-finite input.
double distance(std::span<const double> a, std::span<const double> b);

struct NeighborHit {
    std::size_t instance_index;  // index into the source dataset's instance vector
    double distance;
};

// Per-feature affine rescaling applied before distance computation latches
// onto the training data it was fitted on.
struct Normalization {
    enum class Kind { ZScore, MinMax };

    Kind kind = Kind::ZScore;
    std::vector<double> offset;  // per feature
    std::vector<double> scale;   // per feature; degenerate features fall back to 1

    static Normalization fit_zscore(const Dataset& data);
    static Normalization fit_minmax(const Dataset& data);

    std::vector<double> apply(std::span<const double> raw) const;
};

// Exact brute-force nearest-neighbor search. Immutable once built; queries
// are pure and freely concurrent.
class NeighborIndex {
public:
    explicit NeighborIndex(const Dataset& data, std::optional<ClassLabel> restrict_to = std::nullopt,
                           std::optional<Normalization> normalization = std::nullopt);

    std::size_t size() const { return points_.size(); }
    std::size_t dimension() const { return dim_; }

    // The k smallest-distance hits, ascending by distance, ties broken by
    // ascending instance_index. Queries are given in raw (unnormalized) space.
    std::vector<NeighborHit> knn(std::span<const double> query, std::size_t k,
                                 std::optional<std::size_t> exclude_index = std::nullopt) const;

private:
    std::vector<std::size_t> original_index_;
    std::vector<std::vector<double>> points_;  // normalized coordinates
    std::optional<Normalization> normalization_;
    std::size_t dim_ = 0;
};

// Unweighted k-NN mean-of-targets regressor with z-score feature scaling
// fitted on the training set.
class KnnRegressor {
public:
    KnnRegressor(Dataset train, std::size_t k);
    // nullopt normalization means raw feature space
    KnnRegressor(Dataset train, std::size_t k, std::optional<Normalization> normalization);

    double predict(std::span<const double> query) const;
    std::size_t k() const { return k_; }
    const std::optional<Normalization>& normalization() const { return normalization_; }

private:
    void validate() const;

    Dataset train_;
    std::size_t k_;
    std::optional<Normalization> normalization_;
    NeighborIndex index_;
};

double knn_regress(const Dataset& train, std::span<const double> query, std::size_t k);

}  // namespace cfsmote
