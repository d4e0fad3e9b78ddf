#include "cfsmote/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfsmote {

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DataError("distance: length mismatch (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                        ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw DataError("distance: non-finite input");
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

Normalization Normalization::fit_zscore(const Dataset& data) {
    if (data.empty()) throw DataError("normalization: empty dataset");
    const std::size_t dim = data.schema().feature_count();
    Normalization norm;
    norm.kind = Kind::ZScore;
    norm.offset.assign(dim, 0.0);
    norm.scale.assign(dim, 1.0);
    const double n = static_cast<double>(data.size());
    for (std::size_t f = 0; f < dim; ++f) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (const Instance& inst : data.instances()) {
            sum += inst.features[f];
            sumsq += inst.features[f] * inst.features[f];
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        const double sd = std::sqrt(var);
        norm.offset[f] = mean;
        norm.scale[f] = sd > 0.0 ? sd : 1.0;
    }
    return norm;
}

Normalization Normalization::fit_minmax(const Dataset& data) {
    if (data.empty()) throw DataError("normalization: empty dataset");
    const std::size_t dim = data.schema().feature_count();
    Normalization norm;
    norm.kind = Kind::MinMax;
    norm.offset.assign(dim, 0.0);
    norm.scale.assign(dim, 1.0);
    for (std::size_t f = 0; f < dim; ++f) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const Instance& inst : data.instances()) {
            lo = std::min(lo, inst.features[f]);
            hi = std::max(hi, inst.features[f]);
        }
        norm.offset[f] = lo;
        norm.scale[f] = hi > lo ? hi - lo : 1.0;
    }
    return norm;
}

std::vector<double> Normalization::apply(std::span<const double> raw) const {
    if (raw.size() != offset.size()) throw DataError("normalization: dimension mismatch");
    std::vector<double> out(raw.size());
    for (std::size_t f = 0; f < raw.size(); ++f) out[f] = (raw[f] - offset[f]) / scale[f];
    return out;
}

NeighborIndex::NeighborIndex(const Dataset& data, std::optional<ClassLabel> restrict_to,
                             std::optional<Normalization> normalization)
    : normalization_(std::move(normalization)), dim_(data.schema().feature_count()) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Instance& inst = data.instances()[i];
        if (restrict_to && inst.label != *restrict_to) continue;
        original_index_.push_back(i);
        points_.push_back(normalization_ ? normalization_->apply(inst.features) : inst.features);
    }
}

std::vector<NeighborHit> NeighborIndex::knn(std::span<const double> query, std::size_t k,
                                            std::optional<std::size_t> exclude_index) const {
    if (k == 0) throw DataError("knn: k must be >= 1");
    const std::vector<double> q = normalization_ ? normalization_->apply(query) : std::vector<double>(query.begin(), query.end());

    std::vector<NeighborHit> hits;
    hits.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (exclude_index && original_index_[i] == *exclude_index) continue;
        hits.push_back(NeighborHit{original_index_[i], distance(q, points_[i])});
    }
    if (hits.empty()) throw DataError("knn: empty index");
    if (k > hits.size()) {
        throw DataError("knn: k=" + std::to_string(k) + " exceeds available points (" + std::to_string(hits.size()) +
                        ")");
    }

    auto cmp = [](const NeighborHit& a, const NeighborHit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.instance_index < b.instance_index;
    };
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), cmp);
    hits.resize(k);
    return hits;
}

KnnRegressor::KnnRegressor(Dataset train, std::size_t k)
    : train_(std::move(train)),
      k_(k),
      normalization_(Normalization::fit_zscore(train_)),
      index_(train_, std::nullopt, normalization_) {
    validate();
}

// nullopt normalization means raw feature space
KnnRegressor::KnnRegressor(Dataset train, std::size_t k, std::optional<Normalization> normalization)
    : train_(std::move(train)),
      k_(k),
      normalization_(std::move(normalization)),
      index_(train_, std::nullopt, normalization_) {
    validate();
}

void KnnRegressor::validate() const {
    if (k_ == 0) throw DataError("knn_regress: k must be >= 1");
    if (train_.size() < k_) {
        throw DataError("knn_regress: training set has " + std::to_string(train_.size()) + " instances, need >= " +
                        std::to_string(k_));
    }
}

double KnnRegressor::predict(std::span<const double> query) const {
    const std::vector<NeighborHit> hits = index_.knn(query, k_);
    double sum = 0.0;
    for (const NeighborHit& hit : hits) sum += train_.instances()[hit.instance_index].target;
    return sum / static_cast<double>(hits.size());
}

double knn_regress(const Dataset& train, std::span<const double> query, std::size_t k) {
    return KnnRegressor(train, k).predict(query);
}

}  // namespace cfsmote
