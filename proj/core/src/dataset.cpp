#include "cfsmote/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace cfsmote {

std::string_view to_string(ClassLabel label) {
    return label == ClassLabel::Majority ? "majority" : "minority";
}

std::string_view to_string(BoundaryMode mode) {
    return mode == BoundaryMode::Global ? "global" : "seasonal";
}

std::optional<ClassLabel> parse_label(std::string_view text) {
    if (text == "majority") return ClassLabel::Majority;
    if (text == "minority") return ClassLabel::Minority;
    return std::nullopt;
}

std::optional<BoundaryMode> parse_mode(std::string_view text) {
    if (text == "global") return BoundaryMode::Global;
    if (text == "seasonal") return BoundaryMode::Seasonal;
    return std::nullopt;
}

void FeatureSchema::validate() const {
    std::unordered_set<std::string_view> seen;
    for (const auto& name : feature_names) {
        if (name.empty()) throw DataError("schema: empty feature name");
        if (!seen.insert(name).second) throw DataError("schema: duplicate feature name '" + name + "'");
    }
    if (climate_feature_indices.empty()) throw DataError("schema: climate_feature_indices must be non-empty");
    for (std::size_t idx : climate_feature_indices) {
        if (idx >= feature_names.size()) throw DataError("schema: climate feature index out of range");
    }
    if (seasonal_index && *seasonal_index >= feature_names.size()) {
        throw DataError("schema: seasonal index out of range");
    }
    if (target_name.empty()) throw DataError("schema: empty target name");
}

Dataset::Dataset(FeatureSchema schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
    schema_.validate();
    std::unordered_set<std::string_view> ids;
    ids.reserve(instances_.size());
    for (const Instance& inst : instances_) {
        if (inst.features.size() != schema_.feature_count()) {
            throw DataError("instance '" + inst.id + "': feature count " + std::to_string(inst.features.size()) +
                            " does not match schema (" + std::to_string(schema_.feature_count()) + ")");
        }
        for (double v : inst.features) {
            if (!std::isfinite(v)) throw DataError("instance '" + inst.id + "': non-finite feature value");
        }
        if (!std::isfinite(inst.target)) throw DataError("instance '" + inst.id + "': non-finite target");
        if (!ids.insert(inst.id).second) throw DataError("duplicate instance id '" + inst.id + "'");
    }
}

bool Dataset::fully_labeled() const {
    return std::all_of(instances_.begin(), instances_.end(),
                       [](const Instance& inst) { return inst.label.has_value(); });
}

std::vector<std::size_t> Dataset::indices_with(ClassLabel label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (instances_[i].label == label) out.push_back(i);
    }
    return out;
}

ClassBoundary::ClassBoundary(BoundaryMode mode, double multiplier, StatsMap stats)
    : mode_(mode), multiplier_(multiplier), stats_(std::move(stats)) {
    if (multiplier_ < 0.0) throw DataError("boundary: multiplier must be >= 0");
    for (const auto& [key, ms] : stats_) {
        if (ms.std < 0.0) throw DataError("boundary: negative std");
    }
}

const MeanStd& ClassBoundary::stat_for(std::size_t feature, int season) const {
    auto it = stats_.find({feature, season});
    if (it == stats_.end()) {
        throw DataError("boundary: no stats for feature " + std::to_string(feature) + ", season " +
                        std::to_string(season));
    }
    return it->second;
}

int ClassBoundary::season_key(const FeatureSchema& schema, const Instance& inst) const {
    if (mode_ == BoundaryMode::Global) return 0;
    if (!schema.seasonal_index) throw DataError("boundary: seasonal mode requires a seasonal feature");
    return static_cast<int>(std::lround(inst.features[*schema.seasonal_index]));
}

bool ClassBoundary::is_minority(const FeatureSchema& schema, const Instance& inst) const {
    const int season = season_key(schema, inst);
    for (std::size_t f : schema.climate_feature_indices) {
        const MeanStd& ms = stat_for(f, season);
        if (std::abs(inst.features[f] - ms.mean) > multiplier_ * ms.std) return true;
    }
    return false;
}

ClassBoundary compute_boundary(const Dataset& data, BoundaryMode mode, double multiplier) {
    if (data.empty()) throw DataError("compute_boundary: empty dataset");
    const FeatureSchema& schema = data.schema();
    if (mode == BoundaryMode::Seasonal && !schema.seasonal_index) {
        throw DataError("compute_boundary: seasonal mode requires a seasonal feature in the schema");
    }

    // population mean/std per (climate feature, season bucket)
    struct Acc {
        double sum = 0.0;
        double sumsq = 0.0;
        std::size_t n = 0;
    };
    std::map<std::pair<std::size_t, int>, Acc> acc;
    for (const Instance& inst : data.instances()) {
        const int season =
            mode == BoundaryMode::Global ? 0 : static_cast<int>(std::lround(inst.features[*schema.seasonal_index]));
        for (std::size_t f : schema.climate_feature_indices) {
            Acc& a = acc[{f, season}];
            const double v = inst.features[f];
            a.sum += v;
            a.sumsq += v * v;
            a.n += 1;
        }
    }

    ClassBoundary::StatsMap stats;
    for (const auto& [key, a] : acc) {
        const double mean = a.sum / static_cast<double>(a.n);
        const double var = std::max(0.0, a.sumsq / static_cast<double>(a.n) - mean * mean);
        stats[key] = MeanStd{mean, std::sqrt(var)};
    }
    return ClassBoundary(mode, multiplier, std::move(stats));
}

Dataset label_classes(const Dataset& data, const ClassBoundary& boundary) {
    const FeatureSchema& schema = data.schema();
    if (boundary.mode() == BoundaryMode::Seasonal && !schema.seasonal_index) {
        throw DataError("label_classes: seasonal boundary but schema has no seasonal feature");
    }
    for (std::size_t f : schema.climate_feature_indices) {
        // surfaces schema mismatches early: global boundaries must know every climate feature
        if (boundary.mode() == BoundaryMode::Global) boundary.stat_for(f, 0);
    }

    std::vector<Instance> labeled = data.instances();
    for (Instance& inst : labeled) {
        inst.label = boundary.is_minority(schema, inst) ? ClassLabel::Minority : ClassLabel::Majority;
    }
    return Dataset(schema, std::move(labeled));
}

ClassStats class_stats(const Dataset& data) {
    ClassStats out;
    for (const Instance& inst : data.instances()) {
        if (!inst.label) throw DataError("class_stats: instance '" + inst.id + "' is unlabeled");
        if (*inst.label == ClassLabel::Majority) {
            ++out.majority_count;
        } else {
            ++out.minority_count;
        }
    }
    out.imbalance_ratio = out.minority_count == 0
                              ? std::numeric_limits<double>::infinity()
                              : static_cast<double>(out.majority_count) / static_cast<double>(out.minority_count);
    return out;
}

}  // namespace cfsmote
