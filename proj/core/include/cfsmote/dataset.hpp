#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfsmote/errors.hpp"

namespace cfsmote {

enum class ClassLabel { Majority, Minority };
enum class BoundaryMode { Global, Seasonal };

std::string_view to_string(ClassLabel label);
std::string_view to_string(BoundaryMode mode);
std::optional<ClassLabel> parse_label(std::string_view text);
std::optional<BoundaryMode> parse_mode(std::string_view text);

// Column layout of a tabular dataset. Climate features drive the outlier
// boundary; the seasonal feature (week-of-year, 1-53) buckets seasonal stats.
struct FeatureSchema {
    std::vector<std::string> feature_names;
    std::vector<std::size_t> climate_feature_indices;
    std::optional<std::size_t> seasonal_index;
    std::string target_name = "growth";

    std::size_t feature_count() const { return feature_names.size(); }
    void validate() const;  // throws DataError
    bool operator==(const FeatureSchema&) const = default;
};

// One farm-day/week record.
struct Instance {
    std::string id;
    std::vector<double> features;
    double target = 0.0;
    std::optional<ClassLabel> label;
};

class Dataset {
public:
    Dataset() = default;
    Dataset(FeatureSchema schema, std::vector<Instance> instances);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<Instance>& instances() const { return instances_; }
    std::size_t size() const { return instances_.size(); }
    bool empty() const { return instances_.empty(); }

    bool fully_labeled() const;
    std::vector<std::size_t> indices_with(ClassLabel label) const;

private:
    FeatureSchema schema_;
    std::vector<Instance> instances_;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

// Season-bucketed mean/std per climate feature plus a sigma multiplier.
// Global mode stores everything under season key 0.
class ClassBoundary {
public:
    using StatsMap = std::map<std::pair<std::size_t, int>, MeanStd>;

    ClassBoundary() = default;
    ClassBoundary(BoundaryMode mode, double multiplier, StatsMap stats);

    BoundaryMode mode() const { return mode_; }
    double multiplier() const { return multiplier_; }
    const StatsMap& stats() const { return stats_; }

    // throws DataError when the (feature, season) bucket was never fitted
    const MeanStd& stat_for(std::size_t feature, int season) const;

    int season_key(const FeatureSchema& schema, const Instance& inst) const;

    // MINORITY iff any climate feature deviates strictly beyond multiplier*std
    bool is_minority(const FeatureSchema& schema, const Instance& inst) const;

private:
    BoundaryMode mode_ = BoundaryMode::Global;
    double multiplier_ = 2.0;
    StatsMap stats_;
};

ClassBoundary compute_boundary(const Dataset& data, BoundaryMode mode, double multiplier = 2.0);

// Returns a relabeled copy; the input is untouched.
Dataset label_classes(const Dataset& data, const ClassBoundary& boundary);

struct ClassStats {
    std::size_t majority_count = 0;
    std::size_t minority_count = 0;
    double imbalance_ratio = 0.0;  // +inf when minority_count == 0

    bool degenerate() const { return minority_count == 0; }
};

ClassStats class_stats(const Dataset& data);

}  // namespace cfsmote
