#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfsmote/dataset.hpp"

namespace testsupport {

// n-feature dataset where every feature is a climate feature
inline cfsmote::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                     const std::vector<double>& targets = {},
                                     const std::vector<std::optional<cfsmote::ClassLabel>>& labels = {}) {
    cfsmote::FeatureSchema schema;
    const std::size_t dim = rows.empty() ? 1 : rows.front().size();
    for (std::size_t f = 0; f < dim; ++f) schema.feature_names.push_back("f" + std::to_string(f));
    for (std::size_t f = 0; f < dim; ++f) schema.climate_feature_indices.push_back(f);
    schema.target_name = "growth";

    std::vector<cfsmote::Instance> instances;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cfsmote::Instance inst;
        inst.id = "row-" + std::to_string(i);
        inst.features = rows[i];
        inst.target = i < targets.size() ? targets[i] : 0.0;
        if (i < labels.size()) inst.label = labels[i];
        instances.push_back(std::move(inst));
    }
    return cfsmote::Dataset(std::move(schema), std::move(instances));
}

// two-class dataset: majority rows then minority rows
inline cfsmote::Dataset make_labeled(const std::vector<std::vector<double>>& majority,
                                     const std::vector<std::vector<double>>& minority,
                                     const std::vector<double>& majority_targets = {},
                                     const std::vector<double>& minority_targets = {}) {
    std::vector<std::vector<double>> rows = majority;
    rows.insert(rows.end(), minority.begin(), minority.end());
    std::vector<double> targets = majority_targets;
    targets.resize(majority.size(), 0.0);
    std::vector<double> min_t = minority_targets;
    min_t.resize(minority.size(), 0.0);
    targets.insert(targets.end(), min_t.begin(), min_t.end());
    std::vector<std::optional<cfsmote::ClassLabel>> labels(majority.size(), cfsmote::ClassLabel::Majority);
    labels.insert(labels.end(), minority.size(), cfsmote::ClassLabel::Minority);
    return make_dataset(rows, targets, labels);
}

}  // namespace testsupport
