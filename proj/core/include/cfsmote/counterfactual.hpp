#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cfsmote/dataset.hpp"

namespace cfsmote {

// Gate deciding which (majority, minority) nearest-neighbor pairs count as
// native counterfactuals. A feature is a difference feature when the pair
// disagrees on it by more than its tolerance; pairs with too many difference
// features (or too large a distance) are rejected.
struct PairValidity {
    std::size_t max_difference_features = 2;
    std::vector<double> feature_tolerance;  // per feature; empty -> default_tolerances(data)
    std::optional<double> max_pair_distance;

    // 0.1 x population std of each feature
    static std::vector<double> default_tolerances(const Dataset& data);
};

// A counterfactually related (majority, minority) pair already present in the
// data: instance indices, the match/difference feature partition, and their
// distance.
struct NativePair {
    std::size_t majority_index = 0;
    std::size_t minority_index = 0;
    std::vector<std::size_t> match_features;       // sorted
    std::vector<std::size_t> difference_features;  // sorted
    double pair_distance = 0.0;
};

// For each majority instance, its nearest minority neighbor is paired and
// kept iff it passes validity. Output ordered by majority index.
std::vector<NativePair> mine_native_pairs(const Dataset& data, const PairValidity& validity);

// Majority instances that appear in no valid pair, ascending.
std::vector<std::size_t> filter_unpaired(const Dataset& data, const std::vector<NativePair>& pairs);

struct SyntheticCounterfactual {
    Instance instance;                     // labeled Minority
    std::size_t source_unpaired_index = 0;  // the unpaired majority instance the match features came from
    NativePair template_pair;
};

// Builds one synthetic minority instance per unpaired majority instance, up
// to `budget`, closest-to-a-paired-instance first. Difference features are
// copied from the template's minority instance, match features from the
// unpaired source; the target transfers from the template's minority
// instance.
std::vector<SyntheticCounterfactual> generate_cfa(const Dataset& data, const std::vector<NativePair>& pairs,
                                                  const std::vector<std::size_t>& unpaired, std::size_t budget,
                                                  const std::string& id_prefix = "cfa");

struct DiceConfig {
    std::size_t pool_size = 256;       // sampled candidates per query
    std::optional<double> grid_step;   // axis-aligned deterministic grid instead of sampling
};

// Per-feature value ranges and median-absolute-deviation scales fitted on
// training data, shared across queries.
struct DiceContext {
    std::vector<double> feature_min;
    std::vector<double> feature_max;
    std::vector<double> feature_mad;  // zero MAD falls back to 1

    static DiceContext fit(const Dataset& data);
};

// Perturbation-based counterfactual generation: sample candidates around the
// query within training ranges, keep the ones the boundary labels minority,
// rank by MAD-scaled L1 proximity, then pick n_cf candidates greedily
// maximizing diversity. Targets transfer from each candidate's nearest true
// minority instance. Returns empty when nothing crosses the boundary.
std::vector<Instance> generate_dice_lite(const Dataset& data, const ClassBoundary& boundary, const DiceContext& ctx,
                                         std::size_t query_index, std::size_t n_cf, const DiceConfig& config,
                                         std::uint64_t seed, const std::string& id_prefix = "dice");

std::vector<Instance> generate_dice_lite(const Dataset& data, const ClassBoundary& boundary, std::size_t query_index,
                                         std::size_t n_cf, const DiceConfig& config, std::uint64_t seed);

// CSV with provenance columns: source_id, template_majority_id,
// template_minority_id, generator.
void write_counterfactuals_csv(std::ostream& out, const Dataset& data,
                               const std::vector<SyntheticCounterfactual>& syncf);

}  // namespace cfsmote
