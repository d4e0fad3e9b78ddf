#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfsmote/dataset.hpp"

namespace cfsmote::synth {

struct WeeklyStat {
    double mean = 0.0;
    double std = 1.0;
};

// Week-indexed climate baseline plus the growth curve g(week). All vectors
// have one entry per week of the year.
struct SeasonalProfile {
    std::vector<WeeklyStat> temperature;
    std::vector<WeeklyStat> rainfall;
    std::vector<WeeklyStat> solar;
    std::vector<double> growth;

    std::size_t weeks() const { return growth.size(); }
    void validate() const;
};

// Irish-flavored defaults: mild winters, July temperature/solar peak, wetter
// winters, growth peaking near midsummer.
SeasonalProfile default_profile(std::size_t weeks = 52);

struct OutlierRegime {
    double deviation_multiplier = 3.2;  // outlier weather lands at least this many sigma out
    double collapse_factor = 0.3;       // growth multiplier for outlier rows
};

struct SliceSpec {
    std::string name;
    int week_begin = 1;
    int week_end = 1;  // inclusive

    bool contains(int week) const { return week >= week_begin && week <= week_end; }
};

// cold spring, hot summer, cold autumn
std::vector<SliceSpec> default_disrupted_weeks();

struct SynthConfig {
    std::size_t majority_count = 800;
    std::size_t minority_count = 100;
    SeasonalProfile profile = default_profile();
    OutlierRegime regime;
    double noise_std = 4.0;
    std::uint64_t seed = 42;
    std::vector<SliceSpec> disrupted = default_disrupted_weeks();
    std::size_t test_rows_per_slice = 120;
    double test_outlier_fraction = 0.65;

    void validate() const;
};

// week, rainfall, temperature, solar_radiation -> growth
FeatureSchema synth_schema();

// Labeled training set: majority rows within the seasonal band, minority rows
// in the disrupted weeks with at least one climate feature planted beyond the
// regime multiplier and collapsed growth.
Dataset generate(const SynthConfig& config);

struct TrainTest {
    Dataset train;
    Dataset test;  // disjoint rows concentrated in the disrupted-week slices
};
TrainTest generate_split(const SynthConfig& config);

// The class-defining boundary from the generator's own profile.
ClassBoundary true_boundary(const SynthConfig& config, double multiplier = 2.0);

// The 12 (majority, minority) grid sizes, scaled.
std::vector<std::pair<std::size_t, std::size_t>> table1_grid(double scale = 0.1);

std::vector<SynthConfig> grid_configs(const SynthConfig& base,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& grid);
std::vector<Dataset> make_ir_grid(const SynthConfig& base,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& grid);

nlohmann::ordered_json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const nlohmann::ordered_json& j);

}  // namespace cfsmote::synth
