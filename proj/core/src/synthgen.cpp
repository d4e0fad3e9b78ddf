#include "cfsmote/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cfsmote/rng.hpp"

namespace cfsmote::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

// weather response of growth, in normalized anomaly units
double weather_response(double z_temp, double z_rain, double z_solar) {
    const double h = 1.0 + 0.05 * z_temp + 0.03 * z_rain + 0.04 * z_solar;
    return std::clamp(h, 0.4, 1.6);
}

std::string padded_id(const char* prefix, std::size_t n) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, n);
    return buf;
}

// |z| <= 1.6 keeps majority rows comfortably inside the 2-sigma band even
// after the boundary is refitted on the generated sample
constexpr double kMajorityTruncation = 1.6;

double truncated_normal(rng::Stream& stream, double limit) {
    double z = stream.normal();
    while (std::abs(z) > limit) z = stream.normal();
    return z;
}

struct RegimeRule {
    double hot_threshold = 0.0;

    static RegimeRule from_profile(const SeasonalProfile& profile) {
        double lo = profile.temperature.front().mean;
        double hi = lo;
        for (const WeeklyStat& ws : profile.temperature) {
            lo = std::min(lo, ws.mean);
            hi = std::max(hi, ws.mean);
        }
        return RegimeRule{lo + (hi - lo) * 2.0 / 3.0};
    }

    bool hot(const SeasonalProfile& profile, int week) const {
        return profile.temperature[static_cast<std::size_t>(week - 1)].mean >= hot_threshold;
    }
};

struct Row {
    int week;
    double rainfall;
    double temperature;
    double solar;
    double growth;
    ClassLabel label;
};

Row draw_majority_row(const SynthConfig& config, rng::Stream& stream, int week) {
    const auto w = static_cast<std::size_t>(week - 1);
    const SeasonalProfile& p = config.profile;
    const double z_t = truncated_normal(stream, kMajorityTruncation);
    const double z_r = truncated_normal(stream, kMajorityTruncation);
    const double z_s = truncated_normal(stream, kMajorityTruncation);
    Row row;
    row.week = week;
    row.temperature = p.temperature[w].mean + z_t * p.temperature[w].std;
    row.rainfall = std::max(0.0, p.rainfall[w].mean + z_r * p.rainfall[w].std);
    row.solar = std::max(0.0, p.solar[w].mean + z_s * p.solar[w].std);
    row.growth = std::max(0.0, p.growth[w] * weather_response(z_t, z_r, z_s) + config.noise_std * stream.normal());
    row.label = ClassLabel::Majority;
    return row;
}

// Hot/dry regime plants high temperature and low rainfall beyond the regime
// multiplier; the cold regime plants low temperature. Growth collapses in
// both (burn-off or cold suppression).
Row draw_minority_row(const SynthConfig& config, const RegimeRule& rule, rng::Stream& stream, int week) {
    const auto w = static_cast<std::size_t>(week - 1);
    const SeasonalProfile& p = config.profile;
    const double mult = config.regime.deviation_multiplier;
    Row row;
    row.week = week;
    double z_t = 0.0;
    double z_r = 0.0;
    double z_s = 0.0;
    if (rule.hot(p, week)) {
        z_t = stream.range(mult + 0.2, mult + 1.3);
        z_r = -stream.range(mult + 0.2, mult + 1.3);
        z_s = truncated_normal(stream, kMajorityTruncation);
    } else {
        z_t = -stream.range(mult + 0.2, mult + 1.3);
        z_r = truncated_normal(stream, kMajorityTruncation);
        z_s = truncated_normal(stream, kMajorityTruncation);
    }
    row.temperature = p.temperature[w].mean + z_t * p.temperature[w].std;
    row.rainfall = std::max(0.0, p.rainfall[w].mean + z_r * p.rainfall[w].std);
    row.solar = std::max(0.0, p.solar[w].mean + z_s * p.solar[w].std);
    row.growth = std::max(0.0, p.growth[w] * weather_response(z_t, z_r, z_s) * config.regime.collapse_factor +
                                   config.noise_std * stream.normal());
    row.label = ClassLabel::Minority;
    return row;
}

Instance to_instance(const Row& row, std::string id) {
    Instance inst;
    inst.id = std::move(id);
    inst.features = {static_cast<double>(row.week), row.rainfall, row.temperature, row.solar};
    inst.target = row.growth;
    inst.label = row.label;
    return inst;
}

}  // namespace

void SeasonalProfile::validate() const {
    const std::size_t n = growth.size();
    if (n == 0) throw DataError("synth profile: empty growth curve");
    if (temperature.size() != n || rainfall.size() != n || solar.size() != n) {
        throw DataError("synth profile: per-week series lengths differ");
    }
    for (const auto* series : {&temperature, &rainfall, &solar}) {
        for (const WeeklyStat& ws : *series) {
            if (ws.std <= 0.0) throw DataError("synth profile: weekly std must be positive");
        }
    }
}

void SynthConfig::validate() const {
    profile.validate();
    if (majority_count == 0 && minority_count == 0) throw DataError("synth config: both class counts are zero");
    if (regime.deviation_multiplier <= 2.0) throw DataError("synth config: deviation multiplier must exceed 2");
    if (regime.collapse_factor < 0.0 || regime.collapse_factor >= 1.0) {
        throw DataError("synth config: collapse factor must be in [0, 1)");
    }
    if (noise_std < 0.0) throw DataError("synth config: negative noise std");
    if (disrupted.empty()) throw DataError("synth config: no disrupted-week slices");
    const int weeks = static_cast<int>(profile.weeks());
    for (const SliceSpec& slice : disrupted) {
        if (slice.name.empty()) throw DataError("synth config: unnamed slice");
        if (slice.week_begin < 1 || slice.week_end > weeks || slice.week_begin > slice.week_end) {
            throw DataError("synth config: slice '" + slice.name + "' has invalid week range");
        }
    }
    if (test_outlier_fraction < 0.0 || test_outlier_fraction > 1.0) {
        throw DataError("synth config: test outlier fraction must be in [0, 1]");
    }
}

SeasonalProfile default_profile(std::size_t weeks) {
    SeasonalProfile p;
    p.temperature.resize(weeks);
    p.rainfall.resize(weeks);
    p.solar.resize(weeks);
    p.growth.resize(weeks);
    for (std::size_t i = 0; i < weeks; ++i) {
        const double w = static_cast<double>(i + 1);
        const double phase = std::cos(2.0 * kPi * (w - 3.0) / static_cast<double>(weeks));
        p.temperature[i] = WeeklyStat{12.5 - 7.5 * phase, 2.5};
        p.rainfall[i] = WeeklyStat{9.0 + 3.0 * phase, 2.5};
        p.solar[i] = WeeklyStat{15.0 - 10.0 * phase, 3.0};
        const double s = std::max(0.0, std::sin(kPi * (w - 9.0) / 35.0));
        p.growth[i] = 12.0 + 58.0 * std::pow(s, 1.3);
    }
    return p;
}

std::vector<SliceSpec> default_disrupted_weeks() {
    return {{"march", 10, 13}, {"july", 27, 31}, {"october", 40, 44}};
}

FeatureSchema synth_schema() {
    FeatureSchema schema;
    schema.feature_names = {"week", "rainfall", "temperature", "solar_radiation"};
    schema.climate_feature_indices = {1, 2, 3};
    schema.seasonal_index = 0;
    schema.target_name = "growth";
    return schema;
}

Dataset generate(const SynthConfig& config) {
    config.validate();
    const RegimeRule rule = RegimeRule::from_profile(config.profile);
    const int weeks = static_cast<int>(config.profile.weeks());

    std::vector<Instance> instances;
    instances.reserve(config.majority_count + config.minority_count);

    rng::Stream maj_stream(rng::derive(config.seed, "majority"));
    for (std::size_t i = 0; i < config.majority_count; ++i) {
        const int week = 1 + static_cast<int>(maj_stream.index(static_cast<std::size_t>(weeks)));
        instances.push_back(to_instance(draw_majority_row(config, maj_stream, week), padded_id("t", i)));
    }

    rng::Stream min_stream(rng::derive(config.seed, "minority"));
    for (std::size_t i = 0; i < config.minority_count; ++i) {
        const SliceSpec& slice = config.disrupted[min_stream.index(config.disrupted.size())];
        const int span = slice.week_end - slice.week_begin + 1;
        const int week = slice.week_begin + static_cast<int>(min_stream.index(static_cast<std::size_t>(span)));
        instances.push_back(
            to_instance(draw_minority_row(config, rule, min_stream, week), padded_id("t", config.majority_count + i)));
    }

    return Dataset(synth_schema(), std::move(instances));
}

TrainTest generate_split(const SynthConfig& config) {
    TrainTest out;
    out.train = generate(config);

    config.validate();
    const RegimeRule rule = RegimeRule::from_profile(config.profile);
    std::vector<Instance> rows;
    rows.reserve(config.disrupted.size() * config.test_rows_per_slice);
    rng::Stream stream(rng::derive(config.seed, "test"));
    std::size_t counter = 0;
    for (const SliceSpec& slice : config.disrupted) {
        const int span = slice.week_end - slice.week_begin + 1;
        for (std::size_t i = 0; i < config.test_rows_per_slice; ++i) {
            const bool outlier = stream.unit() < config.test_outlier_fraction;
            const int week = slice.week_begin + static_cast<int>(stream.index(static_cast<std::size_t>(span)));
            const Row row = outlier ? draw_minority_row(config, rule, stream, week)
                                    : draw_majority_row(config, stream, week);
            rows.push_back(to_instance(row, padded_id("e", counter++)));
        }
    }
    out.test = Dataset(synth_schema(), std::move(rows));
    return out;
}

ClassBoundary true_boundary(const SynthConfig& config, double multiplier) {
    config.profile.validate();
    const FeatureSchema schema = synth_schema();
    ClassBoundary::StatsMap stats;
    for (std::size_t w = 0; w < config.profile.weeks(); ++w) {
        const int week = static_cast<int>(w + 1);
        stats[{1, week}] = MeanStd{config.profile.rainfall[w].mean, config.profile.rainfall[w].std};
        stats[{2, week}] = MeanStd{config.profile.temperature[w].mean, config.profile.temperature[w].std};
        stats[{3, week}] = MeanStd{config.profile.solar[w].mean, config.profile.solar[w].std};
    }
    return ClassBoundary(BoundaryMode::Seasonal, multiplier, std::move(stats));
}

std::vector<std::pair<std::size_t, std::size_t>> table1_grid(double scale) {
    static constexpr std::pair<std::size_t, std::size_t> kTable1[12] = {
        {6000, 3810},  {8000, 3810},  {13000, 3810}, {15000, 3810}, {32719, 3810}, {32719, 3000},
        {32719, 1800}, {32719, 1000}, {32719, 600},  {32719, 400},  {32719, 275},  {32719, 200},
    };
    if (scale <= 0.0) throw DataError("table1_grid: scale must be positive");
    std::vector<std::pair<std::size_t, std::size_t>> grid;
    grid.reserve(12);
    for (const auto& [maj, min] : kTable1) {
        grid.emplace_back(static_cast<std::size_t>(std::llround(static_cast<double>(maj) * scale)),
                          static_cast<std::size_t>(std::llround(static_cast<double>(min) * scale)));
    }
    return grid;
}

std::vector<SynthConfig> grid_configs(const SynthConfig& base,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& grid) {
    if (grid.empty()) throw DataError("grid_configs: empty grid");
    std::vector<SynthConfig> configs;
    configs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SynthConfig cfg = base;
        cfg.majority_count = grid[i].first;
        cfg.minority_count = grid[i].second;
        cfg.seed = rng::derive(base.seed, "grid", i);
        configs.push_back(std::move(cfg));
    }
    return configs;
}

std::vector<Dataset> make_ir_grid(const SynthConfig& base,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& grid) {
    std::vector<Dataset> datasets;
    datasets.reserve(grid.size());
    for (const SynthConfig& cfg : grid_configs(base, grid)) datasets.push_back(generate(cfg));
    return datasets;
}

namespace {

nlohmann::ordered_json stats_to_json(const std::vector<WeeklyStat>& series) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const WeeklyStat& ws : series) arr.push_back({{"mean", ws.mean}, {"std", ws.std}});
    return arr;
}

std::vector<WeeklyStat> stats_from_json(const nlohmann::ordered_json& arr) {
    std::vector<WeeklyStat> out;
    out.reserve(arr.size());
    for (const auto& item : arr) out.push_back(WeeklyStat{item.at("mean").get<double>(), item.at("std").get<double>()});
    return out;
}

}  // namespace

nlohmann::ordered_json synth_config_to_json(const SynthConfig& config) {
    nlohmann::ordered_json j;
    j["majority_count"] = config.majority_count;
    j["minority_count"] = config.minority_count;
    j["seed"] = config.seed;
    j["noise_std"] = config.noise_std;
    j["outlier_regime"] = {{"deviation_multiplier", config.regime.deviation_multiplier},
                           {"collapse_factor", config.regime.collapse_factor}};
    j["seasonal_profile"] = {{"temperature", stats_to_json(config.profile.temperature)},
                             {"rainfall", stats_to_json(config.profile.rainfall)},
                             {"solar", stats_to_json(config.profile.solar)},
                             {"growth", config.profile.growth}};
    nlohmann::ordered_json slices = nlohmann::ordered_json::array();
    for (const SliceSpec& s : config.disrupted) {
        slices.push_back({{"name", s.name}, {"week_begin", s.week_begin}, {"week_end", s.week_end}});
    }
    j["disrupted_weeks"] = std::move(slices);
    j["test_rows_per_slice"] = config.test_rows_per_slice;
    j["test_outlier_fraction"] = config.test_outlier_fraction;
    return j;
}

SynthConfig synth_config_from_json(const nlohmann::ordered_json& j) {
    SynthConfig config;
    config.majority_count = j.at("majority_count").get<std::size_t>();
    config.minority_count = j.at("minority_count").get<std::size_t>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("noise_std")) config.noise_std = j.at("noise_std").get<double>();
    if (j.contains("outlier_regime")) {
        const auto& r = j.at("outlier_regime");
        if (r.contains("deviation_multiplier")) config.regime.deviation_multiplier = r.at("deviation_multiplier").get<double>();
        if (r.contains("collapse_factor")) config.regime.collapse_factor = r.at("collapse_factor").get<double>();
    }
    if (j.contains("seasonal_profile")) {
        const auto& p = j.at("seasonal_profile");
        config.profile.temperature = stats_from_json(p.at("temperature"));
        config.profile.rainfall = stats_from_json(p.at("rainfall"));
        config.profile.solar = stats_from_json(p.at("solar"));
        config.profile.growth = p.at("growth").get<std::vector<double>>();
    }
    if (j.contains("disrupted_weeks")) {
        config.disrupted.clear();
        for (const auto& s : j.at("disrupted_weeks")) {
            config.disrupted.push_back(SliceSpec{s.at("name").get<std::string>(), s.at("week_begin").get<int>(),
                                                 s.at("week_end").get<int>()});
        }
    }
    if (j.contains("test_rows_per_slice")) config.test_rows_per_slice = j.at("test_rows_per_slice").get<std::size_t>();
    if (j.contains("test_outlier_fraction")) config.test_outlier_fraction = j.at("test_outlier_fraction").get<double>();
    config.validate();
    return config;
}

}  // namespace cfsmote::synth
