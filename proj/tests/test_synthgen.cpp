#include <doctest.h>

#include <cmath>
#include <map>

#include "cfsmote/synthgen.hpp"

using namespace cfsmote;
using namespace cfsmote::synth;

TEST_CASE("class counts and IR come out by construction") {
    SynthConfig config;
    config.majority_count = 800;
    config.minority_count = 100;
    const Dataset data = generate(config);
    const ClassStats stats = class_stats(data);
    CHECK(stats.majority_count == 800);
    CHECK(stats.minority_count == 100);
    CHECK(stats.imbalance_ratio == doctest::Approx(8.0));
}

TEST_CASE("generated labels agree with the profile boundary") {
    std::size_t agree = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthConfig config;
        config.majority_count = 300;
        config.minority_count = 60;
        config.seed = seed;
        const Dataset data = generate(config);
        const Dataset relabeled = label_classes(data, true_boundary(config));
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.instances()[i].label == relabeled.instances()[i].label) ++agree;
            ++total;
        }
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.95);
}

TEST_CASE("majority-only data leaks at most 5% minority under a refitted boundary") {
    std::size_t leaked = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthConfig config;
        config.majority_count = 400;
        config.minority_count = 0;
        config.seed = seed;
        const Dataset data = generate(config);
        const ClassBoundary fitted = compute_boundary(data, BoundaryMode::Seasonal, 2.0);
        const Dataset labeled = label_classes(data, fitted);
        for (const Instance& inst : labeled.instances()) {
            if (inst.label == ClassLabel::Minority) ++leaked;
            ++total;
        }
    }
    CHECK(static_cast<double>(leaked) / static_cast<double>(total) <= 0.05);
}

TEST_CASE("planted outliers grow less than normal rows in the same weeks") {
    SynthConfig config;
    config.majority_count = 2000;
    config.minority_count = 400;
    config.seed = 99;
    const Dataset data = generate(config);

    std::map<int, std::pair<double, std::size_t>> majority_growth;
    std::map<int, std::pair<double, std::size_t>> minority_growth;
    for (const Instance& inst : data.instances()) {
        const int week = static_cast<int>(std::lround(inst.features[0]));
        auto& acc = inst.label == ClassLabel::Majority ? majority_growth[week] : minority_growth[week];
        acc.first += inst.target;
        acc.second += 1;
    }
    std::size_t comparable = 0;
    std::size_t collapsed = 0;
    for (const auto& [week, min_acc] : minority_growth) {
        const auto it = majority_growth.find(week);
        if (it == majority_growth.end() || min_acc.second < 5 || it->second.second < 5) continue;
        ++comparable;
        if (min_acc.first / static_cast<double>(min_acc.second) <
            it->second.first / static_cast<double>(it->second.second)) {
            ++collapsed;
        }
    }
    REQUIRE(comparable > 0);
    CHECK(collapsed == comparable);
}

TEST_CASE("growth stays finite and non-negative") {
    SynthConfig config;
    config.majority_count = 500;
    config.minority_count = 500;
    config.regime.collapse_factor = 0.0;
    const Dataset data = generate(config);
    for (const Instance& inst : data.instances()) {
        CHECK(std::isfinite(inst.target));
        CHECK(inst.target >= 0.0);
    }
}

TEST_CASE("generation is reproducible and seed-sensitive") {
    SynthConfig config;
    config.majority_count = 50;
    config.minority_count = 10;
    const Dataset a = generate(config);
    const Dataset b = generate(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.instances()[i].features == b.instances()[i].features);
        CHECK(a.instances()[i].target == b.instances()[i].target);
    }
    config.seed += 1;
    const Dataset c = generate(config);
    bool any_different = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.instances()[i].features != c.instances()[i].features) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("test split is disjoint and concentrated in disrupted weeks") {
    SynthConfig config;
    config.majority_count = 100;
    config.minority_count = 20;
    config.test_rows_per_slice = 40;
    const TrainTest tt = generate_split(config);
    CHECK(tt.test.size() == 3 * 40);
    for (const Instance& inst : tt.test.instances()) {
        const int week = static_cast<int>(std::lround(inst.features[0]));
        const bool in_slice = std::any_of(config.disrupted.begin(), config.disrupted.end(),
                                          [&](const SliceSpec& s) { return s.contains(week); });
        CHECK(in_slice);
    }
    // outlier share is near the configured fraction
    std::size_t outliers = 0;
    for (const Instance& inst : tt.test.instances()) {
        if (inst.label == ClassLabel::Minority) ++outliers;
    }
    const double share = static_cast<double>(outliers) / static_cast<double>(tt.test.size());
    CHECK(share > 0.45);
    CHECK(share < 0.85);
}

TEST_CASE("table1 grid reproduces the protocol imbalance ratios") {
    const auto full = table1_grid(1.0);
    REQUIRE(full.size() == 12);
    CHECK(static_cast<double>(full[4].first) / static_cast<double>(full[4].second) == doctest::Approx(8.5).epsilon(0.01));
    CHECK(static_cast<double>(full[11].first) / static_cast<double>(full[11].second) ==
          doctest::Approx(163.5).epsilon(0.01));

    const auto desk = table1_grid(0.1);
    CHECK(desk[11].first == 3272);
    CHECK(desk[11].second == 20);
    CHECK(static_cast<double>(desk[11].first) / static_cast<double>(desk[11].second) ==
          doctest::Approx(163.6).epsilon(0.01));
}

TEST_CASE("grid datasets are reproducible from base seed and index") {
    SynthConfig base;
    base.seed = 7;
    const std::vector<std::pair<std::size_t, std::size_t>> grid = {{60, 20}, {80, 10}};
    const auto configs = grid_configs(base, grid);
    REQUIRE(configs.size() == 2);
    CHECK(configs[0].seed != configs[1].seed);

    const auto datasets = make_ir_grid(base, grid);
    const auto datasets2 = make_ir_grid(base, grid);
    REQUIRE(datasets.size() == 2);
    CHECK(datasets[0].size() == 80);
    CHECK(datasets[1].size() == 90);
    for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t i = 0; i < datasets[d].size(); ++i) {
            CHECK(datasets[d].instances()[i].features == datasets2[d].instances()[i].features);
        }
    }
}

TEST_CASE("config round-trips through JSON") {
    SynthConfig config;
    config.majority_count = 123;
    config.minority_count = 45;
    config.seed = 999;
    config.noise_std = 2.5;
    config.regime.deviation_multiplier = 3.7;
    config.regime.collapse_factor = 0.42;
    config.test_rows_per_slice = 33;

    const auto j = synth_config_to_json(config);
    const SynthConfig back = synth_config_from_json(j);
    CHECK(back.majority_count == config.majority_count);
    CHECK(back.minority_count == config.minority_count);
    CHECK(back.seed == config.seed);
    CHECK(back.noise_std == config.noise_std);
    CHECK(back.regime.deviation_multiplier == config.regime.deviation_multiplier);
    CHECK(back.regime.collapse_factor == config.regime.collapse_factor);
    CHECK(back.test_rows_per_slice == config.test_rows_per_slice);
    CHECK(back.profile.growth == config.profile.growth);
    CHECK(synth_config_to_json(back) == j);

    // generated data matches after a round trip
    const Dataset a = generate(config);
    const Dataset b = generate(back);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.instances()[i].features == b.instances()[i].features);
}

TEST_CASE("config validation") {
    SynthConfig config;
    config.majority_count = 0;
    config.minority_count = 0;
    CHECK_THROWS_AS(config.validate(), DataError);

    config = SynthConfig{};
    config.regime.deviation_multiplier = 2.0;
    CHECK_THROWS_AS(config.validate(), DataError);

    config = SynthConfig{};
    config.regime.collapse_factor = 1.0;
    CHECK_THROWS_AS(config.validate(), DataError);

    config = SynthConfig{};
    config.disrupted = {{"bad", 50, 10}};
    CHECK_THROWS_AS(config.validate(), DataError);
}
