#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cfsmote/dataset.hpp"
#include "support/fixtures.hpp"

using namespace cfsmote;
using testsupport::make_dataset;

TEST_CASE("boundary stats on the {0,0,0,0,10} fixture") {
    const Dataset data = make_dataset({{0}, {0}, {0}, {0}, {10}});
    const ClassBoundary boundary = compute_boundary(data, BoundaryMode::Global, 2.0);
    const MeanStd& ms = boundary.stat_for(0, 0);
    CHECK(ms.mean == doctest::Approx(2.0));
    CHECK(ms.std == doctest::Approx(4.0));  // population std
}

TEST_CASE("constant feature has zero std") {
    const Dataset data = make_dataset({{5}, {5}, {5}});
    const ClassBoundary boundary = compute_boundary(data, BoundaryMode::Global, 2.0);
    CHECK(boundary.stat_for(0, 0).mean == doctest::Approx(5.0));
    CHECK(boundary.stat_for(0, 0).std == doctest::Approx(0.0));
}

TEST_CASE("seasonal mode with one week bucket equals global") {
    FeatureSchema schema;
    schema.feature_names = {"week", "x"};
    schema.climate_feature_indices = {1};
    schema.seasonal_index = 0;
    std::vector<Instance> rows;
    for (double v : {0.0, 0.0, 0.0, 0.0, 10.0}) {
        Instance inst;
        inst.id = "r" + std::to_string(rows.size());
        inst.features = {7.0, v};
        rows.push_back(inst);
    }
    const Dataset data(schema, rows);
    const ClassBoundary seasonal = compute_boundary(data, BoundaryMode::Seasonal, 2.0);
    const ClassBoundary global = compute_boundary(data, BoundaryMode::Global, 2.0);
    CHECK(seasonal.stat_for(1, 7).mean == doctest::Approx(global.stat_for(1, 0).mean));
    CHECK(seasonal.stat_for(1, 7).std == doctest::Approx(global.stat_for(1, 0).std));
}

TEST_CASE("strict inequality at the boundary edge") {
    const Dataset train = make_dataset({{0}, {0}, {0}, {0}, {10}});
    const ClassBoundary boundary = compute_boundary(train, BoundaryMode::Global, 2.0);

    // |10 - 2| = 8 is not > 8
    const Dataset queries = make_dataset({{10}, {11}, {-6}, {-7}});
    const Dataset labeled = label_classes(queries, boundary);
    CHECK(labeled.instances()[0].label == ClassLabel::Majority);
    CHECK(labeled.instances()[1].label == ClassLabel::Minority);
    CHECK(labeled.instances()[2].label == ClassLabel::Majority);
    CHECK(labeled.instances()[3].label == ClassLabel::Minority);
}

TEST_CASE("zero-std feature at its mean stays majority") {
    const Dataset train = make_dataset({{5}, {5}, {5}});
    const ClassBoundary boundary = compute_boundary(train, BoundaryMode::Global, 2.0);
    const Dataset labeled = label_classes(make_dataset({{5}, {5.001}}), boundary);
    CHECK(labeled.instances()[0].label == ClassLabel::Majority);
    CHECK(labeled.instances()[1].label == ClassLabel::Minority);  // any deviation from a zero-std feature
}

TEST_CASE("label_classes leaves the input unchanged and is idempotent") {
    const Dataset data = make_dataset({{0}, {1}, {20}});
    const ClassBoundary boundary = compute_boundary(data, BoundaryMode::Global, 2.0);
    const Dataset once = label_classes(data, boundary);
    CHECK_FALSE(data.instances()[0].label.has_value());
    const Dataset twice = label_classes(once, boundary);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once.instances()[i].label == twice.instances()[i].label);
    }
}

TEST_CASE("increasing the multiplier never moves majority to minority") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 200; ++i) rows.push_back({unif(gen), unif(gen)});
    const Dataset data = make_dataset(rows);
    const Dataset tight = label_classes(data, compute_boundary(data, BoundaryMode::Global, 1.0));
    const Dataset loose = label_classes(data, compute_boundary(data, BoundaryMode::Global, 2.0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (tight.instances()[i].label == ClassLabel::Majority) {
            CHECK(loose.instances()[i].label == ClassLabel::Majority);
        }
    }
}

TEST_CASE("class counts partition the dataset") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 157; ++i) rows.push_back({unif(gen)});
    const Dataset data = make_dataset(rows);
    const Dataset labeled = label_classes(data, compute_boundary(data, BoundaryMode::Global, 1.5));
    const ClassStats stats = class_stats(labeled);
    CHECK(stats.majority_count + stats.minority_count == labeled.size());
}

TEST_CASE("boundary stats are order invariant") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> unif(0.0, 50.0);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 64; ++i) rows.push_back({unif(gen), unif(gen)});
    std::vector<std::vector<double>> shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const ClassBoundary a = compute_boundary(make_dataset(rows), BoundaryMode::Global, 2.0);
    const ClassBoundary b = compute_boundary(make_dataset(shuffled), BoundaryMode::Global, 2.0);
    for (const auto& [key, ms] : a.stats()) {
        CHECK(ms.mean == doctest::Approx(b.stat_for(key.first, key.second).mean));
        CHECK(ms.std == doctest::Approx(b.stat_for(key.first, key.second).std));
    }
}

TEST_CASE("imbalance ratios match the protocol figures") {
    auto stats_for = [](std::size_t maj, std::size_t min) {
        std::vector<std::vector<double>> rows(maj + min, {0.0});
        std::vector<std::optional<ClassLabel>> labels(maj, ClassLabel::Majority);
        labels.insert(labels.end(), min, ClassLabel::Minority);
        return class_stats(make_dataset(rows, {}, labels));
    };
    CHECK(stats_for(32719, 3810).imbalance_ratio == doctest::Approx(8.58).epsilon(0.001));
    CHECK(stats_for(100, 100).imbalance_ratio == doctest::Approx(1.0));
    CHECK(stats_for(6000, 3810).imbalance_ratio == doctest::Approx(1.57).epsilon(0.005));

    const ClassStats degenerate = stats_for(10, 0);
    CHECK(degenerate.degenerate());
    CHECK(std::isinf(degenerate.imbalance_ratio));
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(compute_boundary(make_dataset({}), BoundaryMode::Global, 2.0), DataError);

    const Dataset no_week = make_dataset({{1.0}});
    CHECK_THROWS_AS(compute_boundary(no_week, BoundaryMode::Seasonal, 2.0), DataError);

    CHECK_THROWS_AS(class_stats(make_dataset({{1.0}})), DataError);  // unlabeled

    // labeling against a boundary that was fitted on a different schema
    FeatureSchema schema;
    schema.feature_names = {"a", "b"};
    schema.climate_feature_indices = {0, 1};
    Instance inst;
    inst.id = "x";
    inst.features = {0.0, 0.0};
    const Dataset two_features(schema, {inst});
    const ClassBoundary one_feature = compute_boundary(make_dataset({{0.0}, {1.0}}), BoundaryMode::Global, 2.0);
    CHECK_THROWS_AS(label_classes(two_features, one_feature), DataError);
}

TEST_CASE("dataset invariants are validated") {
    FeatureSchema schema;
    schema.feature_names = {"a"};
    schema.climate_feature_indices = {0};
    Instance good;
    good.id = "x";
    good.features = {1.0};

    Instance dup = good;
    CHECK_THROWS_AS(Dataset(schema, {good, dup}), DataError);

    Instance wrong = good;
    wrong.id = "y";
    wrong.features = {1.0, 2.0};
    CHECK_THROWS_AS(Dataset(schema, {good, wrong}), DataError);

    Instance inf = good;
    inf.id = "z";
    inf.features = {std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(Dataset(schema, {inf}), DataError);
}
