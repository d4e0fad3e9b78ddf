#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfsmote/dataset.hpp"
#include "cfsmote/neighbors.hpp"
#include "cfsmote/oversampling.hpp"
#include "cfsmote/synthgen.hpp"
#include "cfsmote/wilcoxon.hpp"

namespace cfsmote {

double mae(std::span<const double> actual, std::span<const double> predicted);

struct PredictorConfig {
    std::size_t k = 5;
    bool normalize = true;  // z-score fitted on the (augmented) training data
};

// One benchmark dataset: labeled train/test split, the test-slice buckets on
// the week feature, and the class-defining boundary when known (used as the
// DiCE-lite oracle and for validity diagnostics).
struct SweepDataset {
    std::string id;
    double imbalance_ratio = 0.0;
    Dataset train;
    Dataset test;
    std::vector<synth::SliceSpec> slices;
    std::optional<ClassBoundary> boundary;
};

struct EvalResult {
    std::string method;
    std::string dataset_id;
    std::string slice;
    double mae = 0.0;
    std::size_t n_test = 0;
    double runtime_seconds = 0.0;  // augmentation step only
};

struct FailedCell {
    std::string dataset_id;
    std::string method;
    std::string message;
};

struct WilcoxonRow {
    std::string comparison;  // method compared against the reference
    std::string slice;
    std::size_t n = 0;
    double w = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // all differences zero
};

struct SweepOptions {
    std::uint64_t master_seed = 42;
    PredictorConfig predictor;
    bool timing = true;    // false zeroes runtime_seconds for byte-stable reports
    std::size_t jobs = 1;  // parallel (dataset x method) cells
    std::string reference_method = "cfa_smote";  // pairwise Wilcoxon reference
};

struct SweepReport {
    std::vector<EvalResult> cells;  // dataset-major, then method, then slice
    std::vector<WilcoxonRow> wilcoxon;
    std::vector<FailedCell> failures;
    nlohmann::ordered_json manifest;  // seeds, configs, per-cell normalization parameters
};

// The full protocol: augment each training set with each method (Baseline
// included), fit the k-NN growth regressor, score MAE per test slice, then
// compare the reference method pairwise against every other across datasets.
// Method failures mark their cells failed; the sweep continues.
SweepReport run_sweep(const std::vector<SweepDataset>& datasets, const std::vector<AugmenterConfig>& methods,
                      const SweepOptions& options);

struct BenchResult {
    std::string method;
    double mean_seconds = 0.0;
    std::vector<double> runs;
};

// Mean wall-clock of the augmentation step per method on one dataset,
// serialized to keep contention out of the numbers. repetitions >= 3.
std::vector<BenchResult> bench_runtime(const Dataset& train, const std::vector<AugmenterConfig>& methods,
                                       std::size_t repetitions, const std::optional<ClassBoundary>& boundary = {});

}  // namespace cfsmote
