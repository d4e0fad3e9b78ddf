#include "cfsmote/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "cfsmote/report_io.hpp"
#include "cfsmote/rng.hpp"

namespace cfsmote {

double mae(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw DataError("mae: length mismatch");
    if (actual.empty()) throw DataError("mae: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

namespace {

struct CellOutput {
    std::vector<EvalResult> rows;          // one per slice
    std::optional<FailedCell> failure;
    std::optional<Normalization> fitted;   // regressor normalization, for the manifest
    std::uint64_t seed = 0;
};

int instance_week(const Dataset& data, const Instance& inst) {
    if (!data.schema().seasonal_index) throw DataError("sweep: dataset has no week feature for slicing");
    return static_cast<int>(std::lround(inst.features[*data.schema().seasonal_index]));
}

CellOutput run_cell(const SweepDataset& ds, const AugmenterConfig& method, const SweepOptions& options) {
    CellOutput out;
    const std::string name(method_name(method.method));
    out.seed = rng::derive(options.master_seed, ds.id + "|" + name);

    AugmenterConfig config = method;
    config.seed = out.seed;
    config.target_count = TargetCount::Parity();
    if (!config.boundary && ds.boundary) config.boundary = ds.boundary;

    try {
        const AugmentationResult augres = run_augmenter(ds.train, config);
        const double runtime = options.timing ? augres.diagnostics.wall_seconds : 0.0;
        const Dataset augmented = augmented_dataset(ds.train, augres);

        std::optional<Normalization> norm;
        if (options.predictor.normalize) norm = Normalization::fit_zscore(augmented);
        out.fitted = norm;
        const KnnRegressor regressor(augmented, options.predictor.k, norm);

        for (const synth::SliceSpec& slice : ds.slices) {
            std::vector<double> actual;
            std::vector<double> predicted;
            for (const Instance& inst : ds.test.instances()) {
                if (!slice.contains(instance_week(ds.test, inst))) continue;
                actual.push_back(inst.target);
                predicted.push_back(regressor.predict(inst.features));
            }
            if (actual.empty()) throw DataError("sweep: slice '" + slice.name + "' has no test rows");
            EvalResult row;
            row.method = name;
            row.dataset_id = ds.id;
            row.slice = slice.name;
            row.mae = mae(actual, predicted);
            row.n_test = actual.size();
            row.runtime_seconds = runtime;
            out.rows.push_back(std::move(row));
        }
    } catch (const std::exception& e) {
        out.rows.clear();
        out.failure = FailedCell{ds.id, name, e.what()};
    }
    return out;
}

}  // namespace

SweepReport run_sweep(const std::vector<SweepDataset>& datasets, const std::vector<AugmenterConfig>& methods,
                      const SweepOptions& options) {
    if (datasets.empty()) throw DataError("run_sweep: no datasets");
    if (methods.empty()) throw DataError("run_sweep: no methods");
    if (std::none_of(methods.begin(), methods.end(),
                     [](const AugmenterConfig& m) { return m.method == Method::Baseline; })) {
        throw DataError("run_sweep: methods must include a baseline entry");
    }
    for (const SweepDataset& ds : datasets) {
        if (ds.slices.empty()) throw DataError("run_sweep: dataset '" + ds.id + "' has no test slices");
    }

    // cells are pure functions of (dataset, method, derived seed), so any
    // execution order reassembles into the same report
    const std::size_t n_cells = datasets.size() * methods.size();
    std::vector<CellOutput> outputs(n_cells);
    auto cell_job = [&](std::size_t idx) {
        const SweepDataset& ds = datasets[idx / methods.size()];
        const AugmenterConfig& method = methods[idx % methods.size()];
        outputs[idx] = run_cell(ds, method, options);
    };
    const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < n_cells; ++i) cell_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) {
            workers.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_cells) break;
                    cell_job(i);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }

    SweepReport report;
    for (CellOutput& out : outputs) {
        if (out.failure) {
            report.failures.push_back(std::move(*out.failure));
        } else {
            for (EvalResult& row : out.rows) report.cells.push_back(std::move(row));
        }
    }

    // pairwise Wilcoxon of the reference method against every other, per
    // slice, across the dataset MAE sequences
    auto cell_mae = [&](const std::string& method, const std::string& dataset_id,
                        const std::string& slice) -> std::optional<double> {
        for (const EvalResult& row : report.cells) {
            if (row.method == method && row.dataset_id == dataset_id && row.slice == slice) return row.mae;
        }
        return std::nullopt;
    };
    std::vector<std::string> slice_names;
    for (const synth::SliceSpec& slice : datasets.front().slices) slice_names.push_back(slice.name);
    std::optional<std::size_t> reference_entry;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        if (std::string(method_name(methods[m].method)) == options.reference_method) {
            reference_entry = m;
            break;
        }
    }
    if (reference_entry) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            if (m == *reference_entry) continue;
            const std::string other_name(method_name(methods[m].method));
            for (const std::string& slice : slice_names) {
                std::vector<double> ref_mae;
                std::vector<double> other_mae;
                for (const SweepDataset& ds : datasets) {
                    const auto r = cell_mae(options.reference_method, ds.id, slice);
                    const auto o = cell_mae(other_name, ds.id, slice);
                    if (r && o) {
                        ref_mae.push_back(*r);
                        other_mae.push_back(*o);
                    }
                }
                WilcoxonRow row;
                row.comparison = other_name;
                row.slice = slice;
                row.n = ref_mae.size();
                if (ref_mae.empty()) {
                    row.degenerate = true;
                    row.p_value = std::numeric_limits<double>::quiet_NaN();
                } else {
                    try {
                        const WilcoxonOutcome outcome = wilcoxon_signed_rank(ref_mae, other_mae, Sided::TwoSided);
                        row.w = outcome.w_statistic;
                        row.p_value = outcome.p_value;
                        row.n = outcome.n_effective;
                    } catch (const DegenerateTestError&) {
                        row.degenerate = true;
                        row.p_value = std::numeric_limits<double>::quiet_NaN();
                    }
                }
                report.wilcoxon.push_back(std::move(row));
            }
        }
    }

    // manifest: everything needed to reproduce the run
    nlohmann::ordered_json manifest;
    manifest["master_seed"] = options.master_seed;
    manifest["timing"] = options.timing;
    manifest["reference_method"] = options.reference_method;
    manifest["predictor"] = {{"k", options.predictor.k}, {"normalize", options.predictor.normalize}};
    nlohmann::ordered_json method_list = nlohmann::ordered_json::array();
    for (const AugmenterConfig& m : methods) method_list.push_back(report::augmenter_config_to_json(m));
    manifest["methods"] = std::move(method_list);
    nlohmann::ordered_json ds_list = nlohmann::ordered_json::array();
    for (const SweepDataset& ds : datasets) {
        nlohmann::ordered_json dj;
        dj["id"] = ds.id;
        dj["ir"] = ds.imbalance_ratio;
        nlohmann::ordered_json slices = nlohmann::ordered_json::array();
        for (const synth::SliceSpec& s : ds.slices) {
            slices.push_back({{"name", s.name}, {"week_begin", s.week_begin}, {"week_end", s.week_end}});
        }
        dj["slices"] = std::move(slices);
        ds_list.push_back(std::move(dj));
    }
    manifest["datasets"] = std::move(ds_list);
    nlohmann::ordered_json cell_list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n_cells; ++i) {
        const SweepDataset& ds = datasets[i / methods.size()];
        const AugmenterConfig& method = methods[i % methods.size()];
        nlohmann::ordered_json cj;
        cj["dataset"] = ds.id;
        cj["method"] = std::string(method_name(method.method));
        cj["seed"] = outputs[i].seed;
        if (outputs[i].fitted) {
            cj["normalization"] = {{"kind", "zscore"}, {"offset", outputs[i].fitted->offset},
                                   {"scale", outputs[i].fitted->scale}};
        }
        cell_list.push_back(std::move(cj));
    }
    manifest["cells"] = std::move(cell_list);
    report.manifest = std::move(manifest);
    return report;
}

std::vector<BenchResult> bench_runtime(const Dataset& train, const std::vector<AugmenterConfig>& methods,
                                       std::size_t repetitions, const std::optional<ClassBoundary>& boundary) {
    if (repetitions < 3) throw DataError("bench_runtime: repetitions must be >= 3");
    std::vector<BenchResult> results;
    results.reserve(methods.size());
    for (const AugmenterConfig& method : methods) {
        AugmenterConfig config = method;
        if (!config.boundary && boundary) config.boundary = boundary;
        BenchResult bench;
        bench.method = std::string(method_name(method.method));
        for (std::size_t r = 0; r < repetitions; ++r) {
            config.seed = rng::derive(method.seed, "bench", r);
            const auto start = std::chrono::steady_clock::now();
            (void)run_augmenter(train, config);
            const auto stop = std::chrono::steady_clock::now();
            bench.runs.push_back(std::chrono::duration_cast<std::chrono::duration<double>>(stop - start).count());
        }
        double sum = 0.0;
        for (double t : bench.runs) sum += t;
        bench.mean_seconds = sum / static_cast<double>(bench.runs.size());
        results.push_back(std::move(bench));
    }
    return results;
}

}  // namespace cfsmote
