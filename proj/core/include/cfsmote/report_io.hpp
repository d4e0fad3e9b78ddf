#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfsmote/dataset.hpp"
#include "cfsmote/evaluation.hpp"

namespace cfsmote::report {

// One row of the tidy report CSV: dataset_id, ir, method, slice, mae, runtime_s
struct TidyRow {
    std::string dataset_id;
    double ir = 0.0;
    std::string method;
    std::string slice;
    double mae = 0.0;
    double runtime_s = 0.0;
};

std::vector<TidyRow> tidy_rows(const SweepReport& report, const std::vector<SweepDataset>& datasets);
void write_tidy_csv(std::ostream& out, const std::vector<TidyRow>& rows);
std::vector<TidyRow> read_tidy_csv(std::istream& in);

// methods x datasets matrix for one slice, datasets ordered by descending IR
void write_slice_matrix_csv(std::ostream& out, const std::vector<TidyRow>& rows, const std::string& slice);

// MAE vs IR line panels per slice; runtime bars per method
void write_mae_svg(std::ostream& out, const std::vector<TidyRow>& rows);
void write_runtime_svg(std::ostream& out, const std::vector<TidyRow>& rows);

// Table 5 legend: *** at 0.001, ** at 0.01, * at 0.05, NS otherwise
std::string significance_stars(double p_value);

struct StatsRow {
    std::string comparison;
    std::string slice;
    std::size_t n = 0;
    double w = 0.0;
    double p_value = 0.0;
    bool degenerate = false;

    std::string significance() const;
};

// Pairwise signed-rank comparisons of the reference method against every
// other method in the tidy report, per slice, across datasets.
std::vector<StatsRow> wilcoxon_from_tidy(const std::vector<TidyRow>& rows, const std::string& reference_method,
                                         Sided sided = Sided::TwoSided);
std::vector<StatsRow> stats_rows(const SweepReport& report);
void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows);

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& results);

nlohmann::ordered_json boundary_to_json(const ClassBoundary& boundary);
ClassBoundary boundary_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json diagnostics_to_json(const Diagnostics& diag);

// seed, boundary, and target count are run state, not part of this schema
nlohmann::ordered_json augmenter_config_to_json(const AugmenterConfig& config);
AugmenterConfig augmenter_config_from_json(const nlohmann::ordered_json& j);

}  // namespace cfsmote::report
