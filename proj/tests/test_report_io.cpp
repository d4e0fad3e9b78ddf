#include <doctest.h>

#include <sstream>

#include "cfsmote/report_io.hpp"

using namespace cfsmote;
using namespace cfsmote::report;

namespace {

std::vector<TidyRow> sample_rows() {
    // 3 datasets x 2 methods x 1 slice, cfa_smote lower by {1,2,3}
    std::vector<TidyRow> rows;
    const std::vector<std::pair<std::string, double>> datasets = {{"D1", 163.5}, {"D2", 81.7}, {"D3", 8.5}};
    const std::vector<double> base = {30, 31, 32};
    for (std::size_t d = 0; d < 3; ++d) {
        rows.push_back({datasets[d].first, datasets[d].second, "baseline", "july", base[d], 0.0});
        rows.push_back({datasets[d].first, datasets[d].second, "cfa_smote", "july",
                        base[d] - static_cast<double>(d + 1), 0.5});
    }
    return rows;
}

}  // namespace

TEST_CASE("tidy CSV round trip") {
    const auto rows = sample_rows();
    std::stringstream buf;
    write_tidy_csv(buf, rows);
    CHECK(buf.str().rfind("dataset_id,ir,method,slice,mae,runtime_s\n", 0) == 0);
    const auto back = read_tidy_csv(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].dataset_id == rows[i].dataset_id);
        CHECK(back[i].ir == rows[i].ir);
        CHECK(back[i].method == rows[i].method);
        CHECK(back[i].slice == rows[i].slice);
        CHECK(back[i].mae == rows[i].mae);
        CHECK(back[i].runtime_s == rows[i].runtime_s);
    }

    std::stringstream bad("wrong,header\n");
    CHECK_THROWS_AS(read_tidy_csv(bad), DataError);
}

TEST_CASE("significance stars follow the Table 5 legend") {
    CHECK(significance_stars(0.0005) == "***");
    CHECK(significance_stars(0.001) == "***");
    CHECK(significance_stars(0.004) == "**");
    CHECK(significance_stars(0.01) == "**");
    CHECK(significance_stars(0.02) == "*");
    CHECK(significance_stars(0.05) == "*");
    CHECK(significance_stars(0.052) == "NS");
    CHECK(significance_stars(0.25) == "NS");
}

TEST_CASE("pairwise stats from a tidy report") {
    const auto stats = wilcoxon_from_tidy(sample_rows(), "cfa_smote");
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].comparison == "baseline");
    CHECK(stats[0].slice == "july");
    CHECK(stats[0].n == 3);
    CHECK(stats[0].p_value == doctest::Approx(0.25));  // differences {1,2,3}
    CHECK(stats[0].significance() == "NS");

    std::stringstream out;
    write_stats_csv(out, stats);
    CHECK(out.str().find("comparison,slice,n,w,p_value,significance") != std::string::npos);
    CHECK(out.str().find("baseline,july,3,0,0.25,NS") != std::string::npos);

    CHECK_THROWS_AS(wilcoxon_from_tidy(sample_rows(), "missing_method"), DataError);
}

TEST_CASE("ties against the reference come out degenerate") {
    std::vector<TidyRow> rows = sample_rows();
    for (TidyRow& r : rows) {
        if (r.method == "cfa_smote") r.mae = 30.0;
    }
    for (TidyRow& r : rows) {
        if (r.method == "baseline") r.mae = 30.0;
    }
    const auto stats = wilcoxon_from_tidy(rows, "cfa_smote");
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].degenerate);
    CHECK(stats[0].significance() == "degenerate");
}

TEST_CASE("slice matrix orders datasets by descending IR") {
    std::stringstream out;
    write_slice_matrix_csv(out, sample_rows(), "july");
    std::string line;
    std::getline(out, line);
    CHECK(line == "method,D1_ir_163.5,D2_ir_81.7,D3_ir_8.5");
    std::getline(out, line);
    CHECK(line.rfind("baseline,30,31,32", 0) == 0);
    std::getline(out, line);
    CHECK(line.rfind("cfa_smote,29,29,29", 0) == 0);
}

TEST_CASE("svg artifacts are well formed") {
    std::stringstream mae_svg;
    write_mae_svg(mae_svg, sample_rows());
    const std::string mae_text = mae_svg.str();
    CHECK(mae_text.rfind("<svg", 0) == 0);
    CHECK(mae_text.find("<polyline") != std::string::npos);
    CHECK(mae_text.find("</svg>") != std::string::npos);
    CHECK(mae_text.find("cfa_smote") != std::string::npos);

    std::stringstream rt_svg;
    write_runtime_svg(rt_svg, sample_rows());
    const std::string rt_text = rt_svg.str();
    CHECK(rt_text.rfind("<svg", 0) == 0);
    CHECK(rt_text.find("<rect") != std::string::npos);
    CHECK(rt_text.find("</svg>") != std::string::npos);
}

TEST_CASE("boundary JSON round trip") {
    ClassBoundary::StatsMap stats;
    stats[{1, 10}] = MeanStd{5.5, 2.25};
    stats[{2, 10}] = MeanStd{-1.0, 0.0};
    const ClassBoundary boundary(BoundaryMode::Seasonal, 2.0, stats);
    const auto j = boundary_to_json(boundary);
    const ClassBoundary back = boundary_from_json(j);
    CHECK(back.mode() == BoundaryMode::Seasonal);
    CHECK(back.multiplier() == 2.0);
    CHECK(back.stat_for(1, 10).mean == 5.5);
    CHECK(back.stat_for(1, 10).std == 2.25);
    CHECK(back.stat_for(2, 10).std == 0.0);
    CHECK(boundary_to_json(back) == j);
}

TEST_CASE("diagnostics serialize to stable keys") {
    Diagnostics diag;
    diag.native_pairs = 3;
    diag.syncf_count = 2;
    diag.minority_validity_rate = 0.75;
    const auto j = diagnostics_to_json(diag);
    CHECK(j.at("native_pairs") == 3);
    CHECK(j.at("syncf_count") == 2);
    CHECK(j.at("minority_validity_rate") == 0.75);
    CHECK(j.at("danger_empty_fallback") == false);
}
