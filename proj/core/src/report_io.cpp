#include "cfsmote/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "cfsmote/csv.hpp"

namespace cfsmote::report {

namespace {

using csv::format_double;

// stable method ordering and colors for plots
const std::vector<std::string> kMethodOrder = {"baseline", "smote", "b_smote", "g_smote", "dice_smote", "cfa_smote"};

std::string method_color(const std::string& method) {
    static const std::map<std::string, std::string> colors = {
        {"baseline", "#7f7f7f"},  {"smote", "#1f77b4"},      {"b_smote", "#ff7f0e"},
        {"g_smote", "#2ca02c"},   {"dice_smote", "#9467bd"}, {"cfa_smote", "#d62728"},
    };
    auto it = colors.find(method);
    return it != colors.end() ? it->second : "#17becf";
}

std::vector<std::string> ordered_unique_methods(const std::vector<TidyRow>& rows) {
    std::vector<std::string> methods;
    for (const std::string& m : kMethodOrder) {
        if (std::any_of(rows.begin(), rows.end(), [&](const TidyRow& r) { return r.method == m; })) {
            methods.push_back(m);
        }
    }
    for (const TidyRow& r : rows) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    }
    return methods;
}

std::vector<std::string> ordered_unique_slices(const std::vector<TidyRow>& rows) {
    std::vector<std::string> slices;
    for (const TidyRow& r : rows) {
        if (std::find(slices.begin(), slices.end(), r.slice) == slices.end()) slices.push_back(r.slice);
    }
    return slices;
}

// datasets ordered by descending IR, like the paper's tables
std::vector<std::pair<std::string, double>> datasets_by_ir(const std::vector<TidyRow>& rows) {
    std::vector<std::pair<std::string, double>> out;
    for (const TidyRow& r : rows) {
        if (std::none_of(out.begin(), out.end(),
                         [&](const auto& p) { return p.first == r.dataset_id; })) {
            out.emplace_back(r.dataset_id, r.ir);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

const TidyRow* find_row(const std::vector<TidyRow>& rows, const std::string& method, const std::string& dataset,
                        const std::string& slice) {
    for (const TidyRow& r : rows) {
        if (r.method == method && r.dataset_id == dataset && r.slice == slice) return &r;
    }
    return nullptr;
}

}  // namespace

std::vector<TidyRow> tidy_rows(const SweepReport& report, const std::vector<SweepDataset>& datasets) {
    std::map<std::string, double> ir;
    for (const SweepDataset& ds : datasets) ir[ds.id] = ds.imbalance_ratio;
    std::vector<TidyRow> rows;
    rows.reserve(report.cells.size());
    for (const EvalResult& cell : report.cells) {
        TidyRow row;
        row.dataset_id = cell.dataset_id;
        row.ir = ir.count(cell.dataset_id) ? ir.at(cell.dataset_id) : 0.0;
        row.method = cell.method;
        row.slice = cell.slice;
        row.mae = cell.mae;
        row.runtime_s = cell.runtime_seconds;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_tidy_csv(std::ostream& out, const std::vector<TidyRow>& rows) {
    out << "dataset_id,ir,method,slice,mae,runtime_s\n";
    for (const TidyRow& r : rows) {
        out << r.dataset_id << ',' << format_double(r.ir) << ',' << r.method << ',' << r.slice << ','
            << format_double(r.mae) << ',' << format_double(r.runtime_s) << '\n';
    }
}

std::vector<TidyRow> read_tidy_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("tidy csv: empty input");
    const std::vector<std::string> header = csv::split_line(line);
    const std::vector<std::string> expected = {"dataset_id", "ir", "method", "slice", "mae", "runtime_s"};
    if (header != expected) throw DataError("tidy csv: unexpected header");
    std::vector<TidyRow> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = csv::split_line(line);
        if (fields.size() != 6) throw DataError("tidy csv row " + std::to_string(row_no) + ": expected 6 fields");
        try {
            TidyRow r;
            r.dataset_id = fields[0];
            r.ir = csv::parse_double(fields[1]);
            r.method = fields[2];
            r.slice = fields[3];
            r.mae = csv::parse_double(fields[4]);
            r.runtime_s = csv::parse_double(fields[5]);
            rows.push_back(std::move(r));
        } catch (const DataError& e) {
            throw DataError("tidy csv row " + std::to_string(row_no) + ": " + e.what());
        }
    }
    return rows;
}

void write_slice_matrix_csv(std::ostream& out, const std::vector<TidyRow>& rows, const std::string& slice) {
    const auto datasets = datasets_by_ir(rows);
    const auto methods = ordered_unique_methods(rows);
    out << "method";
    for (const auto& [id, ir] : datasets) out << ',' << id << "_ir_" << format_double(ir);
    out << '\n';
    for (const std::string& method : methods) {
        out << method;
        for (const auto& [id, ir] : datasets) {
            const TidyRow* r = find_row(rows, method, id, slice);
            out << ',';
            if (r) out << format_double(r->mae);
        }
        out << '\n';
    }
}

namespace {

void svg_header(std::ostream& out, int width, int height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_mae_svg(std::ostream& out, const std::vector<TidyRow>& rows) {
    const auto slices = ordered_unique_slices(rows);
    const auto methods = ordered_unique_methods(rows);
    const auto datasets = datasets_by_ir(rows);
    const int panel_w = 300;
    const int panel_h = 240;
    const int margin = 50;
    const int legend_h = 30;
    const int width = margin + static_cast<int>(slices.size()) * (panel_w + margin);
    const int height = panel_h + 2 * margin + legend_h;
    svg_header(out, width, height);

    double max_mae = 1.0;
    for (const TidyRow& r : rows) max_mae = std::max(max_mae, r.mae);

    for (std::size_t p = 0; p < slices.size(); ++p) {
        const int x0 = margin + static_cast<int>(p) * (panel_w + margin);
        const int y0 = margin;
        out << "<g>\n";
        out << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 - 15 << "\" text-anchor=\"middle\" font-size=\"14\">"
            << slices[p] << "</text>\n";
        out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << panel_w << "\" height=\"" << panel_h
            << "\" fill=\"none\" stroke=\"#333\"/>\n";
        // y axis labels
        for (int tick = 0; tick <= 4; ++tick) {
            const double value = max_mae * tick / 4.0;
            const double y = y0 + panel_h - panel_h * tick / 4.0;
            out << "<text x=\"" << x0 - 5 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"9\">"
                << fmt2(value) << "</text>\n";
        }
        // x positions per dataset (descending IR)
        auto x_at = [&](std::size_t d) {
            if (datasets.size() == 1) return static_cast<double>(x0) + panel_w / 2.0;
            return x0 + 10.0 + (panel_w - 20.0) * static_cast<double>(d) / static_cast<double>(datasets.size() - 1);
        };
        for (std::size_t d = 0; d < datasets.size(); ++d) {
            out << "<text x=\"" << x_at(d) << "\" y=\"" << y0 + panel_h + 12
                << "\" text-anchor=\"middle\" font-size=\"8\">" << fmt2(datasets[d].second) << "</text>\n";
        }
        out << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 + panel_h + 26
            << "\" text-anchor=\"middle\" font-size=\"10\">imbalance ratio</text>\n";
        for (const std::string& method : methods) {
            std::string points;
            for (std::size_t d = 0; d < datasets.size(); ++d) {
                const TidyRow* r = find_row(rows, method, datasets[d].first, slices[p]);
                if (!r) continue;
                const double y = y0 + panel_h - panel_h * (r->mae / max_mae);
                points += fmt2(x_at(d)) + "," + fmt2(y) + " ";
            }
            if (!points.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << method_color(method) << "\" stroke-width=\"1.5\" points=\""
                    << points << "\"/>\n";
            }
        }
        out << "</g>\n";
    }
    // legend
    int lx = margin;
    const int ly = panel_h + margin + 30;
    for (const std::string& method : methods) {
        out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\"" << method_color(method)
            << "\"/>\n";
        out << "<text x=\"" << lx + 16 << "\" y=\"" << ly + 10 << "\" font-size=\"11\">" << method << "</text>\n";
        lx += 16 + 11 * static_cast<int>(method.size()) + 20;
    }
    out << "</svg>\n";
}

void write_runtime_svg(std::ostream& out, const std::vector<TidyRow>& rows) {
    const auto methods = ordered_unique_methods(rows);
    // one runtime per (method, dataset) cell; slices repeat it
    std::map<std::string, std::pair<double, std::size_t>> acc;
    std::set<std::pair<std::string, std::string>> seen;
    for (const TidyRow& r : rows) {
        if (!seen.insert({r.method, r.dataset_id}).second) continue;
        acc[r.method].first += r.runtime_s;
        acc[r.method].second += 1;
    }
    double max_mean = 0.0;
    std::map<std::string, double> mean;
    for (const std::string& m : methods) {
        const auto& [sum, n] = acc[m];
        mean[m] = n > 0 ? sum / static_cast<double>(n) : 0.0;
        max_mean = std::max(max_mean, mean[m]);
    }
    if (max_mean <= 0.0) max_mean = 1.0;

    const int bar_w = 70;
    const int gap = 30;
    const int plot_h = 240;
    const int margin = 60;
    const int width = margin * 2 + static_cast<int>(methods.size()) * (bar_w + gap);
    const int height = plot_h + margin * 2;
    svg_header(out, width, height);
    out << "<text x=\"" << width / 2 << "\" y=\"" << margin - 20
        << "\" text-anchor=\"middle\" font-size=\"14\">mean augmentation runtime (s)</text>\n";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const double value = mean[methods[i]];
        const double h = plot_h * (value / max_mean);
        const int x = margin + static_cast<int>(i) * (bar_w + gap);
        const double y = margin + plot_h - h;
        out << "<rect x=\"" << x << "\" y=\"" << fmt2(y) << "\" width=\"" << bar_w << "\" height=\"" << fmt2(h)
            << "\" fill=\"" << method_color(methods[i]) << "\"/>\n";
        out << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << fmt2(y - 5) << "\" text-anchor=\"middle\" font-size=\"10\">"
            << format_double(value) << "</text>\n";
        out << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << margin + plot_h + 15
            << "\" text-anchor=\"middle\" font-size=\"10\">" << methods[i] << "</text>\n";
    }
    out << "</svg>\n";
}

std::string significance_stars(double p_value) {
    if (p_value <= 0.001) return "***";
    if (p_value <= 0.01) return "**";
    if (p_value <= 0.05) return "*";
    return "NS";
}

std::string StatsRow::significance() const { return degenerate ? "degenerate" : significance_stars(p_value); }

std::vector<StatsRow> wilcoxon_from_tidy(const std::vector<TidyRow>& rows, const std::string& reference_method,
                                         Sided sided) {
    const auto methods = ordered_unique_methods(rows);
    if (std::find(methods.begin(), methods.end(), reference_method) == methods.end()) {
        throw DataError("stats: reference method '" + reference_method + "' not present in the report");
    }
    const auto slices = ordered_unique_slices(rows);
    const auto datasets = datasets_by_ir(rows);

    std::vector<StatsRow> out;
    for (const std::string& method : methods) {
        if (method == reference_method) continue;
        for (const std::string& slice : slices) {
            std::vector<double> ref;
            std::vector<double> other;
            for (const auto& [id, ir] : datasets) {
                const TidyRow* a = find_row(rows, reference_method, id, slice);
                const TidyRow* b = find_row(rows, method, id, slice);
                if (a && b) {
                    ref.push_back(a->mae);
                    other.push_back(b->mae);
                }
            }
            StatsRow row;
            row.comparison = method;
            row.slice = slice;
            row.n = ref.size();
            if (ref.empty()) {
                row.degenerate = true;
                row.p_value = std::numeric_limits<double>::quiet_NaN();
            } else {
                try {
                    const WilcoxonOutcome outcome = wilcoxon_signed_rank(ref, other, sided);
                    row.w = outcome.w_statistic;
                    row.p_value = outcome.p_value;
                    row.n = outcome.n_effective;
                } catch (const DegenerateTestError&) {
                    row.degenerate = true;
                    row.p_value = std::numeric_limits<double>::quiet_NaN();
                }
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<StatsRow> stats_rows(const SweepReport& report) {
    std::vector<StatsRow> out;
    out.reserve(report.wilcoxon.size());
    for (const WilcoxonRow& w : report.wilcoxon) {
        StatsRow row;
        row.comparison = w.comparison;
        row.slice = w.slice;
        row.n = w.n;
        row.w = w.w;
        row.p_value = w.p_value;
        row.degenerate = w.degenerate;
        out.push_back(std::move(row));
    }
    return out;
}

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows) {
    out << "comparison,slice,n,w,p_value,significance\n";
    for (const StatsRow& r : rows) {
        out << r.comparison << ',' << r.slice << ',' << r.n << ',' << format_double(r.w) << ','
            << (r.degenerate ? "" : format_double(r.p_value)) << ',' << r.significance() << '\n';
    }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& results) {
    out << "method,mean_seconds,repetitions\n";
    for (const BenchResult& r : results) {
        out << r.method << ',' << format_double(r.mean_seconds) << ',' << r.runs.size() << '\n';
    }
}

nlohmann::ordered_json boundary_to_json(const ClassBoundary& boundary) {
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(boundary.mode()));
    j["multiplier"] = boundary.multiplier();
    nlohmann::ordered_json stats = nlohmann::ordered_json::array();
    for (const auto& [key, ms] : boundary.stats()) {
        stats.push_back({{"feature_index", key.first}, {"season", key.second}, {"mean", ms.mean}, {"std", ms.std}});
    }
    j["stats"] = std::move(stats);
    return j;
}

ClassBoundary boundary_from_json(const nlohmann::ordered_json& j) {
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw DataError("boundary json: unknown mode");
    ClassBoundary::StatsMap stats;
    for (const auto& item : j.at("stats")) {
        stats[{item.at("feature_index").get<std::size_t>(), item.at("season").get<int>()}] =
            MeanStd{item.at("mean").get<double>(), item.at("std").get<double>()};
    }
    return ClassBoundary(*mode, j.at("multiplier").get<double>(), std::move(stats));
}

nlohmann::ordered_json augmenter_config_to_json(const AugmenterConfig& config) {
    nlohmann::ordered_json j;
    j["method"] = std::string(method_name(config.method));
    j["smote_k"] = config.smote_k;
    j["borderline_m"] = config.borderline_m;
    j["gsmote_truncation"] = config.gsmote_truncation;
    j["gsmote_deformation"] = config.gsmote_deformation;
    j["max_difference_features"] = config.pair_validity.max_difference_features;
    if (!config.pair_validity.feature_tolerance.empty()) {
        j["feature_tolerance"] = config.pair_validity.feature_tolerance;
    }
    if (config.pair_validity.max_pair_distance) j["max_pair_distance"] = *config.pair_validity.max_pair_distance;
    j["dice_pool_size"] = config.dice.pool_size;
    if (config.dice.grid_step) j["dice_grid_step"] = *config.dice.grid_step;
    return j;
}

AugmenterConfig augmenter_config_from_json(const nlohmann::ordered_json& j) {
    AugmenterConfig config;
    const auto method = parse_method(j.at("method").get<std::string>());
    if (!method) throw DataError("augmenter config: unknown method '" + j.at("method").get<std::string>() + "'");
    config.method = *method;
    if (j.contains("smote_k")) config.smote_k = j.at("smote_k").get<std::size_t>();
    if (j.contains("borderline_m")) config.borderline_m = j.at("borderline_m").get<std::size_t>();
    if (j.contains("gsmote_truncation")) config.gsmote_truncation = j.at("gsmote_truncation").get<double>();
    if (j.contains("gsmote_deformation")) config.gsmote_deformation = j.at("gsmote_deformation").get<double>();
    if (j.contains("max_difference_features")) {
        config.pair_validity.max_difference_features = j.at("max_difference_features").get<std::size_t>();
    }
    if (j.contains("feature_tolerance")) {
        config.pair_validity.feature_tolerance = j.at("feature_tolerance").get<std::vector<double>>();
    }
    if (j.contains("max_pair_distance")) config.pair_validity.max_pair_distance = j.at("max_pair_distance").get<double>();
    if (j.contains("dice_pool_size")) config.dice.pool_size = j.at("dice_pool_size").get<std::size_t>();
    if (j.contains("dice_grid_step")) config.dice.grid_step = j.at("dice_grid_step").get<double>();
    return config;
}

nlohmann::ordered_json diagnostics_to_json(const Diagnostics& diag) {
    nlohmann::ordered_json j;
    j["native_pairs"] = diag.native_pairs;
    j["unpaired_count"] = diag.unpaired_count;
    j["syncf_count"] = diag.syncf_count;
    j["smote_stage_count"] = diag.smote_stage_count;
    if (std::isfinite(diag.minority_validity_rate)) {
        j["minority_validity_rate"] = diag.minority_validity_rate;
    } else {
        j["minority_validity_rate"] = nullptr;
    }
    j["wall_seconds"] = diag.wall_seconds;
    j["danger_empty_fallback"] = diag.danger_empty_fallback;
    j["k_clamped"] = diag.k_clamped;
    j["degenerate_single_syncf"] = diag.degenerate_single_syncf;
    return j;
}

}  // namespace cfsmote::report
