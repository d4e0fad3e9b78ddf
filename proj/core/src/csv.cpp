#include "cfsmote/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace cfsmote::csv {

namespace {

constexpr std::array<std::string_view, 5> kProvenanceColumns = {
    "synthetic", "generator", "source_id", "template_majority_id", "template_minority_id"};

bool is_provenance_column(std::string_view name) {
    return std::find(kProvenanceColumns.begin(), kProvenanceColumns.end(), name) != kProvenanceColumns.end();
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw DataError("cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    // tolerate trailing \r from CRLF files
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
        fields.back().pop_back();
    }
    return fields;
}

Dataset read_dataset(std::istream& in, const ReadOptions& opts) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty input, no header row");
    const std::vector<std::string> header = split_line(line);

    int id_col = -1;
    int target_col = -1;
    int label_col = -1;
    std::vector<std::size_t> feature_cols;
    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (name == opts.id_column) {
            if (id_col >= 0) throw DataError("csv: duplicate id column");
            id_col = static_cast<int>(c);
        } else if (name == opts.target_column) {
            if (target_col >= 0) throw DataError("csv: duplicate target column");
            target_col = static_cast<int>(c);
        } else if (name == "label") {
            label_col = static_cast<int>(c);
        } else if (is_provenance_column(name)) {
            // skipped on read; augmented files round-trip through here
        } else {
            feature_cols.push_back(c);
            feature_names.push_back(name);
        }
    }
    if (id_col < 0) throw DataError("csv: missing required column '" + opts.id_column + "'");
    if (target_col < 0) throw DataError("csv: missing required target column '" + opts.target_column + "'");
    if (feature_names.empty()) throw DataError("csv: no feature columns");

    FeatureSchema schema;
    schema.feature_names = feature_names;
    schema.target_name = opts.target_column;
    for (std::size_t f = 0; f < feature_names.size(); ++f) {
        if (feature_names[f] == opts.week_column) schema.seasonal_index = f;
    }
    if (opts.climate_columns.empty()) {
        for (std::size_t f = 0; f < feature_names.size(); ++f) {
            if (!schema.seasonal_index || f != *schema.seasonal_index) schema.climate_feature_indices.push_back(f);
        }
    } else {
        for (const std::string& want : opts.climate_columns) {
            auto it = std::find(feature_names.begin(), feature_names.end(), want);
            if (it == feature_names.end()) throw DataError("csv: climate column '" + want + "' not in header");
            schema.climate_feature_indices.push_back(static_cast<std::size_t>(it - feature_names.begin()));
        }
    }

    std::vector<Instance> instances;
    std::size_t row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size()) {
            throw DataError("csv row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        Instance inst;
        inst.id = fields[static_cast<std::size_t>(id_col)];
        inst.features.reserve(feature_cols.size());
        try {
            for (std::size_t c : feature_cols) inst.features.push_back(parse_double(fields[c]));
            inst.target = parse_double(fields[static_cast<std::size_t>(target_col)]);
        } catch (const DataError& e) {
            throw DataError("csv row " + std::to_string(row) + ": " + e.what());
        }
        if (label_col >= 0) {
            const std::string& text = fields[static_cast<std::size_t>(label_col)];
            if (!text.empty()) {
                auto label = parse_label(text);
                if (!label) throw DataError("csv row " + std::to_string(row) + ": unknown label '" + text + "'");
                inst.label = *label;
            }
        }
        instances.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(instances));
}

Dataset read_dataset_file(const std::filesystem::path& path, const ReadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    return read_dataset(in, opts);
}

void write_dataset(std::ostream& out, const Dataset& data) {
    const FeatureSchema& schema = data.schema();
    const bool labeled = data.fully_labeled();
    if (!labeled) {
        for (const Instance& inst : data.instances()) {
            if (inst.label) throw DataError("csv write: dataset is only partially labeled");
        }
    }

    out << "id";
    for (const auto& name : schema.feature_names) out << ',' << name;
    out << ',' << schema.target_name;
    if (labeled && !data.empty()) out << ",label";
    out << '\n';

    for (const Instance& inst : data.instances()) {
        out << inst.id;
        for (double v : inst.features) out << ',' << format_double(v);
        out << ',' << format_double(inst.target);
        if (labeled && !data.empty()) out << ',' << to_string(*inst.label);
        out << '\n';
    }
}

void write_dataset_file(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    write_dataset(out, data);
}

}  // namespace cfsmote::csv
