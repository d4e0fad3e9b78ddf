#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfsmote/dataset.hpp"

namespace cfsmote::csv {

// Shortest round-trip formatting (std::to_chars); parse with parse_double to
// recover the exact bits.
std::string format_double(double value);
double parse_double(std::string_view text);  // throws DataError on junk

std::vector<std::string> split_line(const std::string& line);

struct ReadOptions {
    std::string id_column = "id";
    std::string target_column = "growth";
    std::string week_column = "week";  // becomes the seasonal feature when present
    // empty -> every feature except the week column
    std::vector<std::string> climate_columns;
};

// Header row names the columns. `id` and the target column are required; the
// `label` column and provenance columns (synthetic, generator, source_id,
// template_majority_id, template_minority_id) are recognized and not treated
// as features. Rows with unparseable values are rejected with their row
// number.
Dataset read_dataset(std::istream& in, const ReadOptions& opts = {});
Dataset read_dataset_file(const std::filesystem::path& path, const ReadOptions& opts = {});

// Writes id, features (schema order), target, and a label column when the
// dataset is fully labeled. Partially labeled datasets are rejected.
void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset_file(const std::filesystem::path& path, const Dataset& data);

}  // namespace cfsmote::csv
