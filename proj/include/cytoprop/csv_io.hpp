#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cytoprop/types.hpp"

namespace cytoprop {

// A parsed dataset: points with uniform weights, marker names, and (when a
// label column was requested) the partition plus the label-name mapping in
// first-appearance order.
struct LoadedCsv {
  WeightedSample sample;
  std::optional<ClassPartition> partition;
  std::vector<std::string> marker_names;
  std::vector<std::string> class_names;  // empty without labels
};

// Reads a comma-separated file with a header row. All non-label columns must
// parse as finite reals ('.' decimal); the label column, when named, may hold
// arbitrary text. `drop_column` silently removes a column (used to ignore
// stray labels in target files).
LoadedCsv load_csv(const std::string& path,
                   const std::optional<std::string>& label_column,
                   const std::optional<std::string>& drop_column = std::nullopt);

// Single-column label file (or a file whose `label` column is used);
// returns the values in row order.
std::vector<std::string> load_label_column(const std::string& path,
                                           const std::string& column);

// Shortest round-trip decimal text for a double; deterministic on a build.
std::string format_double(double value);

// Writers used by the CLI and the generator. Labels, when provided, are
// appended as a final `label` column.
void write_points_csv(const std::string& path,
                      const std::vector<std::string>& marker_names,
                      const WeightedSample& sample,
                      const std::vector<std::string>* labels = nullptr);

void write_label_csv(const std::string& path,
                     const std::vector<std::string>& labels);

}  // namespace cytoprop
