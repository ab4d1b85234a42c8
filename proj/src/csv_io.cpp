#include "cytoprop/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cytoprop {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, std::size_t line_no,
                  const std::string& column) {
  const std::string cell = strip(raw);
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || cell.empty() ||
      !std::isfinite(value)) {
    throw ValidationError("CSV: cell '" + cell + "' at line " +
                          std::to_string(line_no) + ", column '" + column +
                          "' is not a finite number");
  }
  return value;
}

}  // namespace

LoadedCsv load_csv(const std::string& path,
                   const std::optional<std::string>& label_column,
                   const std::optional<std::string>& drop_column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("CSV: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("CSV: '" + path + "' is empty");
  }
  auto header = split_line(line);
  for (auto& h : header) h = strip(h);

  std::ptrdiff_t label_idx = -1;
  std::ptrdiff_t drop_idx = -1;
  std::vector<std::string> marker_names;
  std::vector<std::size_t> marker_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (label_column && header[c] == *label_column) {
      label_idx = static_cast<std::ptrdiff_t>(c);
    } else if (drop_column && header[c] == *drop_column) {
      drop_idx = static_cast<std::ptrdiff_t>(c);
    } else {
      marker_names.push_back(header[c]);
      marker_cols.push_back(c);
    }
  }
  (void)drop_idx;
  if (label_column && label_idx < 0) {
    throw ValidationError("CSV: no column named '" + *label_column + "' in '" +
                          path + "'");
  }
  if (marker_names.empty()) {
    throw ValidationError("CSV: '" + path + "' has no marker columns");
  }

  std::vector<double> points;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_index;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError("CSV: line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
    }
    for (std::size_t m = 0; m < marker_cols.size(); ++m) {
      points.push_back(
          parse_cell(cells[marker_cols[m]], line_no, marker_names[m]));
    }
    if (label_idx >= 0) {
      const std::string name = strip(cells[static_cast<std::size_t>(label_idx)]);
      auto [it, inserted] =
          class_index.emplace(name, static_cast<int>(class_names.size()));
      if (inserted) class_names.push_back(name);
      labels.push_back(it->second);
    }
  }
  if (points.empty()) {
    throw ValidationError("CSV: '" + path + "' has no data rows");
  }

  LoadedCsv out{
      WeightedSample::uniform(std::move(points), marker_names.size()),
      std::nullopt, std::move(marker_names), std::move(class_names)};
  if (label_idx >= 0) {
    out.partition.emplace(std::move(labels),
                          static_cast<int>(out.class_names.size()));
  }
  return out;
}

std::vector<std::string> load_label_column(const std::string& path,
                                           const std::string& column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("CSV: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("CSV: '" + path + "' is empty");
  }
  auto header = split_line(line);
  for (auto& h : header) h = strip(h);
  std::ptrdiff_t idx = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == column) idx = static_cast<std::ptrdiff_t>(c);
  }
  if (idx < 0) {
    throw ValidationError("CSV: no column named '" + column + "' in '" + path +
                          "'");
  }
  std::vector<std::string> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError("CSV: line " + std::to_string(line_no) +
                            " has the wrong cell count");
    }
    values.push_back(strip(cells[static_cast<std::size_t>(idx)]));
  }
  if (values.empty()) {
    throw ValidationError("CSV: '" + path + "' has no data rows");
  }
  return values;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw NumericalError("format_double failed");
  return std::string(buf, ptr);
}

void write_points_csv(const std::string& path,
                      const std::vector<std::string>& marker_names,
                      const WeightedSample& sample,
                      const std::vector<std::string>* labels) {
  if (marker_names.size() != sample.dim()) {
    throw ValidationError("write_points_csv: marker name count mismatch");
  }
  if (labels && labels->size() != sample.size()) {
    throw ValidationError("write_points_csv: label count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  for (std::size_t m = 0; m < marker_names.size(); ++m) {
    out << (m ? "," : "") << marker_names[m];
  }
  if (labels) out << ",label";
  out << "\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto p = sample.point(i);
    for (std::size_t m = 0; m < p.size(); ++m) {
      out << (m ? "," : "") << format_double(p[m]);
    }
    if (labels) out << "," << (*labels)[i];
    out << "\n";
  }
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

void write_label_csv(const std::string& path,
                     const std::vector<std::string>& labels) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "label\n";
  for (const auto& l : labels) out << l << "\n";
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace cytoprop
