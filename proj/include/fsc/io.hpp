// Point-cloud CSV files and JSON manifests.
//
// CSV schema: header "x1,...,xD[,label]", one point per row, values printed
// with 17 significant digits so a read-back is bit-exact.
#pragma once

#include <fsc/core.hpp>
#include <fsc/subspaces.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsc {

inline std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

inline void write_points_csv(const PointCloud<double>& cloud,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const Index dim = cloud.ambient_dim();
  for (Index j = 0; j < dim; ++j) out << (j ? "," : "") << "x" << (j + 1);
  if (cloud.has_labels()) out << ",label";
  out << "\n";
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index j = 0; j < dim; ++j)
      out << (j ? "," : "") << format_value(cloud.points(i, j));
    if (cloud.has_labels()) out << "," << cloud.labels[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline PointCloud<double> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty points file: " + path);

  // Header: count coordinate columns, detect the trailing label column.
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const bool has_label = !header.empty() && header.back() == "label";
  const Index dim = static_cast<Index>(header.size()) - (has_label ? 1 : 0);
  if (dim < 1) throw std::runtime_error("no coordinate columns in " + path);

  std::vector<double> values;
  std::vector<int> labels;
  Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (Index j = 0; j < dim; ++j) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("short row in " + path);
      values.push_back(std::stod(cell));
    }
    if (has_label) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("missing label in " + path);
      labels.push_back(std::stoi(cell));
    }
    ++rows;
  }

  PointCloud<double> cloud;
  cloud.points.resize(rows, dim);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < dim; ++j) cloud.points(i, j) = values[i * dim + j];
  cloud.labels = std::move(labels);
  return cloud;
}

inline nlohmann::json matrix_to_json(const Matrix<double>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix<double> matrix_from_json(const nlohmann::json& rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r > 0 ? static_cast<Index>(rows[0].size()) : 0;
  Matrix<double> m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace fsc
