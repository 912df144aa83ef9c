#include "privwave/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace privwave {

std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_points_csv(const std::string& path, const PointSet& data) {
  std::ofstream out = open_out(path);
  out << "x,y\n";
  for (const Point& pt : data.points)
    out << fmt_double(pt.x) << "," << fmt_double(pt.y) << "\n";
}

void write_label_matrix(const std::string& path, const GridClustering& c) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < c.rows; ++i) {
    for (int j = 0; j < c.cols; ++j) {
      if (j) out << ",";
      out << c.label_at(i, j);
    }
    out << "\n";
  }
}

GridClustering read_label_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  GridClustering c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    int cols = 0;
    while (std::getline(row, field, ',')) {
      c.labels.push_back(std::stoi(field));
      ++cols;
    }
    if (c.rows == 0) {
      c.cols = cols;
    } else if (cols != c.cols) {
      throw std::runtime_error("label matrix '" + path + "': ragged row " +
                               std::to_string(c.rows + 1));
    }
    ++c.rows;
  }
  if (c.labels.empty()) throw std::runtime_error("label matrix '" + path + "' is empty");

  // Rebuild cluster member lists; ids keep their on-disk numbering order.
  std::vector<int> ids;
  for (std::size_t idx = 0; idx < c.labels.size(); ++idx) {
    int l = c.labels[idx];
    if (l == 0) continue;
    auto it = std::find(ids.begin(), ids.end(), l);
    std::size_t pos;
    if (it == ids.end()) {
      ids.push_back(l);
      c.clusters.emplace_back();
      pos = ids.size() - 1;
    } else {
      pos = static_cast<std::size_t>(it - ids.begin());
    }
    c.clusters[pos].push_back(static_cast<int>(idx));
  }
  c.cluster_count = static_cast<int>(c.clusters.size());
  return c;
}

void write_subband(const std::string& csv_path, const std::string& json_path,
                   const Subband& s) {
  std::ofstream csv = open_out(csv_path);
  for (int i = 0; i < s.rows; ++i) {
    for (int j = 0; j < s.cols; ++j) {
      if (j) csv << ",";
      csv << fmt_double(s.at(i, j));
    }
    csv << "\n";
  }
  std::ofstream sidecar = open_out(json_path);
  sidecar << "{\"l_size\":" << s.positives_sorted.size() << ",\"zcount\":" << s.zcount
          << "}\n";
}

}  // namespace privwave
