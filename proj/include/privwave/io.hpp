#pragma once

#include <string>
#include <vector>

#include "privwave/wavecluster.hpp"

namespace privwave {

// Shortest representation that round-trips a double; used everywhere output
// must be byte-stable across runs.
std::string fmt_double(double v);

void write_points_csv(const std::string& path, const PointSet& data);

// Cell labels as integer rows, one row per subband row.
void write_label_matrix(const std::string& path, const GridClustering& c);
GridClustering read_label_matrix(const std::string& path);

// Subband values as CSV plus a {"l_size": n, "zcount": m} sidecar.
void write_subband(const std::string& csv_path, const std::string& json_path,
                   const Subband& s);

}  // namespace privwave
