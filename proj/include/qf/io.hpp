#pragma once

#include <string>

#include "qf/dynamics_bose.hpp"
#include "qf/dynamics_fermi.hpp"
#include "qf/state.hpp"

namespace qf {

// All numbers are written with 17 significant digits so that doubles
// round-trip bit-exactly through the text formats.
std::string format_double(double v);

// state snapshot: manifest with n, dim, box_length and row-major [re, im]
// arrays for gamma and alpha
std::string snapshot_to_json(const Grid& grid, const Mat& gamma, const Mat& alpha);
void write_snapshot(const std::string& path, const Grid& grid, const Mat& gamma,
                    const Mat& alpha);

struct Snapshot {
  int n = 0;
  int dim = 0;
  double box_length = 0.0;
  Mat gamma;
  Mat alpha;
};

Snapshot read_snapshot(const std::string& path);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_hfb_trajectory_csv(const std::string& path, const HFBTrajectory& traj);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qf
