#include "qf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qf {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_matrix(std::ostringstream& os, const Mat& m) {
  os << "[";
  bool first = true;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!first) os << ",";
      first = false;
      os << "[" << format_double(m(i, j).real()) << ","
         << format_double(m(i, j).imag()) << "]";
    }
  os << "]";
}

Mat parse_matrix(const nlohmann::json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n)
    throw ConfigError("snapshot: matrix entry count mismatch");
  Mat m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c, ++k) {
      const auto& e = j[k];
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("snapshot: matrix entries must be [re, im] pairs");
      m(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

}  // namespace

std::string snapshot_to_json(const Grid& grid, const Mat& gamma, const Mat& alpha) {
  std::ostringstream os;
  os << "{\"n\":" << grid.n() << ",\"dim\":" << grid.dim()
     << ",\"box_length\":" << format_double(grid.box_length()) << ",\"gamma\":";
  append_matrix(os, gamma);
  os << ",\"alpha\":";
  append_matrix(os, alpha);
  os << "}\n";
  return os.str();
}

void write_snapshot(const std::string& path, const Grid& grid, const Mat& gamma,
                    const Mat& alpha) {
  write_text_file(path, snapshot_to_json(grid, gamma, alpha));
}

Snapshot read_snapshot(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  Snapshot s;
  s.n = j.at("n").get<int>();
  s.dim = j.at("dim").get<int>();
  s.box_length = j.at("box_length").get<double>();
  s.gamma = parse_matrix(j.at("gamma"), s.n);
  s.alpha = parse_matrix(j.at("alpha"), s.n);
  return s;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream os;
  os << "t,tr_gamma,energy,purity_defect,alpha_s2,spec_drift,unitarity_residual\n";
  for (const auto& p : traj.points) {
    os << format_double(p.t) << "," << format_double(p.tr_gamma) << ","
       << format_double(p.energy) << "," << format_double(p.purity_defect) << ","
       << format_double(p.alpha_s2) << "," << format_double(p.spec_drift) << ",";
    if (p.unitarity_residual) os << format_double(*p.unitarity_residual);
    os << "\n";
  }
  write_text_file(path, os.str());
}

void write_hfb_trajectory_csv(const std::string& path, const HFBTrajectory& traj) {
  std::ostringstream os;
  // no bosonic energy functional is defined; the column stays empty
  os << "t,total_N,energy_placeholder,purity_quantity,bog_residual\n";
  for (const auto& p : traj.points) {
    os << format_double(p.t) << "," << format_double(p.total_n) << ",,"
       << format_double(p.purity_quantity) << "," << format_double(p.bogoliubov_residual)
       << "\n";
  }
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("io: cannot open '" + path + "' for writing");
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("io: cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace qf
