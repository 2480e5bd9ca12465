#include "vvlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vvlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out << ',';
    out << format_number(values[k]);
  }
  out << '\n';
}

void write_snapshot_rows(std::ostream& out, const Grid1D& grid, const Snapshot& s,
                         bool vacuum_column) {
  for (int i = 0; i < grid.n_cells(); ++i) {
    const State st = s.state(i);
    const bool vac = st.is_vacuum();
    out << format_number(s.t) << ',' << format_number(grid.x(i)) << ',' << format_number(st.rho) << ','
        << format_number(vac ? 0.0 : st.m) << ',' << format_number(st.velocity());
    if (vacuum_column) out << ',' << (vac ? 1 : 0);
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool vacuum_column) {
  std::ostringstream os;
  os << (vacuum_column ? "t,x,rho,m,u,vacuum\n" : "t,x,rho,m,u\n");
  for (const Snapshot& s : traj.snapshots) write_snapshot_rows(os, traj.grid, s, vacuum_column);
  write_text_file(path, os.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace vvlab
