#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "vvlab/field.hpp"

namespace vvlab {

/// Shortest decimal text that reads back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_number(double v);

/// Comma-separated values followed by a newline.
void write_csv_row(std::ostream& out, std::span<const double> values);

/// Rows "t,x,rho,m,u" (plus ",vacuum" when requested) for every cell of the snapshot.
void write_snapshot_rows(std::ostream& out, const Grid1D& grid, const Snapshot& s,
                         bool vacuum_column);
/// All snapshots of a trajectory in one CSV file with a header line.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          bool vacuum_column);

/// Writes text to a file, creating parent directories. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace vvlab
