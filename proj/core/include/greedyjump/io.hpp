#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "greedyjump/greedy.hpp"
#include "greedyjump/radial.hpp"
#include "greedyjump/vdc_geometry.hpp"

namespace greedyjump {

/// Writes to a temporary sibling and renames it over `path`, so readers
/// never observe a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// step,x1..xd,norm,sign (or step,norm,sign for norms-only runs). The sign
/// column holds the sign of the step that produced the row; 0 for the start.
std::string trajectory_csv(const Trajectory& traj);

/// label,x1..xd for the reservoir samples of a norms-only run.
std::string samples_csv(const Trajectory& traj);

/// bin_left,bin_right,count
std::string histogram_csv(const RadialHistogram& hist);

/// node,value,weight
std::string density_csv(const DensityGrid& grid);

/// x,y,periodic_flag,return_error
std::string raster_csv(const std::vector<RasterCell>& cells);

/// One line per row of a table: values joined by commas, shortest round-trip form.
std::string csv_row(const std::vector<double>& values);

}  // namespace greedyjump
