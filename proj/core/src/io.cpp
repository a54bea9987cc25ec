#include "greedyjump/io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "greedyjump/literals.hpp"

namespace greedyjump {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::random_device rd;
    const fs::path tmp = path.string() + ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string csv_row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_real(values[i]);
    }
    line += '\n';
    return line;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "step";
    if (!traj.norms_only) {
        for (std::size_t i = 1; i <= traj.dim; ++i) out += ",x" + std::to_string(i);
    }
    out += ",norm,sign\n";
    for (std::size_t k = 0; k < traj.norms.size(); ++k) {
        out += std::to_string(traj.label(k));
        if (!traj.norms_only) {
            for (double c : traj.states[k].coords()) out += ',' + format_real(c);
        }
        out += ',' + format_real(traj.norms[k]);
        out += ',' + std::to_string(k == 0 ? 0 : traj.signs[k - 1]);
        out += '\n';
    }
    return out;
}

std::string samples_csv(const Trajectory& traj) {
    std::string out = "step";
    for (std::size_t i = 1; i <= traj.dim; ++i) out += ",x" + std::to_string(i);
    out += '\n';
    std::vector<LabeledPoint> sorted = traj.samples;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    for (const LabeledPoint& s : sorted) {
        out += std::to_string(s.label);
        for (double c : s.point.coords()) out += ',' + format_real(c);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const RadialHistogram& hist) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        out += format_real(hist.bin_edges[i]) + ',' + format_real(hist.bin_edges[i + 1]) + ',' +
               std::to_string(hist.counts[i]) + '\n';
    }
    return out;
}

std::string density_csv(const DensityGrid& grid) {
    std::string out = "node,value,weight\n";
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        out += format_real(grid.nodes[i]) + ',' + format_real(grid.values[i]) + ',' + format_real(grid.weights[i]) +
               '\n';
    }
    return out;
}

std::string raster_csv(const std::vector<RasterCell>& cells) {
    std::string out = "x,y,periodic_flag,return_error\n";
    for (const RasterCell& c : cells) {
        out += format_real(c.x) + ',' + format_real(c.y) + ',' + (c.periodic ? "1" : "0") + ',' +
               format_real(c.return_error) + '\n';
    }
    return out;
}

}  // namespace greedyjump
