#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "greedyjump/io.hpp"

using namespace greedyjump;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Io, AtomicWriteCreatesParentsAndReplaces) {
    const auto dir = std::filesystem::temp_directory_path() / "greedyjump_io_test";
    std::filesystem::remove_all(dir);
    const auto file = dir / "nested" / "out.txt";
    write_file_atomic(file, "first");
    write_file_atomic(file, "second");
    EXPECT_EQ(slurp(file), "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "nested")) ++entries;
    EXPECT_EQ(entries, 1u);
    std::filesystem::remove_all(dir);
}

TEST(Io, TrajectoryCsvColumns) {
    const Trajectory t = simulate({3.0, 4.0}, SourceSpec::van_der_corput(2), 2);
    const auto rows = lines(trajectory_csv(t));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "step,x1,x2,norm,sign");
    EXPECT_EQ(rows[1], "-1,3,4,5,0");
    EXPECT_EQ(rows[2], "0,2,4," + format_real(std::sqrt(20.0)) + ",-1");

    SimulateOptions opt;
    opt.norms_only = true;
    const auto thin = lines(trajectory_csv(simulate({3.0, 4.0}, SourceSpec::van_der_corput(2), 2, opt)));
    EXPECT_EQ(thin[0], "step,norm,sign");
    EXPECT_EQ(thin[1], "-1,5,0");
}

TEST(Io, HistogramCsvCountsSumToSamples) {
    McOptions opt;
    opt.n_steps = 5000;
    opt.burn_in = 100;
    opt.bins = 10;
    const RadialHistogram h = mc_invariant(opt);
    const auto rows = lines(histogram_csv(h));
    ASSERT_EQ(rows.front(), "bin_left,bin_right,count");
    std::uint64_t total = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) total += std::stoull(rows[i].substr(rows[i].rfind(',') + 1));
    EXPECT_EQ(total + h.overflow, h.n_samples);
}

TEST(Io, CsvRowUsesShortestRoundTrip) {
    EXPECT_EQ(csv_row({0.1, 2.0, -3.5}), "0.1,2,-3.5\n");
}
