#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mflow/field.hpp"

namespace mflow {

// FLD1 field container: magic "FLD1", u32 dim, u32 components, u32 N,
// f64 L, then components x N^dim f64 payload in row-major node order.
// Little-endian, bit-exact round trip.
void save_fld(const std::filesystem::path& path, const Field& f);
Field load_fld(const std::filesystem::path& path);

// CSV with a header row, UTF-8, LF line endings, full double precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Static line plot; log-log axes when loglog is set (non-positive points are
// dropped there).
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool loglog);

}  // namespace mflow
