#include "mflow/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mflow {

static_assert(std::endian::native == std::endian::little,
              "FLD1 writer assumes a little-endian host");

namespace {

void io_fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error("FLD1 " + what + ": " + path.string());
}

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_fld(const std::filesystem::path& path, const Field& f) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) io_fail(path, "open for write failed");
    os.write("FLD1", 4);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.components()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().npts));
    put<double>(os, f.grid().length);
    const auto raw = f.raw();
    os.write(reinterpret_cast<const char*>(raw.data()),
             static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!os) io_fail(path, "write failed");
}

Field load_fld(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) io_fail(path, "open for read failed");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "FLD1", 4) != 0) io_fail(path, "bad magic");
    const auto dim = get<std::uint32_t>(is);
    const auto comps = get<std::uint32_t>(is);
    const auto n = get<std::uint32_t>(is);
    const auto length = get<double>(is);
    if (!is) io_fail(path, "truncated header");

    GridSpec g;
    g.dim = static_cast<int>(dim);
    g.npts = static_cast<int>(n);
    g.length = length;
    g.validate();
    if (comps < 1 || comps > 16) io_fail(path, "implausible component count");

    Field f(g, static_cast<int>(comps));
    auto raw = f.raw();
    is.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!is) io_fail(path, "truncated payload");
    return f;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("CSV open for write failed: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << header[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("CSV write failed: " + path.string());
}

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool loglog) {
    const int W = 720, H = 480;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    auto tx = [&](double v) { return loglog ? std::log10(v) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (loglog && (x <= 0.0 || y <= 0.0)) continue;
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, tx(y));
            ymax = std::max(ymax, tx(y));
        }
    if (!(xmin < xmax)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymin < ymax)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
        xmin = ymin = 0.0;
        xmax = ymax = 1.0;
    }

    auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (tx(v) - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
       << (loglog ? " (log10)" : "") << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
       << "transform=\"rotate(-90 16 " << H / 2 << ")\">" << ylabel
       << (loglog ? " (log10)" : "") << "</text>\n";
    // frame and ticks
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
       << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double sx = ml + (W - ml - mr) * i / 4.0;
        const double sy = H - mb - (H - mt - mb) * i / 4.0;
        os << "<text x=\"" << sx << "\" y=\"" << H - mb + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(fx).substr(0, 8)
           << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << sy + 3
           << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(fy).substr(0, 8)
           << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        std::ostringstream pts;
        for (const auto& [x, y] : s.points) {
            if (loglog && (x <= 0.0 || y <= 0.0)) continue;
            pts << px(x) << ',' << py(y) << ' ';
        }
        const char* col = colors[ci % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\""
           << pts.str() << "\"/>\n";
        os << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 14 * ci
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << col << "\">" << s.label
           << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("SVG open for write failed: " + path.string());
    out << os.str();
    if (!out) throw std::runtime_error("SVG write failed: " + path.string());
}

}  // namespace mflow
