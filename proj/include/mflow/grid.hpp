#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace mflow {

// Periodic box [-L/2, L/2)^dim with N nodes per axis at x_j = -L/2 + j*h,
// h = L/N. The box is centered at the origin so balls |x| < R are natural.
//
// Spectral convention: DFT bin m carries the signed integer frequency
// m (m < N/2), m - N (m > N/2), and the Nyquist bin m = N/2 is mapped to
// frequency 0. Building every multiplier from the same zeroed-Nyquist
// wavenumber array keeps all operators commuting exactly and keeps
// odd-order derivatives of real fields real.
struct GridSpec {
    int dim = 2;
    int npts = 128;                            // nodes per axis; power of two, >= 8
    double length = 2.0 * std::numbers::pi;    // box side L
    bool dealias = true;                       // 2/3-rule truncation of products

    void validate() const;

    double spacing() const { return length / npts; }
    std::size_t node_count() const;
    double node_coord(int j) const { return -0.5 * length + j * spacing(); }
    double two_pi_over_length() const { return 2.0 * std::numbers::pi / length; }

    int signed_freq(int m) const {
        if (2 * m == npts) return 0;
        return (2 * m < npts) ? m : m - npts;
    }
    // Odd (i k) factors use the zeroed-Nyquist wavenumber; even |k|^2
    // multipliers (heat, Laplacian and its inverse) use the full magnitude so
    // full-spectrum data (discrete deltas) damps physically.
    double wavenumber(int m) const { return two_pi_over_length() * signed_freq(m); }
    double wavenumber_full(int m) const {
        const int s = (2 * m == npts) ? npts / 2 : signed_freq(m);
        return two_pi_over_length() * s;
    }

    // Minimum-image displacement of a coordinate difference.
    double wrap(double dx) const;
    double min_image_distance(const std::array<double, 3>& a,
                              const std::array<double, 3>& b) const;

    bool same_geometry(const GridSpec& o) const {
        return dim == o.dim && npts == o.npts && length == o.length;
    }
};

// Row-major flat node indexing, last axis fastest.
struct NodeIndexer {
    int dim;
    int n;
    explicit NodeIndexer(const GridSpec& g) : dim(g.dim), n(g.npts) {}
    std::size_t flat(const std::array<int, 3>& idx) const {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d) f = f * n + idx[d];
        return f;
    }
    std::array<int, 3> unflat(std::size_t f) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int d = dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(f % n);
            f /= n;
        }
        return idx;
    }
};

std::array<double, 3> node_position(const GridSpec& g, std::size_t flat);

struct MultiIndex {
    std::array<int, 3> a{0, 0, 0};
    int dim = 2;

    int order() const { return a[0] + a[1] + a[2]; }
    static MultiIndex zero(int dim) { return MultiIndex{{0, 0, 0}, dim}; }
    static MultiIndex unit(int dim, int axis) {
        MultiIndex m{{0, 0, 0}, dim};
        m.a[axis] = 1;
        return m;
    }
};

bool operator==(const MultiIndex& x, const MultiIndex& y);
MultiIndex operator+(const MultiIndex& x, const MultiIndex& y);

// All multi-indices of dimension dim with min_order <= |alpha| <= max_order,
// ordered by total order, then lexicographically.
std::vector<MultiIndex> multi_indices(int dim, int min_order, int max_order);

std::string to_string(const MultiIndex& m);

}  // namespace mflow
