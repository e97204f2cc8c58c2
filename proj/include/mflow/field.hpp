#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mflow/grid.hpp"

namespace mflow {

// Real field sampled at grid nodes, component-major flat storage.
// 1 component = scalar, dim = vector, dim*dim = tensor with entry (i,j)
// stored at component i*dim + j.
class Field {
public:
    Field() = default;
    Field(const GridSpec& grid, int components);

    static Field scalar(const GridSpec& g) { return Field(g, 1); }
    static Field vector(const GridSpec& g) { return Field(g, g.dim); }
    static Field tensor(const GridSpec& g) { return Field(g, g.dim * g.dim); }

    const GridSpec& grid() const { return grid_; }
    int components() const { return comps_; }
    std::size_t nodes() const { return nodes_; }
    bool empty() const { return v_.empty(); }

    double& operator()(int c, std::size_t node) { return v_[c * nodes_ + node]; }
    const double& operator()(int c, std::size_t node) const { return v_[c * nodes_ + node]; }

    std::span<double> component(int c) { return {v_.data() + c * nodes_, nodes_}; }
    std::span<const double> component(int c) const { return {v_.data() + c * nodes_, nodes_}; }
    std::span<double> raw() { return v_; }
    std::span<const double> raw() const { return v_; }

    // Euclidean magnitude over components at one node.
    double magnitude(std::size_t node) const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

private:
    GridSpec grid_{};
    int comps_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> v_;
};

// The spec's field family; distinguished by component count at run time.
using ScalarField = Field;
using VectorField = Field;
using TensorField = Field;

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

void check_same_layout(const Field& a, const Field& b, const char* what);
void require_components(const Field& f, int c, const char* what);

// Norms use the grid measure h^dim; pointwise magnitudes are Euclidean
// over components.
double linf_norm(const Field& f);
double l2_norm(const Field& f);
double l1_norm(const Field& f);
double inner(const Field& a, const Field& b);
double component_mean(const Field& f, int c);
bool all_finite(const Field& f);

// Exact discrete Fourier coefficients of a Field: coefficient of mode m is
// (1/N^dim) sum_j f_j e^{-2*pi*i*j.m/N}, so a pure mode e^{ik_m.x} has unit
// coefficient. Spectra are produced only by fft(), which keeps the
// "spectral cache = exact DFT of values" invariant true by construction.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(const GridSpec& grid, int components);

    const GridSpec& grid() const { return grid_; }
    int components() const { return comps_; }
    std::size_t modes() const { return modes_; }

    std::complex<double>& operator()(int c, std::size_t m) { return c_[c * modes_ + m]; }
    const std::complex<double>& operator()(int c, std::size_t m) const {
        return c_[c * modes_ + m];
    }
    std::span<std::complex<double>> component(int c) { return {c_.data() + c * modes_, modes_}; }
    std::span<const std::complex<double>> component(int c) const {
        return {c_.data() + c * modes_, modes_};
    }

    Spectrum& operator+=(const Spectrum& o);
    Spectrum& operator*=(double s);

private:
    GridSpec grid_{};
    int comps_ = 0;
    std::size_t modes_ = 0;
    std::vector<std::complex<double>> c_;
};

Spectrum fft(const Field& f);
Field ifft(const Spectrum& s);  // discards the imaginary residue

}  // namespace mflow
