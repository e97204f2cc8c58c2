#include "mflow/field.hpp"

#include <cmath>
#include <stdexcept>

namespace mflow {

Field::Field(const GridSpec& grid, int components)
    : grid_(grid), comps_(components), nodes_(grid.node_count()) {
    grid_.validate();
    if (components < 1) throw std::invalid_argument("Field: components must be >= 1");
    v_.assign(static_cast<std::size_t>(comps_) * nodes_, 0.0);
}

double Field::magnitude(std::size_t node) const {
    double s = 0.0;
    for (int c = 0; c < comps_; ++c) {
        const double x = v_[c * nodes_ + node];
        s += x * x;
    }
    return std::sqrt(s);
}

void check_same_layout(const Field& a, const Field& b, const char* what) {
    if (!a.grid().same_geometry(b.grid()) || a.components() != b.components())
        throw std::invalid_argument(std::string(what) + ": field layout mismatch");
}

void require_components(const Field& f, int c, const char* what) {
    if (f.components() != c)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(c) +
                                    " components, got " + std::to_string(f.components()));
}

Field& Field::operator+=(const Field& o) {
    check_same_layout(*this, o, "Field::operator+=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    check_same_layout(*this, o, "Field::operator-=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double linf_norm(const Field& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.nodes(); ++i) m = std::max(m, f.magnitude(i));
    return m;
}

double l2_norm(const Field& f) {
    double s = 0.0;
    for (double x : f.raw()) s += x * x;
    return std::sqrt(s * std::pow(f.grid().spacing(), f.grid().dim));
}

double l1_norm(const Field& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.nodes(); ++i) s += f.magnitude(i);
    return s * std::pow(f.grid().spacing(), f.grid().dim);
}

double inner(const Field& a, const Field& b) {
    check_same_layout(a, b, "inner");
    double s = 0.0;
    const auto ra = a.raw();
    const auto rb = b.raw();
    for (std::size_t i = 0; i < ra.size(); ++i) s += ra[i] * rb[i];
    return s * std::pow(a.grid().spacing(), a.grid().dim);
}

double component_mean(const Field& f, int c) {
    double s = 0.0;
    for (double x : f.component(c)) s += x;
    return s / static_cast<double>(f.nodes());
}

bool all_finite(const Field& f) {
    for (double x : f.raw())
        if (!std::isfinite(x)) return false;
    return true;
}

Spectrum::Spectrum(const GridSpec& grid, int components)
    : grid_(grid), comps_(components), modes_(grid.node_count()) {
    grid_.validate();
    if (components < 1) throw std::invalid_argument("Spectrum: components must be >= 1");
    c_.assign(static_cast<std::size_t>(comps_) * modes_, {0.0, 0.0});
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
    if (!grid_.same_geometry(o.grid_) || comps_ != o.comps_)
        throw std::invalid_argument("Spectrum::operator+=: layout mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Spectrum& Spectrum::operator*=(double s) {
    for (auto& z : c_) z *= s;
    return *this;
}

}  // namespace mflow
