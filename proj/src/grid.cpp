#include "mflow/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace mflow {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

void GridSpec::validate() const {
    if (dim != 2 && dim != 3) throw std::invalid_argument("GridSpec: dim must be 2 or 3");
    if (npts < 8 || !is_power_of_two(npts))
        throw std::invalid_argument("GridSpec: npts must be a power of two >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("GridSpec: length must be positive");
}

std::size_t GridSpec::node_count() const {
    std::size_t c = 1;
    for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(npts);
    return c;
}

double GridSpec::wrap(double dx) const {
    const double L = length;
    dx = std::fmod(dx, L);
    if (dx < -0.5 * L) dx += L;
    if (dx >= 0.5 * L) dx -= L;
    return dx;
}

double GridSpec::min_image_distance(const std::array<double, 3>& a,
                                    const std::array<double, 3>& b) const {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        const double dx = wrap(a[d] - b[d]);
        s += dx * dx;
    }
    return std::sqrt(s);
}

std::array<double, 3> node_position(const GridSpec& g, std::size_t flat) {
    const NodeIndexer ix(g);
    const auto idx = ix.unflat(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) x[d] = g.node_coord(idx[d]);
    return x;
}

bool operator==(const MultiIndex& x, const MultiIndex& y) {
    return x.dim == y.dim && x.a == y.a;
}

MultiIndex operator+(const MultiIndex& x, const MultiIndex& y) {
    MultiIndex r{{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2]}, x.dim};
    return r;
}

std::vector<MultiIndex> multi_indices(int dim, int min_order, int max_order) {
    std::vector<MultiIndex> out;
    for (int k = min_order; k <= max_order; ++k) {
        if (dim == 2) {
            for (int a0 = k; a0 >= 0; --a0) out.push_back(MultiIndex{{a0, k - a0, 0}, 2});
        } else {
            for (int a0 = k; a0 >= 0; --a0)
                for (int a1 = k - a0; a1 >= 0; --a1)
                    out.push_back(MultiIndex{{a0, a1, k - a0 - a1}, 3});
        }
    }
    return out;
}

std::string to_string(const MultiIndex& m) {
    std::string s = "(";
    for (int d = 0; d < m.dim; ++d) {
        if (d) s += ",";
        s += std::to_string(m.a[d]);
    }
    s += ")";
    return s;
}

}  // namespace mflow
