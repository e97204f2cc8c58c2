#include "mflow/operators.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace mflow {
namespace {

using cplx = std::complex<double>;

// Iterates modes of a spectrum; cb(flat, k, ksq_full) with k the
// zeroed-Nyquist wavenumber vector and ksq_full the unzeroed |k|^2.
template <typename F>
void for_each_mode(const GridSpec& g, F&& cb) {
    const int n = g.npts;
    std::array<double, 3> k{0.0, 0.0, 0.0};
    std::array<double, 3> kf{0.0, 0.0, 0.0};
    if (g.dim == 2) {
        std::size_t flat = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            k[0] = g.wavenumber(m0);
            kf[0] = g.wavenumber_full(m0);
            for (int m1 = 0; m1 < n; ++m1, ++flat) {
                k[1] = g.wavenumber(m1);
                kf[1] = g.wavenumber_full(m1);
                cb(flat, k, kf[0] * kf[0] + kf[1] * kf[1]);
            }
        }
    } else {
        std::size_t flat = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            k[0] = g.wavenumber(m0);
            kf[0] = g.wavenumber_full(m0);
            for (int m1 = 0; m1 < n; ++m1) {
                k[1] = g.wavenumber(m1);
                kf[1] = g.wavenumber_full(m1);
                for (int m2 = 0; m2 < n; ++m2, ++flat) {
                    k[2] = g.wavenumber(m2);
                    kf[2] = g.wavenumber_full(m2);
                    cb(flat, k, kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2]);
                }
            }
        }
    }
}

double ksq(const std::array<double, 3>& k, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += k[d] * k[d];
    return s;
}

bool want_dealias(const GridSpec& g, Dealias mode) {
    switch (mode) {
        case Dealias::follow_grid: return g.dealias;
        case Dealias::on: return true;
        case Dealias::off: return false;
    }
    return g.dealias;
}

Field maybe_dealias(Field f, Dealias mode) {
    if (want_dealias(f.grid(), mode)) return dealias_truncate(f);
    return f;
}

}  // namespace

void apply_heat(Spectrum& s, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    if (t == 0.0) return;
    const GridSpec& g = s.grid();
    std::vector<double> mult(s.modes());
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>&, double ksq_full) {
        mult[flat] = std::exp(-ksq_full * t);
    });
    for (int c = 0; c < s.components(); ++c) {
        auto sc = s.component(c);
        for (std::size_t i = 0; i < sc.size(); ++i) sc[i] *= mult[i];
    }
}

void apply_inverse_laplacian(Spectrum& s) {
    const GridSpec& g = s.grid();
    std::vector<double> mult(s.modes());
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>&, double ksq_full) {
        mult[flat] = (ksq_full > 0.0) ? 1.0 / ksq_full : 0.0;
    });
    for (int c = 0; c < s.components(); ++c) {
        auto sc = s.component(c);
        for (std::size_t i = 0; i < sc.size(); ++i) sc[i] *= mult[i];
    }
}

void apply_laplacian(Spectrum& s) {
    const GridSpec& g = s.grid();
    std::vector<double> mult(s.modes());
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>&, double ksq_full) {
        mult[flat] = -ksq_full;
    });
    for (int c = 0; c < s.components(); ++c) {
        auto sc = s.component(c);
        for (std::size_t i = 0; i < sc.size(); ++i) sc[i] *= mult[i];
    }
}

void apply_partial(Spectrum& s, const MultiIndex& alpha) {
    const GridSpec& g = s.grid();
    std::vector<cplx> mult(s.modes());
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        cplx m{1.0, 0.0};
        for (int d = 0; d < g.dim; ++d)
            for (int r = 0; r < alpha.a[d]; ++r) m *= cplx{0.0, k[d]};
        mult[flat] = m;
    });
    for (int c = 0; c < s.components(); ++c) {
        auto sc = s.component(c);
        for (std::size_t i = 0; i < sc.size(); ++i) sc[i] *= mult[i];
    }
}

void apply_leray(Spectrum& vec) {
    const GridSpec& g = vec.grid();
    const int n = g.dim;
    if (vec.components() != n)
        throw std::invalid_argument("apply_leray: vector spectrum expected");
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        const double k2 = ksq(k, n);
        if (k2 == 0.0) return;  // zero mode (and zeroed Nyquist) passes through
        cplx kdotv{0.0, 0.0};
        for (int d = 0; d < n; ++d) kdotv += k[d] * vec(d, flat);
        for (int d = 0; d < n; ++d) vec(d, flat) -= (k[d] / k2) * kdotv;
    });
}

void apply_dealias(Spectrum& s) {
    const GridSpec& g = s.grid();
    const int cutoff = g.npts / 3;
    std::vector<char> kill(s.modes(), 0);
    const NodeIndexer ix(g);
    for (std::size_t flat = 0; flat < s.modes(); ++flat) {
        const auto idx = ix.unflat(flat);
        for (int d = 0; d < g.dim; ++d) {
            const int m = idx[d];
            const int sf = (2 * m == g.npts) ? g.npts / 2 : g.signed_freq(m);
            if (std::abs(sf) > cutoff) {
                kill[flat] = 1;
                break;
            }
        }
    }
    for (int c = 0; c < s.components(); ++c) {
        auto sc = s.component(c);
        for (std::size_t i = 0; i < sc.size(); ++i)
            if (kill[i]) sc[i] = {0.0, 0.0};
    }
}

Spectrum divergence_of_tensor(const Spectrum& tensor) {
    const GridSpec& g = tensor.grid();
    const int n = g.dim;
    if (tensor.components() != n * n)
        throw std::invalid_argument("divergence_of_tensor: tensor spectrum expected");
    Spectrum out(g, n);
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        for (int i = 0; i < n; ++i) {
            cplx acc{0.0, 0.0};
            for (int j = 0; j < n; ++j) acc += cplx{0.0, k[j]} * tensor(i * n + j, flat);
            out(i, flat) = acc;
        }
    });
    return out;
}

Spectrum deformation_of_vector(const Spectrum& vec) {
    const GridSpec& g = vec.grid();
    const int n = g.dim;
    if (vec.components() != n)
        throw std::invalid_argument("deformation_of_vector: vector spectrum expected");
    Spectrum out(g, n * n);
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i * n + j, flat) = cplx{0.0, k[i]} * vec(j, flat);
    });
    return out;
}

VectorField gradient(const ScalarField& f) {
    require_components(f, 1, "gradient");
    const GridSpec& g = f.grid();
    Spectrum s = fft(f);
    Spectrum out(g, g.dim);
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        for (int d = 0; d < g.dim; ++d) out(d, flat) = cplx{0.0, k[d]} * s(0, flat);
    });
    return ifft(out);
}

TensorField deformation_tensor(const VectorField& v) {
    require_components(v, v.grid().dim, "deformation_tensor");
    return ifft(deformation_of_vector(fft(v)));
}

ScalarField divergence(const VectorField& v) {
    const GridSpec& g = v.grid();
    require_components(v, g.dim, "divergence");
    Spectrum s = fft(v);
    Spectrum out(g, 1);
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        cplx acc{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d) acc += cplx{0.0, k[d]} * s(d, flat);
        out(0, flat) = acc;
    });
    return ifft(out);
}

VectorField tensor_divergence(const TensorField& t) {
    const GridSpec& g = t.grid();
    require_components(t, g.dim * g.dim, "tensor_divergence");
    return ifft(divergence_of_tensor(fft(t)));
}

Field laplacian(const Field& f) {
    Spectrum s = fft(f);
    apply_laplacian(s);
    return ifft(s);
}

Field heat_semigroup(const Field& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    if (t == 0.0) return f;
    Spectrum s = fft(f);
    apply_heat(s, t);
    return ifft(s);
}

VectorField leray_project(const VectorField& v) {
    const GridSpec& g = v.grid();
    require_components(v, g.dim, "leray_project");
    Spectrum s = fft(v);
    apply_leray(s);
    return ifft(s);
}

ScalarField riesz_riesz(const ScalarField& f, int i, int j) {
    require_components(f, 1, "riesz_riesz");
    const GridSpec& g = f.grid();
    if (i < 0 || i >= g.dim || j < 0 || j >= g.dim)
        throw std::invalid_argument("riesz_riesz: axis out of range");
    Spectrum s = fft(f);
    for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& k, double) {
        const double k2 = ksq(k, g.dim);
        s(0, flat) *= (k2 > 0.0) ? -k[i] * k[j] / k2 : 0.0;
    });
    return ifft(s);
}

Field inverse_laplacian(const Field& f) {
    Spectrum s = fft(f);
    apply_inverse_laplacian(s);
    return ifft(s);
}

Field partial_alpha(const Field& f, const MultiIndex& alpha, int max_order) {
    if (alpha.dim != f.grid().dim)
        throw std::invalid_argument("partial_alpha: multi-index dimension mismatch");
    for (int d = 0; d < alpha.dim; ++d)
        if (alpha.a[d] < 0) throw std::invalid_argument("partial_alpha: negative entry");
    if (alpha.order() > max_order)
        throw std::invalid_argument("partial_alpha: order " + std::to_string(alpha.order()) +
                                    " exceeds the resolution guard (" +
                                    std::to_string(max_order) + ")");
    if (alpha.order() == 0) return f;
    Spectrum s = fft(f);
    apply_partial(s, alpha);
    return ifft(s);
}

Field dealias_truncate(const Field& f) {
    Spectrum s = fft(f);
    apply_dealias(s);
    return ifft(s);
}

TensorField odot(const TensorField& a, const TensorField& b, Dealias mode) {
    check_same_layout(a, b, "odot");
    const int n = a.grid().dim;
    require_components(a, n * n, "odot");
    TensorField out = Field::tensor(a.grid());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto dst = out.component(i * n + j);
            for (int k = 0; k < n; ++k) {
                const auto ai = a.component(i * n + k);
                const auto bj = b.component(j * n + k);
                for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += ai[x] * bj[x];
            }
        }
    return maybe_dealias(std::move(out), mode);
}

TensorField outer_product(const VectorField& u, const VectorField& v, Dealias mode) {
    check_same_layout(u, v, "outer_product");
    const int n = u.grid().dim;
    require_components(u, n, "outer_product");
    TensorField out = Field::tensor(u.grid());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto dst = out.component(i * n + j);
            const auto ui = u.component(i);
            const auto vj = v.component(j);
            for (std::size_t x = 0; x < dst.size(); ++x) dst[x] = ui[x] * vj[x];
        }
    return maybe_dealias(std::move(out), mode);
}

VectorField contract_vector_tensor(const VectorField& u, const TensorField& V, Dealias mode) {
    if (!u.grid().same_geometry(V.grid()))
        throw std::invalid_argument("contract_vector_tensor: grid mismatch");
    const int n = u.grid().dim;
    require_components(u, n, "contract_vector_tensor");
    require_components(V, n * n, "contract_vector_tensor");
    VectorField out = Field::vector(u.grid());
    for (int j = 0; j < n; ++j) {
        auto dst = out.component(j);
        for (int i = 0; i < n; ++i) {
            const auto ui = u.component(i);
            const auto vij = V.component(i * n + j);
            for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += ui[x] * vij[x];
        }
    }
    return maybe_dealias(std::move(out), mode);
}

ScalarField frobenius_inner(const TensorField& a, const TensorField& b, Dealias mode) {
    check_same_layout(a, b, "frobenius_inner");
    const int n = a.grid().dim;
    require_components(a, n * n, "frobenius_inner");
    ScalarField out = Field::scalar(a.grid());
    auto dst = out.component(0);
    for (int c = 0; c < n * n; ++c) {
        const auto ac = a.component(c);
        const auto bc = b.component(c);
        for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += ac[x] * bc[x];
    }
    return maybe_dealias(std::move(out), mode);
}

Field scalar_multiply(const ScalarField& s, const Field& f, Dealias mode) {
    require_components(s, 1, "scalar_multiply");
    if (!s.grid().same_geometry(f.grid()))
        throw std::invalid_argument("scalar_multiply: grid mismatch");
    Field out(f.grid(), f.components());
    const auto sv = s.component(0);
    for (int c = 0; c < f.components(); ++c) {
        auto dst = out.component(c);
        const auto src = f.component(c);
        for (std::size_t x = 0; x < dst.size(); ++x) dst[x] = sv[x] * src[x];
    }
    return maybe_dealias(std::move(out), mode);
}

ScalarField extract_component(const Field& f, int c) {
    if (c < 0 || c >= f.components())
        throw std::invalid_argument("extract_component: component out of range");
    ScalarField out = Field::scalar(f.grid());
    const auto src = f.component(c);
    auto dst = out.component(0);
    std::copy(src.begin(), src.end(), dst.begin());
    return out;
}

Field remove_mean(const Field& f) {
    Field out = f;
    for (int c = 0; c < f.components(); ++c) {
        const double m = component_mean(f, c);
        for (double& x : out.component(c)) x -= m;
    }
    return out;
}

}  // namespace mflow
