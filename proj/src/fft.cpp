#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "mflow/field.hpp"

namespace mflow {
namespace {

// FFTW's planner is not thread-safe; plans are cached per (dim, N, sign) and
// created with FFTW_UNALIGNED so they can execute on any buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const Key key{dim, n, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        std::vector<int> dims(dim, n);
        for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
        std::vector<std::complex<double>> scratch(total);
        fftw_plan p = fftw_plan_dft(
            dim, dims.data(), reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw_plan_dft failed");
        plans_.emplace(key, p);
        return p;
    }

private:
    struct Key {
        int dim, n, sign;
        bool operator<(const Key& o) const {
            if (dim != o.dim) return dim < o.dim;
            if (n != o.n) return n < o.n;
            return sign < o.sign;
        }
    };
    std::mutex mu_;
    std::map<Key, fftw_plan> plans_;
};

void dft_inplace(const GridSpec& g, std::complex<double>* data, int sign) {
    fftw_plan p = PlanCache::instance().get(g.dim, g.npts, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace

Spectrum fft(const Field& f) {
    Spectrum s(f.grid(), f.components());
    const double scale = 1.0 / static_cast<double>(f.nodes());
    std::vector<std::complex<double>> buf(f.nodes());
    for (int c = 0; c < f.components(); ++c) {
        const auto src = f.component(c);
        for (std::size_t i = 0; i < src.size(); ++i) buf[i] = {src[i], 0.0};
        dft_inplace(f.grid(), buf.data(), FFTW_FORWARD);
        auto dst = s.component(c);
        for (std::size_t i = 0; i < buf.size(); ++i) dst[i] = buf[i] * scale;
    }
    return s;
}

Field ifft(const Spectrum& s) {
    Field f(s.grid(), s.components());
    std::vector<std::complex<double>> buf(s.modes());
    for (int c = 0; c < s.components(); ++c) {
        const auto src = s.component(c);
        std::copy(src.begin(), src.end(), buf.begin());
        dft_inplace(s.grid(), buf.data(), FFTW_BACKWARD);
        auto dst = f.component(c);
        for (std::size_t i = 0; i < buf.size(); ++i) dst[i] = buf[i].real();
    }
    return f;
}

}  // namespace mflow
