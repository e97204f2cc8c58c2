#include "mflow/morrey.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mflow {

void MorreyParams::validate() const {
    if (r < 1.0) throw std::invalid_argument("MorreyParams: r must be >= 1");
    if (!(p > r)) throw std::invalid_argument("MorreyParams: p must exceed r");
    if (dim != 2 && dim != 3) throw std::invalid_argument("MorreyParams: dim must be 2 or 3");
}

BallSampling BallSampling::dyadic(const GridSpec& g, int levels) {
    g.validate();
    const double L = g.length;
    const double h = g.spacing();
    // (L/4)*2^{-J} >= 2h  <=>  2^J <= N/8
    int maxJ = 0;
    while ((L / 4.0) * std::pow(2.0, -(maxJ + 1)) >= 2.0 * h) ++maxJ;
    const int J = std::min(levels, maxJ);

    BallSampling s;
    for (int j = J; j >= 0; --j) s.radii.push_back((L / 4.0) * std::pow(2.0, -j));
    const std::array<double, 3> offs{-L / 4.0, 0.0, L / 4.0};
    if (g.dim == 2) {
        for (double cx : offs)
            for (double cy : offs) s.centers.push_back({cx, cy, 0.0});
    } else {
        for (double cx : offs)
            for (double cy : offs)
                for (double cz : offs) s.centers.push_back({cx, cy, cz});
    }
    return s;
}

void BallSampling::validate(const GridSpec& g) const {
    if (centers.empty() || radii.empty())
        throw std::invalid_argument("BallSampling: empty sampling");
    const double h = g.spacing();
    double prev = 0.0;
    for (double R : radii) {
        if (R <= prev) throw std::invalid_argument("BallSampling: radii must be ascending");
        if (R > g.length / 4.0 * (1.0 + 1e-12))
            throw std::invalid_argument("BallSampling: radius exceeds L/4 periodization guard");
        prev = R;
    }
    if (radii.front() < 2.0 * h * (1.0 - 1e-12))
        throw std::invalid_argument("BallSampling: smallest radius below 2h");
}

namespace {

// For one center: the index of the smallest sampled radius whose open ball
// contains each node (-1 if outside all), so ball sums become prefix sums.
// Centers snap to the nearest grid node and membership is decided on integer
// squared index distances: the dyadic radii are exact lattice distances, so
// a floating-point predicate would resolve boundary ties center-dependently.
struct BallTable {
    std::vector<std::vector<int>> first_radius;  // [center][node]

    BallTable(const GridSpec& g, const BallSampling& s) {
        const std::size_t nn = g.node_count();
        const int nr = static_cast<int>(s.radii.size());
        const int N = g.npts;
        const double h = g.spacing();
        const NodeIndexer ix(g);

        std::vector<double> r2(s.radii.size());
        for (int j = 0; j < nr; ++j) r2[j] = (s.radii[j] / h) * (s.radii[j] / h);

        first_radius.assign(s.centers.size(), {});
        for (std::size_t c = 0; c < s.centers.size(); ++c) {
            std::array<int, 3> ci{0, 0, 0};
            for (int d = 0; d < g.dim; ++d) {
                const long snapped = std::lround((s.centers[c][d] + 0.5 * g.length) / h);
                ci[d] = static_cast<int>(((snapped % N) + N) % N);
            }
            auto& fr = first_radius[c];
            fr.assign(nn, -1);
            for (std::size_t x = 0; x < nn; ++x) {
                const auto idx = ix.unflat(x);
                long d2 = 0;
                for (int d = 0; d < g.dim; ++d) {
                    int dd = idx[d] - ci[d];
                    dd = ((dd % N) + N + N / 2) % N - N / 2;
                    d2 += static_cast<long>(dd) * dd;
                }
                for (int j = 0; j < nr; ++j) {
                    if (static_cast<double>(d2) < r2[j]) {
                        fr[x] = j;
                        break;
                    }
                }
            }
        }
    }
};

// Cumulative sums of |f|^r h^n over the sampled balls of one center.
std::vector<double> ball_power_sums(const Field& f, double r, const BallTable& table,
                                    std::size_t center, int nradii) {
    std::vector<double> sums(nradii, 0.0);
    const auto& fr = table.first_radius[center];
    const int comps = f.components();
    const std::size_t nn = f.nodes();
    for (std::size_t x = 0; x < nn; ++x) {
        const int j = fr[x];
        if (j < 0) continue;
        double mag_sq = 0.0;
        for (int c = 0; c < comps; ++c) {
            const double v = f(c, x);
            mag_sq += v * v;
        }
        const double term = (r == 2.0)   ? mag_sq
                            : (r == 1.0) ? std::sqrt(mag_sq)
                                         : std::pow(mag_sq, 0.5 * r);
        sums[j] += term;
    }
    for (int j = 1; j < nradii; ++j) sums[j] += sums[j - 1];
    return sums;
}

double profile_value(double R, double sum_pow, double h, int dim, double r, double p) {
    const double local_avg = sum_pow * std::pow(h, dim) / std::pow(R, dim);
    return std::pow(R, static_cast<double>(dim) / p) * std::pow(local_avg, 1.0 / r);
}

}  // namespace

MorreyEstimate morrey_norm(const Field& f, const MorreyParams& params,
                           const BallSampling& sampling) {
    params.validate();
    if (params.dim != f.grid().dim)
        throw std::invalid_argument("morrey_norm: params/grid dimension mismatch");
    sampling.validate(f.grid());

    const GridSpec& g = f.grid();
    const int nr = static_cast<int>(sampling.radii.size());
    const BallTable table(g, sampling);

    MorreyEstimate est;
    est.profile.resize(nr);
    for (int j = 0; j < nr; ++j) est.profile[j] = {sampling.radii[j], 0.0};

    for (std::size_t c = 0; c < sampling.centers.size(); ++c) {
        const auto sums = ball_power_sums(f, params.r, table, c, nr);
        for (int j = 0; j < nr; ++j) {
            const double v =
                profile_value(sampling.radii[j], sums[j], g.spacing(), g.dim, params.r, params.p);
            if (v > est.profile[j].second) est.profile[j].second = v;
            if (v > est.value) {
                est.value = v;
                est.witness_center = sampling.centers[c];
                est.witness_radius = sampling.radii[j];
            }
        }
    }
    return est;
}

double morrey_value(const Field& f, double p, const BallSampling& sampling) {
    return morrey_norm(f, MorreyParams{2.0, p, f.grid().dim}, sampling).value;
}

DecayReport check_decay_condition(const VectorField& U, const TensorField& gradV, double p,
                                  const BallSampling& sampling, double tol) {
    const GridSpec& g = U.grid();
    if (!(p > g.dim))
        throw std::invalid_argument("check_decay_condition: requires p > dim");
    if (!gradV.grid().same_geometry(g))
        throw std::invalid_argument("check_decay_condition: grid mismatch");
    sampling.validate(g);

    BallSampling origin_only;
    origin_only.centers.push_back({0.0, 0.0, 0.0});
    origin_only.radii = sampling.radii;
    const int nr = static_cast<int>(origin_only.radii.size());
    const BallTable table(g, origin_only);

    const auto sums_u = ball_power_sums(U, 2.0, table, 0, nr);
    const auto sums_v = ball_power_sums(gradV, 2.0, table, 0, nr);

    DecayReport rep;
    rep.tol = tol;
    rep.pass = true;
    const double hn = std::pow(g.spacing(), g.dim);
    for (int j = 0; j < nr; ++j) {
        const double R = origin_only.radii[j];
        const double scale = std::pow(R, 2.0 * g.dim / p) / std::pow(R, g.dim);
        DecayReport::Row row;
        row.radius = R;
        row.ratio_u = sums_u[j] * hn * scale;
        row.ratio_gradv = sums_v[j] * hn * scale;
        rep.worst_ratio = std::max({rep.worst_ratio, row.ratio_u, row.ratio_gradv});
        if (row.ratio_u > 1.0 + tol || row.ratio_gradv > 1.0 + tol) rep.pass = false;
        rep.profile.push_back(row);
    }
    return rep;
}

DecayReport check_decay_condition_single(const Field& f, double p, const BallSampling& sampling,
                                         double tol) {
    Field zero(f.grid(), 1);
    DecayReport rep = check_decay_condition(f, zero, p, sampling, tol);
    return rep;
}

double et_field_norm(const std::vector<double>& times, const std::vector<Field>& fields,
                     double p, const BallSampling& sampling) {
    if (times.size() != fields.size() || times.empty())
        throw std::invalid_argument("et_field_norm: empty or mismatched trajectory");
    const GridSpec& g = fields.front().grid();
    sampling.validate(g);
    const MorreyParams params{2.0, p, g.dim};
    const int nr = static_cast<int>(sampling.radii.size());
    const BallTable table(g, sampling);

    const double weight_exp = 0.5 * g.dim / p;
    double sup_morrey = 0.0;
    double sup_weighted = 0.0;
    for (std::size_t m = 0; m < fields.size(); ++m) {
        double value = 0.0;
        for (std::size_t c = 0; c < sampling.centers.size(); ++c) {
            const auto sums = ball_power_sums(fields[m], params.r, table, c, nr);
            for (int j = 0; j < nr; ++j)
                value = std::max(value, profile_value(sampling.radii[j], sums[j], g.spacing(),
                                                      g.dim, params.r, params.p));
        }
        sup_morrey = std::max(sup_morrey, value);
        const double w = (times[m] > 0.0) ? std::pow(times[m], weight_exp) : 0.0;
        sup_weighted = std::max(sup_weighted, w * linf_norm(fields[m]));
    }
    return sup_morrey + sup_weighted;
}

HolderFit holder_estimate(const Field& f, int sample_pairs, std::uint64_t seed) {
    if (sample_pairs < 100)
        throw std::invalid_argument("holder_estimate: sample_pairs must be >= 100");
    const GridSpec& g = f.grid();
    const double h = g.spacing();
    const double smin = 2.0 * h;
    const double smax = g.length / 8.0;
    if (smax <= smin) throw std::invalid_argument("holder_estimate: grid too coarse");

    const int nbins = 12;
    const double lratio = std::log(smax / smin) / nbins;
    std::vector<double> envelope(nbins, 0.0);
    std::vector<bool> touched(nbins, false);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> node_dist(0, g.node_count() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const NodeIndexer ix(g);

    // Separation from exact integer node offsets, so pairs at lattice
    // distances land in one consistent bin instead of straddling a bin edge
    // within rounding noise.
    auto record_pair = [&](std::size_t xi, std::size_t yi) {
        if (yi == xi) return;
        const auto a = ix.unflat(xi);
        const auto b = ix.unflat(yi);
        long d2 = 0;
        for (int d = 0; d < g.dim; ++d) {
            int dd = a[d] - b[d];
            dd = ((dd % g.npts) + g.npts + g.npts / 2) % g.npts - g.npts / 2;
            d2 += static_cast<long>(dd) * dd;
        }
        const double dist = h * std::sqrt(static_cast<double>(d2));
        if (d2 < 4 || dist >= smax) return;  // window [2h, L/8)
        int bin = static_cast<int>(std::log(dist / smin) / lratio);
        bin = std::clamp(bin, 0, nbins - 1);
        double diff_sq = 0.0;
        for (int c = 0; c < f.components(); ++c) {
            const double dv = f(c, xi) - f(c, yi);
            diff_sq += dv * dv;
        }
        touched[bin] = true;
        envelope[bin] = std::max(envelope[bin], std::sqrt(diff_sq));
    };

    auto displaced = [&](std::size_t xi, const std::array<double, 3>& dir, double s) {
        const auto xidx = ix.unflat(xi);
        std::array<int, 3> yidx{0, 0, 0};
        for (int d = 0; d < g.dim; ++d) {
            const int off = static_cast<int>(std::lround(s * dir[d] / h));
            yidx[d] = ((xidx[d] + off) % g.npts + g.npts) % g.npts;
        }
        return ix.flat(yidx);
    };

    // Anchors at the componentwise extremes: the modulus of continuity of a
    // one-sided feature (a cusp tip) is only witnessed by pairs rooted there,
    // which uniform sampling all but never draws.
    std::vector<std::size_t> anchors;
    for (int c = 0; c < f.components(); ++c) {
        std::size_t imin = 0, imax = 0;
        for (std::size_t x = 1; x < f.nodes(); ++x) {
            if (f(c, x) < f(c, imin)) imin = x;
            if (f(c, x) > f(c, imax)) imax = x;
        }
        anchors.push_back(imin);
        anchors.push_back(imax);
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    const int ndirs = 32;
    const int per_bin = std::max(sample_pairs / nbins, 1);
    for (int b = 0; b < nbins; ++b) {
        const double starget = smin * std::exp((b + 0.5) * lratio);
        for (std::size_t a : anchors)
            for (int i = 0; i < ndirs; ++i) {
                std::array<double, 3> dir{0.0, 0.0, 0.0};
                const double th = 2.0 * std::numbers::pi * i / ndirs;
                if (g.dim == 2) {
                    dir = {std::cos(th), std::sin(th), 0.0};
                } else {
                    const double z = -1.0 + 2.0 * (i + 0.5) / ndirs;
                    const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
                    const double az = std::numbers::pi * (3.0 - std::sqrt(5.0)) * i;
                    dir = {rr * std::cos(az), rr * std::sin(az), z};
                }
                record_pair(a, displaced(a, dir, starget));
            }
        for (int s = 0; s < per_bin; ++s) {
            const std::size_t xi = node_dist(rng);
            std::array<double, 3> dir{0.0, 0.0, 0.0};
            if (g.dim == 2) {
                const double th = 2.0 * std::numbers::pi * unif(rng);
                dir = {std::cos(th), std::sin(th), 0.0};
            } else {
                double nrm = 0.0;
                for (int d = 0; d < 3; ++d) {
                    dir[d] = gauss(rng);
                    nrm += dir[d] * dir[d];
                }
                nrm = std::sqrt(nrm);
                if (nrm < 1e-12) continue;
                for (int d = 0; d < 3; ++d) dir[d] /= nrm;
            }
            record_pair(xi, displaced(xi, dir, starget));
        }
    }

    HolderFit fit;
    std::vector<double> xs, ys;
    for (int b = 0; b < nbins; ++b) {
        if (!touched[b] || envelope[b] <= 0.0) continue;
        xs.push_back(std::log(smin) + (b + 0.5) * lratio);
        ys.push_back(std::log(envelope[b]));
    }
    fit.bins_used = static_cast<int>(xs.size());
    if (xs.size() < 3) return fit;  // constant field or degenerate sampling

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double npt = static_cast<double>(xs.size());
    const double denom = npt * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) return fit;
    fit.defined = true;
    fit.beta = (npt * sxy - sx * sy) / denom;
    fit.constant = std::exp((sy - fit.beta * sx) / npt);
    return fit;
}

}  // namespace mflow
