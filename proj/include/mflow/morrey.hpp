#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mflow/field.hpp"

namespace mflow {

struct MorreyParams {
    double r = 2.0;  // local integrability exponent, >= 1
    double p = 4.0;  // Morrey exponent, > r
    int dim = 2;

    void validate() const;
    // Regularity statements additionally need p > dim.
    bool supercritical() const { return p > dim; }
};

// Discretization of the double supremum in the Morrey norm: a coarse center
// lattice plus dyadic radii. The sampled value is a lower bound of the
// continuum norm.
struct BallSampling {
    std::vector<std::array<double, 3>> centers;
    std::vector<double> radii;  // ascending

    // Origin plus the {-L/4, 0, L/4}^dim lattice; radii (L/4)*2^{-j},
    // j = 0..levels, clamped so the smallest ball keeps >= 2h radius.
    static BallSampling dyadic(const GridSpec& g, int levels = 6);

    void validate(const GridSpec& g) const;
};

struct MorreyEstimate {
    double value = 0.0;
    std::array<double, 3> witness_center{0.0, 0.0, 0.0};
    double witness_radius = 0.0;
    std::vector<std::pair<double, double>> profile;  // (R, max-over-centers value)
};

MorreyEstimate morrey_norm(const Field& f, const MorreyParams& params,
                           const BallSampling& sampling);

// Shorthand for the r = 2 norm value.
double morrey_value(const Field& f, double p, const BallSampling& sampling);

struct DecayReport {
    bool pass = false;
    double worst_ratio = 0.0;
    double tol = 0.05;
    struct Row {
        double radius;
        double ratio_u;
        double ratio_gradv;
    };
    std::vector<Row> profile;
};

// Literal form of the decay hypothesis: for balls centered at the origin,
// R^{-n} int_{|x|<R} |f|^2 <= R^{-2n/p} for both fields, within tol.
DecayReport check_decay_condition(const VectorField& U, const TensorField& gradV, double p,
                                  const BallSampling& sampling, double tol = 0.05);

// Same gate for one field (the gradV column of the profile is zero).
DecayReport check_decay_condition_single(const Field& f, double p, const BallSampling& sampling,
                                         double tol = 0.05);

// sup_t ||f(t)||_{M^{2,p}} + sup_t t^{n/2p} ||f(t)||_inf over the samples.
double et_field_norm(const std::vector<double>& times, const std::vector<Field>& fields,
                     double p, const BallSampling& sampling);

struct HolderFit {
    bool defined = false;  // false when all sampled differences vanish
    double beta = 0.0;
    double constant = 0.0;
    int bins_used = 0;
};

// Fits the upper envelope of |f(x)-f(y)| against |x-y| on log-log axes,
// over separations in [2h, L/8]; binned maxima, least squares.
HolderFit holder_estimate(const Field& f, int sample_pairs,
                          std::uint64_t seed = 0x9e3779b97f4a7c15ull);

}  // namespace mflow
