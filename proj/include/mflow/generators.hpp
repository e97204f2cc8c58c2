#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mflow/field.hpp"

namespace mflow {

// Declarative synthetic-field factory shared by the CLI and the tests.
//
// Names and their numeric parameters (defaults in parentheses):
//   zero               components(1)
//   constant           values = one entry per component
//   mode               components(1), component(0), m0(1), m1(0), m2(0),
//                      amplitude(1), cosine(0 = sin)
//   shear_mode         divergence-free single mode: axis(1), component(0),
//                      m(1), amplitude(1)
//   taylor_green       k(1), amplitude(1)
//   gaussian           sigma(4h); periodized, unit mass
//   harmonic_map       k0(1), k1(0), k2(0): director (cos(a.x), sin(a.x)[,0])
//   power_decay        p(4), components(1), amplitude(0 = calibrate),
//                      target_ratio(0.9); profile in component 0
//   power_decay_solenoidal  as power_decay but Leray-projected vector
//   morrey_spectral    deterministic |k|^{-(n-n/p)} symbol: p(4),
//                      components(1), component(0), kmin(1), amplitude(1)
//   morrey_spectral_solenoidal  as morrey_spectral but Leray-projected
//   random_solenoidal  kmax(npts/6), amplitude(1)
//   random_bandlimited components(1), kmax(npts/6), amplitude(1)
struct GeneratorSpec {
    std::string name;
    std::map<std::string, double> params;
    std::vector<double> values;  // for "constant"

    double get(const std::string& key, double fallback) const;
};

Field generate_field(const GridSpec& g, const GeneratorSpec& spec, std::uint64_t seed = 0);

// Mollified power-decay radial profile used by the power_decay generators:
// amplitude * max(rho, 4h)^(-dim/p), smoothly cut between L/4 and 3L/8.
double power_decay_profile(const GridSpec& g, double p, double rho);

}  // namespace mflow
