#pragma once

#include <optional>
#include <vector>

#include "mflow/field.hpp"
#include "mflow/morrey.hpp"

namespace mflow {

// Candidate very weak solution: velocity, pressure (optional, recoverable
// from the Riesz formula), and the unit director.
struct WeakSolutionTriplet {
    VectorField U;
    ScalarField P;  // ignored when pressure_known is false
    bool pressure_known = false;
    VectorField V;

    void validate() const;  // |V| = 1 within 1e-10, div U within 1e-8
};

// Smooth compactly supported tensor-product bumps on a center lattice, the
// divergence-free subset obtained by Leray projection. W^{2,1} grid norms
// are cached for residual normalization.
struct TestBank {
    std::vector<ScalarField> scalars;
    std::vector<VectorField> vectors;
    std::vector<VectorField> divfree;
    std::vector<double> w21_scalars;
    std::vector<double> w21_vectors;
    std::vector<double> w21_divfree;

    std::size_t size() const { return scalars.size() + vectors.size() + divfree.size(); }
};

TestBank make_test_bank(const GridSpec& g);

struct ResidualReport {
    double momentum = 0.0;    // max over divergence-free tests, normalized
    double director = 0.0;    // max over vector tests
    double divergence = 0.0;  // max over scalar tests
    int bank_size = 0;
};

// Weak-form residuals with every derivative moved onto the tests; the
// pressure drops out against divergence-free tests. Pairings are raw grid
// sums (no dealiasing), so pointwise-exact solutions pair to zero.
ResidualReport residual_very_weak(const WeakSolutionTriplet& triplet, const TestBank& bank);

// P = sum_ij R_i R_j (U_i U_j) + sum_ijk R_i R_j (d_i V_k d_j V_k), mean zero.
ScalarField pressure_from_uv(const VectorField& U, const VectorField& V);

struct IdentityReport {
    double u_morrey = 0.0;
    double u_sup = 0.0;
    double v_morrey = 0.0;  // modulo constants: compares against V - mean(V)
    double v_sup = 0.0;
};

IdentityReport integral_identity_check(const WeakSolutionTriplet& triplet, double p,
                                       const BallSampling& sampling);

struct BootstrapEntry {
    MultiIndex alpha;
    double morrey_u = 0.0;
    double morrey_p = 0.0;
    double morrey_v = 0.0;
    double identity_mismatch_u = 0.0;  // sup distance, identity vs direct derivative
    double identity_mismatch_v = 0.0;
    HolderFit holder_u;
    HolderFit holder_p;
    HolderFit holder_v;
};

struct BootstrapReport {
    int max_order = 0;
    std::vector<BootstrapEntry> entries;  // 1 <= |alpha| <= max_order
};

// Re-reads each derivative from the integral identities (Leibniz split with
// |alpha_1| = 1 applied to the products before inverting) and compares with
// the direct spectral derivative; Morrey norms and Hoelder fits per entry.
BootstrapReport bootstrap_derivatives(const WeakSolutionTriplet& triplet, double p,
                                      int max_order, const BallSampling& sampling);

enum class Verdict { regular, not_regular, hypotheses_not_met };

struct RegularityOptions {
    int bootstrap_order = 3;
    int holder_pairs = 120000;
    double residual_gate = 1e-6;
    double decay_tol = 0.05;
    double holder_slack = 0.1;
    int sampling_levels = 6;
};

struct RegularityReport {
    double p = 0.0;
    DecayReport decay;
    ResidualReport residuals;
    bool decay_ok = false;
    bool solution_ok = false;
    bool hypotheses_met = false;
    double morrey_u = 0.0;
    double morrey_gradv = 0.0;
    bool pressure_recovered = false;
    BootstrapReport bootstrap;
    IdentityReport identity;
    HolderFit holder_u0, holder_p0, holder_v0;  // base fields (alpha = 0)
    double holder_floor = 0.0;                  // 1 - n/p - slack
    double min_defined_beta = 0.0;
    bool holder_pass = false;
    Verdict verdict = Verdict::hypotheses_not_met;
};

RegularityReport regularity_report(const WeakSolutionTriplet& triplet, double p,
                                   const RegularityOptions& opt = {});

// Steady Navier-Stokes reduction: the same pipeline with a constant unit
// director, so the Ericksen stress vanishes identically.
RegularityReport nse_mode(const VectorField& U, const std::optional<ScalarField>& P, double p,
                          const RegularityOptions& opt = {});

struct MhdReport {
    double momentum = 0.0;
    double induction = 0.0;            // full equation residual
    double induction_nonlinear = 0.0;  // div(B(x)U) - div(U(x)B) pairing alone
    double divergence_u = 0.0;
    double divergence_b = 0.0;
    DecayReport decay_u;
    DecayReport decay_b;
    int bank_size = 0;
};

MhdReport mhd_residual(const VectorField& U, const VectorField& B, const ScalarField& P,
                       double p, const TestBank& bank, const BallSampling& sampling);

}  // namespace mflow
