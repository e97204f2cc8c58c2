// Acceptance suite: one self-contained check per criterion, one PASS/FAIL
// line each, nonzero exit when anything is red. Oracles are the independent
// implementations from tests/support.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "mflow/generators.hpp"
#include "mflow/harness.hpp"
#include "mflow/io.hpp"
#include "mflow/mild.hpp"
#include "mflow/morrey.hpp"
#include "mflow/operators.hpp"
#include "mflow/report.hpp"
#include "mflow/stationary.hpp"
#include "mflow/stats.hpp"
#include "support/oracles.hpp"

using namespace mflow;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

    void check(const std::string& what, double measured, double threshold, bool pass) {
        subs_.push_back({what, measured, threshold, pass});
        if (!pass) ok_ = false;
    }
    void check_le(const std::string& what, double measured, double threshold) {
        check(what, measured, threshold, measured <= threshold);
    }
    void require(const std::string& what, bool pass) {
        check(what, pass ? 1.0 : 0.0, 1.0, pass);
    }

    ~Criterion() {
        const auto stop = std::chrono::steady_clock::now();
        const double secs =
            std::chrono::duration_cast<std::chrono::milliseconds>(stop - start_).count() / 1e3;
        std::printf("[%s] criterion %2d: %s  (%.1fs)\n", ok_ ? "PASS" : "FAIL", number_,
                    title_.c_str(), secs);
        for (const auto& s : subs_)
            std::printf("    %s %-52s measured=%-12.5g threshold=%.5g\n", s.pass ? "ok  " : "FAIL",
                        s.what.c_str(), s.measured, s.threshold);
        if (!ok_) ++g_failures;
        std::fflush(stdout);
    }

private:
    struct Sub {
        std::string what;
        double measured, threshold;
        bool pass;
    };
    int number_;
    std::string title_;
    std::chrono::steady_clock::time_point start_;
    std::vector<Sub> subs_;
    bool ok_ = true;
};

VectorField constant_director(const GridSpec& g) {
    VectorField d = Field::vector(g);
    for (double& x : d.component(0)) x = 1.0;
    return d;
}

VectorField crossed_shear(const GridSpec& g, int q, int r, double amp) {
    GeneratorSpec a{"shear_mode",
                    {{"axis", 1.0}, {"component", 0.0}, {"m", double(q)}, {"amplitude", amp}}, {}};
    GeneratorSpec b{"shear_mode",
                    {{"axis", 0.0}, {"component", 1.0}, {"m", double(r)}, {"amplitude", amp}}, {}};
    return generate_field(g, a, 0) + generate_field(g, b, 0);
}

// ----------------------------------------------------------------- criteria

void criterion_1_spectral_suite() {
    Criterion c(1, "spectral operator suite (Leray, Riesz, heat semigroup)");
    const GridSpec g{2, 128, kTwoPi, false};
    const Field f = generate_field(
        g, GeneratorSpec{"random_bandlimited", {{"kmax", g.npts / 6.0}}, {}}, 11);
    const VectorField w = generate_field(
        g, GeneratorSpec{"random_bandlimited", {{"components", 2.0}, {"kmax", g.npts / 6.0}}, {}},
        12);
    const double scale = std::max(1.0, linf_norm(w));

    const VectorField pw = leray_project(w);
    c.check_le("leray idempotence", linf_norm(leray_project(pw) - pw) / scale, 1e-10);
    c.check_le("leray output divergence", linf_norm(divergence(pw)) / scale, 1e-10);
    c.check_le("riesz symmetry", linf_norm(riesz_riesz(f, 0, 1) - riesz_riesz(f, 1, 0)), 1e-14);
    ScalarField trace = Field::scalar(g);
    for (int i = 0; i < g.dim; ++i) trace += riesz_riesz(f, i, i);
    c.check_le("riesz trace identity",
               linf_norm(trace + remove_mean(f)) / std::max(1.0, linf_norm(f)), 1e-10);
    const Field ab = heat_semigroup(heat_semigroup(f, 0.013), 0.029);
    c.check_le("heat semigroup law",
               linf_norm(ab - heat_semigroup(f, 0.042)) / std::max(1.0, linf_norm(f)), 1e-10);

    const double sigma = 5.0 * g.spacing();
    const double var1 = (g.length / 8.0) * (g.length / 8.0);
    const double t = 0.5 * (var1 - sigma * sigma);
    const Field g0 = oracles::periodized_gaussian(g, sigma * sigma);
    const Field expect = oracles::periodized_gaussian(g, var1);
    c.check_le("heat Gaussian oracle",
               linf_norm(heat_semigroup(g0, t) - expect) / linf_norm(expect), 1e-8);
}

void criterion_2_kernel_exponents() {
    Criterion c(2, "heat/Oseen kernel envelope exponents");
    const GridSpec g{2, 256, kTwoPi, false};
    const double h = g.spacing();
    ScalarField delta = Field::scalar(g);
    delta(0, NodeIndexer(g).flat({g.npts / 2, g.npts / 2, 0})) = 1.0 / (h * h);

    std::vector<double> lt, ln;
    for (double t : logspace(1e-3, 1.0, 9)) {
        lt.push_back(std::log(t));
        ln.push_back(std::log(l1_norm(gradient(heat_semigroup(delta, t)))));
    }
    const double slope = linear_fit(lt, ln).slope;
    c.check("grad heat kernel L1 slope", slope, -0.5, std::abs(slope + 0.5) <= 0.05);

    // Oseen kernel: per-t envelope constant sup |K| (sqrt(t)+|x|)^{n+1}
    std::vector<double> constants;
    for (double t : logspace(3e-3, 0.3, 6)) {
        std::vector<Field> cols;
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) {
                TensorField T = Field::tensor(g);
                T(j * 2 + l, NodeIndexer(g).flat({g.npts / 2, g.npts / 2, 0})) = 1.0 / (h * h);
                cols.push_back(heat_semigroup(leray_project(tensor_divergence(T)), t));
            }
        double sup = 0.0;
        for (double r : logspace(4.0 * h, g.length / 4.0, 8)) {
            double kmax = 0.0;
            for (std::size_t x = 0; x < g.node_count(); ++x) {
                const double d = g.min_image_distance(node_position(g, x), {0.0, 0.0, 0.0});
                if (d < r / std::sqrt(2.0) || d >= r * std::sqrt(2.0)) continue;
                for (const auto& col : cols) kmax = std::max(kmax, col.magnitude(x));
            }
            sup = std::max(sup, kmax * std::pow(std::sqrt(t) + r, 3));
        }
        constants.push_back(sup);
    }
    double cmin = constants[0], cmax = constants[0];
    for (double v : constants) {
        cmin = std::min(cmin, v);
        cmax = std::max(cmax, v);
    }
    c.check_le("Oseen envelope constant max/min", cmax / cmin, 20.0);
}

void criterion_3_morrey_oracles() {
    Criterion c(3, "Morrey estimator against counting and quadrature oracles");
    const GridSpec g{2, 256, kTwoPi, false};
    const auto sampling = BallSampling::dyadic(g);

    // constant field vs integer node counting
    GeneratorSpec one{"constant", {}, {1.0}};
    const Field ones = generate_field(g, one, 0);
    const auto est = morrey_norm(ones, MorreyParams{2, 4, 2}, sampling);
    double worst = 0.0;
    for (std::size_t j = 0; j < sampling.radii.size(); ++j) {
        const auto bs = oracles::ball_sum(ones, {0, 0, 0}, sampling.radii[j], 2.0);
        const double expect =
            oracles::constant_field_profile_value(g, bs.count, sampling.radii[j], 2.0, 4.0);
        worst = std::max(worst, std::abs(est.profile[j].second - expect) / expect);
    }
    c.check_le("constant-field node-counting oracle (rel)", worst, 1e-13);

    // power decay vs radial quadrature, R in [8h, L/4]
    const double p = 2.0 * g.dim;
    GeneratorSpec spec{"power_decay", {{"p", p}, {"amplitude", 1.0}}, {}};
    const Field f = generate_field(g, spec, 0);
    BallSampling origin = sampling;
    origin.centers = {{0.0, 0.0, 0.0}};
    const auto est2 = morrey_norm(f, MorreyParams{2, p, 2}, origin);
    auto profile = [&](double rho) { return power_decay_profile(g, p, rho); };
    double worst2 = 0.0;
    for (std::size_t j = 0; j < origin.radii.size(); ++j) {
        if (origin.radii[j] < 8.0 * g.spacing()) continue;
        const double oracle = oracles::radial_morrey_value(g, profile, origin.radii[j], 2.0, p);
        worst2 = std::max(worst2, std::abs(est2.profile[j].second - oracle) / oracle);
    }
    c.check_le("power-decay radial quadrature oracle (rel)", worst2, 0.05);

    const double base = morrey_norm(f, MorreyParams{2, p, 2}, sampling).value;
    const double scaled = morrey_norm(4.0 * f, MorreyParams{2, p, 2}, sampling).value;
    c.check("scaling covariance exact", scaled - 4.0 * base, 0.0, scaled == 4.0 * base);
}

void criterion_4_smoothing() {
    Criterion c(4, "smoothing estimate: sup-norm decay exponent -n/2p");
    const GridSpec g{2, 256, kTwoPi, false};
    const double p = 4.0;
    GeneratorSpec spec{"power_decay", {{"p", p}, {"amplitude", 1.0}}, {}};
    const Field u0 = generate_field(g, spec, 0);
    const auto check = smoothing_estimate_check(u0, p, logspace(0.02, 0.5, 7));
    c.require("slope defined", check.slope_defined);
    c.check("sup-norm log-log slope vs -n/2p", check.slope, -0.25,
            std::abs(check.slope + 0.25) <= 0.05);
    c.check("weighted sup finite", check.sup_weighted, 0.0,
            std::isfinite(check.sup_weighted) && check.sup_weighted > 0.0);
}

void criterion_5_bilinear_exponent() {
    Criterion c(5, "bilinear estimate T-exponent 1/2 - n/2p for (2,4) and (2,8)");
    const GridSpec g{2, 256, kTwoPi, true};
    // (2,3) is supplementary evidence that the fitted exponent tracks p
    // wherever the box holds the critical scales; the spec'd pairs follow.
    for (double p : {3.0, 4.0, 8.0}) {
        GeneratorSpec us{"morrey_spectral_solenoidal", {{"p", p}}, {}};
        const VectorField u0 = generate_field(g, us, 0);
        GeneratorSpec vs{"morrey_spectral",
                         {{"p", p}, {"components", 4.0}, {"component", 1.0}}, {}};
        const TensorField V0 = generate_field(g, vs, 0);
        const auto fit = contraction_exponent_fit(u0, V0, constant_director(g), p,
                                                  logspace(3e-4, 1e-2, 6), 32);
        const double predicted = 0.5 - g.dim / (2.0 * p);
        const char* tag = (p == 3.0) ? "supplementary " : "";
        char label[64];
        std::snprintf(label, sizeof(label), "%s(2,%g) slope B1+B2 vs %.3f", tag, p, predicted);
        c.check(label, fit.slope_b12, predicted, std::abs(fit.slope_b12 - predicted) <= 0.05);
        std::snprintf(label, sizeof(label), "%s(2,%g) slope B3+B4 vs %.3f", tag, p, predicted);
        c.check(label, fit.slope_b34, predicted, std::abs(fit.slope_b34 - predicted) <= 0.05);
    }
    // Note: the (2,8) halves are structurally biased low on a periodic box;
    // the weighted part of the E_T norm draws half its mass from modes below
    // the box wavenumber at every resolvable time. See README (limitations).
}

void criterion_6_picard_contraction() {
    Criterion c(6, "Picard iteration with a-posteriori horizon halving");
    const GridSpec g{2, 64, kTwoPi, true};
    const VectorField u0 = crossed_shear(g, 1, 2, 4.0);
    SolverConfig cfg;
    cfg.p = 4.0;
    cfg.horizon = 4.0;
    cfg.steps = 16;
    const auto out = picard_solve_auto(u0, Field::tensor(g), constant_director(g), cfg);
    c.require("halving engaged", out.halvings >= 1);
    c.require("converged after halving", out.satisfied);
    c.check_le("increment ratio", out.increment_ratio, 0.5);
    c.check_le("fixed-point residual / tol", out.result.residual, 10.0 * cfg.picard_tol);
}

void criterion_7_uniqueness() {
    Criterion c(7, "uniqueness surrogate: schedules agree within Richardson bound");
    const GridSpec g{2, 64, kTwoPi, true};
    GeneratorSpec us{"random_solenoidal", {{"amplitude", 1e-3}, {"kmax", 8.0}}, {}};
    const VectorField u0 = generate_field(g, us, 101);
    GeneratorSpec vs{"random_bandlimited",
                     {{"amplitude", 1e-3}, {"components", 4.0}, {"kmax", 8.0}}, {}};
    const TensorField V0 = generate_field(g, vs, 102);
    SolverConfig cfg;
    cfg.p = 4.0;
    cfg.horizon = 0.25;
    const VectorField dir = constant_director(g);
    const double d1 =
        uniqueness_experiment(u0, V0, dir, cfg, Schedule{8}, Schedule{16}).max_divergence;
    const double d2 =
        uniqueness_experiment(u0, V0, dir, cfg, Schedule{16}, Schedule{32}).max_divergence;
    const double richardson = std::max((16.0 / 3.0) * d2, 1e-14);
    c.check("coarse distance positive", d1, 0.0, d1 > 0.0);
    c.check_le("d(M,2M) / (10 x Richardson)", d1 / (10.0 * richardson), 1.0);
}

void criterion_8_exact_solution_gauntlet() {
    Criterion c(8, "harmonic-map exact solution gauntlet");
    const GridSpec g{2, 128, kTwoPi, true};
    WeakSolutionTriplet t;
    t.U = Field::vector(g);
    t.V = generate_field(g, GeneratorSpec{"harmonic_map", {}, {}}, 0);

    const TestBank bank = make_test_bank(g);
    const auto residuals = residual_very_weak(t, bank);
    c.check_le("weak residual (momentum)", residuals.momentum, 1e-8);
    c.check_le("weak residual (director)", residuals.director, 1e-8);
    c.check_le("weak residual (divergence)", residuals.divergence, 1e-8);

    const auto sampling = BallSampling::dyadic(g);
    const auto identity = integral_identity_check(t, 4.0, sampling);
    c.check_le("integral identity (velocity, sup)", identity.u_sup, 1e-8);
    c.check_le("integral identity (director, sup, mod constants)", identity.v_sup, 1e-8);

    // stationarity under the mild evolution
    const TensorField V0 = deformation_tensor(t.V);
    SolverConfig cfg;
    cfg.p = 4.0;
    cfg.horizon = 0.1;
    cfg.steps = 64;
    const auto res = picard_solve(t.U, V0, t.V, cfg);
    c.require("mild solve converged", res.converged && !res.diverged);
    std::vector<Field> du, dv;
    for (const auto& s : res.traj.states) {
        du.push_back(s.u);
        dv.push_back(s.v_mat - V0);
    }
    const double drift = et_field_norm(res.traj.times, du, cfg.p, sampling) +
                         et_field_norm(res.traj.times, dv, cfg.p, sampling);
    c.check_le("stationarity drift in E_T", drift, 1e-6);

    const auto boot = bootstrap_derivatives(t, 4.0, 3, sampling);
    double worst = 0.0;
    for (const auto& e : boot.entries)
        worst = std::max({worst, e.identity_mismatch_u, e.identity_mismatch_v});
    c.check_le("bootstrap identity mismatch, |alpha| <= 3", worst, 1e-6);
}

void criterion_9_regularity_pipeline() {
    Criterion c(9, "Theorem-1 pipeline: verdicts on exact solution and counterexample");
    const GridSpec g{2, 128, 32.0, true};
    WeakSolutionTriplet t;
    t.U = Field::vector(g);
    t.V = generate_field(g, GeneratorSpec{"harmonic_map", {}, {}}, 0);
    const auto rep = regularity_report(t, 4.0);
    c.require("hypotheses met (decay + residual gates)", rep.hypotheses_met);
    c.check("all Hoelder fits above 1 - n/p - 0.1", rep.min_defined_beta, rep.holder_floor,
            rep.holder_pass);
    c.require("verdict: regular", rep.verdict == Verdict::regular);

    WeakSolutionTriplet bad;
    GeneratorSpec cu{"constant", {}, {1.0, 0.0}};
    bad.U = generate_field(g, cu, 0);
    bad.V = constant_director(g);
    const auto repb = regularity_report(bad, 4.0);
    c.require("constant velocity fails the decay gate", !repb.decay_ok);
    c.require("no regularity verdict claimed", repb.verdict == Verdict::hypotheses_not_met);
}

void criterion_10_reductions() {
    Criterion c(10, "Navier-Stokes and MHD reductions");
    const GridSpec g{2, 64, 32.0, true};
    GeneratorSpec us{"power_decay_solenoidal", {{"p", 4.0}}, {}};
    const VectorField U = generate_field(g, us, 0);

    const auto nse = nse_mode(U, std::nullopt, 4.0);
    WeakSolutionTriplet t;
    t.U = U;
    t.V = constant_director(g);
    const auto ref = regularity_report(t, 4.0);
    c.require("nse_mode verdict bit-identical to constant-director pipeline",
              to_json(nse).dump() == to_json(ref).dump());

    const GridSpec g2{2, 64, kTwoPi, true};
    GeneratorSpec rs{"random_solenoidal", {{"kmax", 8.0}}, {}};
    const VectorField B = generate_field(g2, rs, 21);
    const auto mhd = mhd_residual(B, B, Field::scalar(g2), 4.0, make_test_bank(g2),
                                  BallSampling::dyadic(g2));
    c.check_le("MHD induction antisymmetry residual (U = B)", mhd.induction_nonlinear, 1e-10);
}

void criterion_11_determinism() {
    Criterion c(11, "determinism: fixed seed reproduces reports and FLD1 bytes");
    auto run_once = [&](const fs::path& dir) {
        ScenarioConfig cfg = default_config("mild_solve");
        cfg.grid.npts = 32;
        cfg.seed = 4242;
        cfg.solver.steps = 8;
        cfg.solver.horizon = 0.1;
        cfg.output_dir = dir;
        RunReport rep = run_scenario(cfg);
        rep.doc.erase("timings");
        return rep;
    };
    const fs::path d1 = fs::temp_directory_path() / "morreyflow_acc_det1";
    const fs::path d2 = fs::temp_directory_path() / "morreyflow_acc_det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const RunReport r1 = run_once(d1);
    const RunReport r2 = run_once(d2);
    c.require("reports identical modulo timings", r1.doc.dump() == r2.doc.dump());

    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    bool bytes_equal = true;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(d1 / "trajectory")) {
        if (entry.path().extension() != ".fld") continue;
        ++files;
        if (slurp(entry.path()) != slurp(d2 / "trajectory" / entry.path().filename()))
            bytes_equal = false;
    }
    c.require("FLD1 artifacts byte-identical (" + std::to_string(files) + " files)",
              bytes_equal && files > 0);
}

}  // namespace

int main() {
    std::printf("acceptance suite: stationary liquid-crystal / Navier-Stokes / MHD "
                "Morrey toolkit\n");
    criterion_1_spectral_suite();
    criterion_2_kernel_exponents();
    criterion_3_morrey_oracles();
    criterion_4_smoothing();
    criterion_5_bilinear_exponent();
    criterion_6_picard_contraction();
    criterion_7_uniqueness();
    criterion_8_exact_solution_gauntlet();
    criterion_9_regularity_pipeline();
    criterion_10_reductions();
    criterion_11_determinism();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
