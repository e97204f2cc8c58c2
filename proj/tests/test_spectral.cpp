#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mflow/generators.hpp"
#include "mflow/operators.hpp"
#include "mflow/stats.hpp"
#include "support/oracles.hpp"

using namespace mflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridSpec grid_2d(int n = 64, double L = kTwoPi, bool dealias = false) {
    return GridSpec{2, n, L, dealias};
}

ScalarField sine_mode(const GridSpec& g, int axis, int m = 1, double amp = 1.0) {
    GeneratorSpec spec{"mode", {{"amplitude", amp}, {"m0", 0.0}, {"m1", 0.0}, {"m2", 0.0}}, {}};
    spec.params[axis == 0 ? "m0" : (axis == 1 ? "m1" : "m2")] = m;
    return generate_field(g, spec, 0);
}

Field random_scalar(const GridSpec& g, std::uint64_t seed) {
    return generate_field(g, GeneratorSpec{"random_bandlimited", {{"kmax", g.npts / 6.0}}, {}},
                          seed);
}

Field random_vector(const GridSpec& g, std::uint64_t seed) {
    return generate_field(
        g,
        GeneratorSpec{"random_bandlimited",
                      {{"kmax", g.npts / 6.0}, {"components", double(g.dim)}}, {}},
        seed);
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("grid validation") {
    CHECK_THROWS(GridSpec{2, 100, kTwoPi, false}.validate());  // not a power of two
    CHECK_THROWS(GridSpec{2, 4, kTwoPi, false}.validate());    // too small
    CHECK_THROWS(GridSpec{4, 64, kTwoPi, false}.validate());   // bad dim
    CHECK_THROWS(GridSpec{2, 64, -1.0, false}.validate());
    CHECK_NOTHROW(GridSpec{3, 16, 1.0, true}.validate());
}

TEST_CASE("gradient of a constant vanishes") {
    const GridSpec g = grid_2d();
    GeneratorSpec c{"constant", {}, {3.25}};
    const VectorField grad = gradient(generate_field(g, c, 0));
    CHECK(linf_norm(grad) < 1e-14);
}

TEST_CASE("gradient of a single mode matches the analytic derivative") {
    const GridSpec g = grid_2d();
    const ScalarField f = sine_mode(g, 0);
    const VectorField grad = gradient(f);
    const double a = kTwoPi / g.length;
    double worst = 0.0;
    for (std::size_t x = 0; x < f.nodes(); ++x) {
        const auto pos = node_position(g, x);
        worst = std::max(worst, std::abs(grad(0, x) - a * std::cos(a * pos[0])));
        worst = std::max(worst, std::abs(grad(1, x)));
    }
    CHECK(worst / a < 1e-10);
}

TEST_CASE("deformation tensor of the harmonic map has closed form") {
    const GridSpec g = grid_2d();
    const VectorField V = generate_field(g, GeneratorSpec{"harmonic_map", {}, {}}, 0);
    const TensorField D = deformation_tensor(V);
    const double a = kTwoPi / g.length;
    // (i,k) entry = a_i (-sin, cos)_k with a = (a, 0)
    double worst = 0.0;
    for (std::size_t x = 0; x < V.nodes(); ++x) {
        const auto pos = node_position(g, x);
        const double s = std::sin(a * pos[0]), c = std::cos(a * pos[0]);
        worst = std::max(worst, std::abs(D(0, x) - a * (-s)));
        worst = std::max(worst, std::abs(D(1, x) - a * c));
        worst = std::max(worst, std::abs(D(2, x)));
        worst = std::max(worst, std::abs(D(3, x)));
    }
    CHECK(worst / a < 1e-10);
}

TEST_CASE("divergence of gradient equals laplacian") {
    const GridSpec g = grid_2d();
    const Field f = random_scalar(g, 7);
    const Field lhs = divergence(gradient(f));
    const Field rhs = laplacian(f);
    CHECK(linf_norm(lhs - rhs) / std::max(1.0, linf_norm(rhs)) < 1e-10);
}

TEST_CASE("tensor divergence of a constant tensor vanishes") {
    const GridSpec g = grid_2d();
    TensorField T = Field::tensor(g);
    for (int c = 0; c < T.components(); ++c)
        for (double& v : T.component(c)) v = 1.0 + c;
    CHECK(linf_norm(tensor_divergence(T)) < 1e-12);
}

TEST_CASE("odot of harmonic-map deformation is the constant tensor a (x) a") {
    const GridSpec g = grid_2d();
    const VectorField V = generate_field(g, GeneratorSpec{"harmonic_map", {}, {}}, 0);
    const TensorField D = deformation_tensor(V);
    const TensorField S = odot(D, D, Dealias::off);
    const double a = kTwoPi / g.length;
    double worst = 0.0;
    for (std::size_t x = 0; x < S.nodes(); ++x) {
        worst = std::max(worst, std::abs(S(0, x) - a * a));
        worst = std::max(worst, std::abs(S(1, x)));
        worst = std::max(worst, std::abs(S(2, x)));
        worst = std::max(worst, std::abs(S(3, x)));
    }
    CHECK(worst / (a * a) < 1e-10);
    // and its divergence vanishes (the super-critical term of the exact solution)
    CHECK(linf_norm(tensor_divergence(S)) / (a * a) < 1e-10);
}

TEST_CASE("odot identities") {
    const GridSpec g = grid_2d(32);
    TensorField Z = Field::tensor(g);
    const TensorField B = generate_field(
        g, GeneratorSpec{"random_bandlimited", {{"components", 4.0}, {"kmax", 5.0}}, {}}, 3);
    CHECK(linf_norm(odot(Z, B, Dealias::off)) == 0.0);
    TensorField I = Field::tensor(g);
    for (double& v : I.component(0)) v = 1.0;
    for (double& v : I.component(3)) v = 1.0;
    const TensorField II = odot(I, I, Dealias::off);
    CHECK(linf_norm(II - I) < 1e-14);

    GridSpec g2 = grid_2d(32);
    g2.npts = 64;
    CHECK_THROWS(odot(Field::tensor(g2), B, Dealias::off));  // grid mismatch
}

TEST_CASE("heat semigroup basics") {
    const GridSpec g = grid_2d();
    const Field f = random_scalar(g, 11);
    SUBCASE("t = 0 is the identity") { CHECK(linf_norm(heat_semigroup(f, 0.0) - f) == 0.0); }
    SUBCASE("constants are invariant") {
        GeneratorSpec c{"constant", {}, {2.0}};
        const Field cf = generate_field(g, c, 0);
        CHECK(linf_norm(heat_semigroup(cf, 0.37) - cf) < 1e-13);
    }
    SUBCASE("negative time is rejected") { CHECK_THROWS(heat_semigroup(f, -1.0)); }
    SUBCASE("semigroup law") {
        const Field a = heat_semigroup(heat_semigroup(f, 0.01), 0.027);
        const Field b = heat_semigroup(f, 0.037);
        CHECK(linf_norm(a - b) / std::max(1.0, linf_norm(f)) < 1e-10);
    }
    SUBCASE("L2 contraction") {
        for (double t : {1e-4, 1e-2, 1.0})
            CHECK(l2_norm(heat_semigroup(f, t)) <= l2_norm(f) * (1.0 + 1e-12));
    }
}

TEST_CASE("heat semigroup matches the periodized Gaussian oracle") {
    const GridSpec g = grid_2d(128);
    const double sigma = 5.0 * g.spacing();  // sigma >= 4h
    const double var0 = sigma * sigma;
    const double var1 = (g.length / 8.0) * (g.length / 8.0);  // sigma^2 + 2t <= (L/8)^2
    const double t = 0.5 * (var1 - var0);
    const Field g0 = oracles::periodized_gaussian(g, var0);
    const Field expected = oracles::periodized_gaussian(g, var1);
    const Field evolved = heat_semigroup(g0, t);
    CHECK(linf_norm(evolved - expected) / linf_norm(expected) < 1e-8);
}

TEST_CASE("leray projector") {
    const GridSpec g = grid_2d();
    SUBCASE("annihilates gradients") {
        const Field f = remove_mean(random_scalar(g, 5));
        const VectorField gr = gradient(f);
        CHECK(linf_norm(leray_project(gr)) / std::max(1.0, linf_norm(gr)) < 1e-10);
    }
    SUBCASE("fixes divergence-free fields and is idempotent") {
        const VectorField v = generate_field(
            g, GeneratorSpec{"random_solenoidal", {{"kmax", g.npts / 6.0}}, {}}, 9);
        CHECK(linf_norm(leray_project(v) - v) / linf_norm(v) < 1e-10);
    }
    SUBCASE("output is solenoidal for arbitrary input") {
        const VectorField w = random_vector(g, 13);
        CHECK(linf_norm(divergence(leray_project(w))) / std::max(1.0, linf_norm(w)) < 1e-10);
    }
    SUBCASE("self-adjoint under the grid inner product") {
        const VectorField a = random_vector(g, 15);
        const VectorField b = random_vector(g, 16);
        CHECK(std::abs(inner(leray_project(a), b) - inner(a, leray_project(b))) /
                  (l2_norm(a) * l2_norm(b)) <
              1e-10);
    }
}

TEST_CASE("riesz transforms") {
    const GridSpec g = grid_2d();
    const Field f = random_scalar(g, 21);
    SUBCASE("symmetry in the axes is exact") {
        CHECK(linf_norm(riesz_riesz(f, 0, 1) - riesz_riesz(f, 1, 0)) == 0.0);
    }
    SUBCASE("trace identity: sum R_i R_i = -Id on mean-zero functions") {
        ScalarField trace = Field::scalar(g);
        for (int i = 0; i < g.dim; ++i) trace += riesz_riesz(f, i, i);
        CHECK(linf_norm(trace + remove_mean(f)) / std::max(1.0, linf_norm(f)) < 1e-10);
    }
    SUBCASE("single-mode eigenfunction") {
        const ScalarField s = sine_mode(g, 0);
        CHECK(linf_norm(riesz_riesz(s, 0, 0) + s) < 1e-12);
    }
    SUBCASE("axis bounds checked") { CHECK_THROWS(riesz_riesz(f, 0, 2)); }
}

TEST_CASE("inverse laplacian") {
    const GridSpec g = grid_2d();
    SUBCASE("zero maps to zero") {
        CHECK(linf_norm(inverse_laplacian(Field::scalar(g))) == 0.0);
    }
    SUBCASE("inverse identity on the mean-zero part") {
        const Field f = random_scalar(g, 23);
        const Field lhs = -1.0 * laplacian(inverse_laplacian(f));
        CHECK(linf_norm(lhs - remove_mean(f)) / std::max(1.0, linf_norm(f)) < 1e-10);
    }
    SUBCASE("eigenfunction value") {
        const ScalarField s = sine_mode(g, 0);
        const double lam = std::pow(g.length / kTwoPi, 2);
        CHECK(linf_norm(inverse_laplacian(s) - lam * s) / lam < 1e-12);
    }
}

TEST_CASE("partial_alpha") {
    const GridSpec g = grid_2d();
    const Field f = random_scalar(g, 27);
    SUBCASE("order zero is the identity") {
        CHECK(linf_norm(partial_alpha(f, MultiIndex::zero(2)) - f) == 0.0);
    }
    SUBCASE("second derivative of a sine is -(2pi/L)^2 sine") {
        const ScalarField s = sine_mode(g, 0);
        const double a2 = std::pow(kTwoPi / g.length, 2);
        CHECK(linf_norm(partial_alpha(s, MultiIndex{{2, 0, 0}, 2}) + a2 * s) / a2 < 1e-10);
    }
    SUBCASE("mixed derivatives commute") {
        const Field a = partial_alpha(partial_alpha(f, MultiIndex::unit(2, 0)), MultiIndex::unit(2, 1));
        const Field b = partial_alpha(f, MultiIndex{{1, 1, 0}, 2});
        CHECK(linf_norm(a - b) / std::max(1.0, linf_norm(b)) < 1e-10);
    }
    SUBCASE("resolution guard") {
        CHECK_THROWS(partial_alpha(f, MultiIndex{{5, 0, 0}, 2}));
    }
}

TEST_CASE("multiplier operators commute pairwise") {
    const GridSpec g = grid_2d();
    const VectorField w = random_vector(g, 31);
    const double scale = std::max(1.0, linf_norm(w));
    const Field a = heat_semigroup(leray_project(w), 0.05);
    const Field b = leray_project(heat_semigroup(w, 0.05));
    CHECK(linf_norm(a - b) / scale < 1e-10);
    const Field c = inverse_laplacian(partial_alpha(w, MultiIndex::unit(2, 1)));
    const Field d = partial_alpha(inverse_laplacian(w), MultiIndex::unit(2, 1));
    CHECK(linf_norm(c - d) / scale < 1e-10);
}

TEST_CASE("3-d operators behave on a small grid") {
    const GridSpec g{3, 16, kTwoPi, false};
    const Field f = random_scalar(g, 33);
    CHECK(linf_norm(divergence(gradient(f)) - laplacian(f)) / std::max(1.0, linf_norm(f)) <
          1e-10);
    const VectorField w = generate_field(
        g, GeneratorSpec{"random_bandlimited", {{"components", 3.0}, {"kmax", 4.0}}, {}}, 34);
    CHECK(linf_norm(divergence(leray_project(w))) / std::max(1.0, linf_norm(w)) < 1e-10);
}

TEST_CASE("heat kernel gradient L1 estimate: slope -1/2 and stable constant") {
    const GridSpec g{2, 256, kTwoPi, false};
    // discrete delta of unit grid mass
    ScalarField delta = Field::scalar(g);
    delta(0, NodeIndexer(g).flat({g.npts / 2, g.npts / 2, 0})) =
        1.0 / std::pow(g.spacing(), g.dim);
    const double unit = std::pow(g.length / kTwoPi, 2);
    const auto ts = logspace(1e-3 * unit, 1.0 * unit, 9);
    std::vector<double> lt, ln, cs;
    for (double t : ts) {
        const double n1 = l1_norm(gradient(heat_semigroup(delta, t)));
        lt.push_back(std::log(t));
        ln.push_back(std::log(n1));
        // the kernel spills around the torus beyond t ~ (L/2pi)^2/4; the
        // constant is only meaningful inside that guard
        if (t <= 0.25 * unit) cs.push_back(n1 * std::sqrt(t));
    }
    const auto fit = linear_fit(lt, ln);
    CHECK(std::abs(fit.slope + 0.5) < 0.05);
    double cmin = cs[0], cmax = cs[0];
    for (double c : cs) {
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    const double cmid = 0.5 * (cmin + cmax);
    CHECK((cmax - cmid) / cmid < 0.10);
    CHECK(cs.size() >= 5);
}

TEST_CASE("Oseen kernel obeys the (sqrt(t) + |x|)^{-(n+1)} envelope") {
    const GridSpec g{2, 256, kTwoPi, false};
    const double h = g.spacing();
    const int n = g.dim;
    const auto ts = logspace(3e-3, 0.3, 6);
    const auto shells = logspace(4.0 * h, g.length / 4.0, 8);

    // Per time, the envelope constant sup_x |K|(sqrt(t)+|x|)^{n+1} over the
    // shell sweep; the kernel is odd, so only the sup witnesses the constant.
    std::vector<double> constants;
    for (double t : ts) {
        // kernel columns: delta in tensor slot (j,l), operator e^{tL} P div
        std::vector<Field> cols;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                TensorField T = Field::tensor(g);
                T(j * n + l, NodeIndexer(g).flat({g.npts / 2, g.npts / 2, 0})) =
                    1.0 / std::pow(h, n);
                cols.push_back(heat_semigroup(leray_project(tensor_divergence(T)), t));
            }
        double sup = 0.0;
        for (double r : shells) {
            double kmax = 0.0;
            const std::array<double, 3> origin{0.0, 0.0, 0.0};
            for (std::size_t x = 0; x < g.node_count(); ++x) {
                const double d = g.min_image_distance(node_position(g, x), origin);
                if (d < r / std::sqrt(2.0) || d >= r * std::sqrt(2.0)) continue;
                for (const auto& col : cols) kmax = std::max(kmax, col.magnitude(x));
            }
            sup = std::max(sup, kmax * std::pow(std::sqrt(t) + r, n + 1));
        }
        REQUIRE(sup > 0.0);
        constants.push_back(sup);
    }
    const auto [mn, mx] = std::minmax_element(constants.begin(), constants.end());
    CHECK(*mx / *mn <= 20.0);
}

TEST_SUITE_END();
