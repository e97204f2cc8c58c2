#include "mflow/stationary.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "mflow/operators.hpp"

namespace mflow {

namespace {

double bump_profile(double s) {
    const double s2 = s * s;
    return (s2 < 1.0) ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
}

ScalarField make_bump(const GridSpec& g, const std::array<double, 3>& center, double width) {
    ScalarField f = Field::scalar(g);
    for (std::size_t x = 0; x < f.nodes(); ++x) {
        const auto pos = node_position(g, x);
        double v = 1.0;
        for (int d = 0; d < g.dim; ++d) v *= bump_profile(2.0 * g.wrap(pos[d] - center[d]) / width);
        f(0, x) = v;
    }
    return f;
}

double w21_norm(const Field& f) {
    double s = 0.0;
    for (const auto& a : multi_indices(f.grid().dim, 0, 2)) s += l1_norm(partial_alpha(f, a));
    return s;
}

// sum_ij int T_ij d_j phi_i, with defo the deformation tensor of the test
// (defo_ij = d_i phi_j, so d_j phi_i = defo_ji).
double pair_tensor_gradient(const TensorField& T, const TensorField& defo) {
    const GridSpec& g = T.grid();
    const int n = g.dim;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto t = T.component(i * n + j);
            const auto d = defo.component(j * n + i);
            for (std::size_t x = 0; x < t.size(); ++x) s += t[x] * d[x];
        }
    return s * std::pow(g.spacing(), g.dim);
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

template <typename F>
void for_each_sub_index(const MultiIndex& alpha, F&& fn) {
    for (int b0 = 0; b0 <= alpha.a[0]; ++b0)
        for (int b1 = 0; b1 <= alpha.a[1]; ++b1)
            for (int b2 = 0; b2 <= alpha.a[2]; ++b2) {
                const MultiIndex beta{{b0, b1, b2}, alpha.dim};
                const double c = binom(alpha.a[0], b0) * binom(alpha.a[1], b1) *
                                 binom(alpha.a[2], b2);
                fn(beta, c);
            }
}

MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
    return MultiIndex{{a.a[0] - b.a[0], a.a[1] - b.a[1], a.a[2] - b.a[2]}, a.dim};
}

// Hoelder fits on fields at the machine-noise floor (e.g. derivatives of a
// recovered pressure that is analytically zero) fit the noise, not a modulus
// of continuity; such fields are reported as undefined instead.
HolderFit guarded_holder(const Field& f, double noise_floor, int pairs, std::uint64_t seed) {
    if (linf_norm(f) <= noise_floor) return HolderFit{};
    return holder_estimate(f, pairs, seed);
}

class DerivCache {
public:
    explicit DerivCache(Field base) : base_(std::move(base)) {
        cache_.emplace(std::array<int, 3>{0, 0, 0}, base_);
    }
    const Field& get(const MultiIndex& a) {
        auto it = cache_.find(a.a);
        if (it != cache_.end()) return it->second;
        auto [pos, ok] = cache_.emplace(a.a, partial_alpha(base_, a));
        return pos->second;
    }

private:
    Field base_;
    std::map<std::array<int, 3>, Field> cache_;
};

void add_outer(TensorField& acc, double c, const Field& a, const Field& b) {
    const int n = acc.grid().dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto dst = acc.component(i * n + j);
            const auto ai = a.component(i);
            const auto bj = b.component(j);
            for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += c * ai[x] * bj[x];
        }
}

void add_odot(TensorField& acc, double c, const Field& A, const Field& B) {
    const int n = acc.grid().dim;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto dst = acc.component(i * n + j);
            for (int k = 0; k < n; ++k) {
                const auto ai = A.component(i * n + k);
                const auto bj = B.component(j * n + k);
                for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += c * ai[x] * bj[x];
            }
        }
}

// -(−Lap)^{-1} P d^{alpha1} div( d^{alpha2}(U (x) U) + d^{alpha2}(G . G) ),
// the alpha2 derivatives spread over the factors by the Leibniz rule.
VectorField bootstrap_rhs_u(DerivCache& dU, DerivCache& dG, const MultiIndex& alpha,
                            const GridSpec& g) {
    int axis = 0;
    while (alpha.a[axis] == 0) ++axis;
    const MultiIndex a1 = MultiIndex::unit(alpha.dim, axis);
    const MultiIndex a2 = sub(alpha, a1);

    TensorField Q = Field::tensor(g);
    for_each_sub_index(a2, [&](const MultiIndex& beta, double c) {
        add_outer(Q, c, dU.get(beta), dU.get(sub(a2, beta)));
        add_odot(Q, c, dG.get(beta), dG.get(sub(a2, beta)));
    });

    Spectrum q = fft(Q);
    if (g.dealias) apply_dealias(q);
    Spectrum v = divergence_of_tensor(q);
    apply_leray(v);
    apply_partial(v, a1);
    apply_inverse_laplacian(v);
    Field out = ifft(v);
    out *= -1.0;
    return out;
}

// -(−Lap)^{-1} d^{alpha1} div( d^{alpha2}(V (x) U) )
// +(−Lap)^{-1} d^{alpha1}( d^{alpha2}(|G|^2 V) )
VectorField bootstrap_rhs_v(DerivCache& dU, DerivCache& dV, DerivCache& dG,
                            const MultiIndex& alpha, const GridSpec& g) {
    int axis = 0;
    while (alpha.a[axis] == 0) ++axis;
    const MultiIndex a1 = MultiIndex::unit(alpha.dim, axis);
    const MultiIndex a2 = sub(alpha, a1);

    TensorField T = Field::tensor(g);
    for_each_sub_index(a2, [&](const MultiIndex& beta, double c) {
        add_outer(T, c, dV.get(beta), dU.get(sub(a2, beta)));
    });
    Spectrum t = fft(T);
    if (g.dealias) apply_dealias(t);
    Spectrum term1 = divergence_of_tensor(t);
    apply_partial(term1, a1);
    apply_inverse_laplacian(term1);

    // d^beta(|G|^2) by a second Leibniz pass over the two G factors
    std::map<std::array<int, 3>, ScalarField> dA;
    for_each_sub_index(a2, [&](const MultiIndex& beta, double) {
        if (dA.count(beta.a)) return;
        ScalarField A = Field::scalar(g);
        auto acc = A.component(0);
        for_each_sub_index(beta, [&](const MultiIndex& gamma, double cg) {
            const Field& Ga = dG.get(gamma);
            const Field& Gb = dG.get(sub(beta, gamma));
            const int nc = Ga.components();
            for (int cc = 0; cc < nc; ++cc) {
                const auto a = Ga.component(cc);
                const auto b = Gb.component(cc);
                for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += cg * a[x] * b[x];
            }
        });
        dA.emplace(beta.a, std::move(A));
    });

    VectorField W = Field::vector(g);
    for_each_sub_index(a2, [&](const MultiIndex& beta, double c) {
        const ScalarField& A = dA.at(beta.a);
        const Field& Vb = dV.get(sub(a2, beta));
        const auto av = A.component(0);
        for (int d = 0; d < g.dim; ++d) {
            auto dst = W.component(d);
            const auto vb = Vb.component(d);
            for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += c * av[x] * vb[x];
        }
    });
    Spectrum w = fft(W);
    if (g.dealias) apply_dealias(w);
    apply_partial(w, a1);
    apply_inverse_laplacian(w);

    Field out = ifft(term1);
    out *= -1.0;
    out += ifft(w);
    return out;
}

}  // namespace

void WeakSolutionTriplet::validate() const {
    const GridSpec& g = U.grid();
    require_components(U, g.dim, "WeakSolutionTriplet U");
    require_components(V, g.dim, "WeakSolutionTriplet V");
    if (!V.grid().same_geometry(g))
        throw std::invalid_argument("WeakSolutionTriplet: grid mismatch");
    if (pressure_known) {
        require_components(P, 1, "WeakSolutionTriplet P");
        if (!P.grid().same_geometry(g))
            throw std::invalid_argument("WeakSolutionTriplet: grid mismatch");
    }
    for (std::size_t x = 0; x < V.nodes(); ++x)
        if (std::abs(V.magnitude(x) - 1.0) > 1e-10)
            throw std::invalid_argument("WeakSolutionTriplet: director is not unit length");
    if (linf_norm(divergence(U)) > 1e-8)
        throw std::invalid_argument("WeakSolutionTriplet: U is not solenoidal");
}

TestBank make_test_bank(const GridSpec& g) {
    g.validate();
    const double L = g.length;
    const std::array<double, 3> widths{L / 4.0, L / 6.0, L / 8.0};
    const std::array<double, 3> offs{-L / 4.0, 0.0, L / 4.0};

    std::vector<std::array<double, 3>> centers;
    if (g.dim == 2) {
        for (double cx : offs)
            for (double cy : offs) centers.push_back({cx, cy, 0.0});
    } else {
        for (double cx : offs)
            for (double cy : offs)
                for (double cz : offs) centers.push_back({cx, cy, cz});
    }

    TestBank bank;
    for (double w : widths)
        for (const auto& c : centers) bank.scalars.push_back(make_bump(g, c, w));

    for (const auto& s : bank.scalars)
        for (int d = 0; d < g.dim; ++d) {
            VectorField v = Field::vector(g);
            const auto src = s.component(0);
            auto dst = v.component(d);
            std::copy(src.begin(), src.end(), dst.begin());
            bank.vectors.push_back(std::move(v));
        }
    for (const auto& v : bank.vectors) bank.divfree.push_back(leray_project(v));

    for (const auto& f : bank.scalars) bank.w21_scalars.push_back(w21_norm(f));
    for (const auto& f : bank.vectors) bank.w21_vectors.push_back(w21_norm(f));
    for (const auto& f : bank.divfree) bank.w21_divfree.push_back(w21_norm(f));
    return bank;
}

ResidualReport residual_very_weak(const WeakSolutionTriplet& triplet, const TestBank& bank) {
    triplet.validate();
    if (bank.size() == 0) throw std::invalid_argument("residual_very_weak: empty test bank");

    const TensorField G = deformation_tensor(triplet.V);
    const TensorField S = odot(G, G, Dealias::off);
    const TensorField UU = outer_product(triplet.U, triplet.U, Dealias::off);
    const TensorField VU = outer_product(triplet.V, triplet.U, Dealias::off);
    const VectorField cubic =
        scalar_multiply(frobenius_inner(G, G, Dealias::off), triplet.V, Dealias::off);

    const double du = linf_norm(triplet.U);
    const double dg = linf_norm(G);
    const double datascale = 1.0 + du * du + dg * dg;

    ResidualReport rep;
    rep.bank_size = static_cast<int>(bank.size());
    for (std::size_t i = 0; i < bank.divfree.size(); ++i) {
        const VectorField& phi = bank.divfree[i];
        const double r = inner(triplet.U, laplacian(phi)) +
                         pair_tensor_gradient(UU, deformation_tensor(phi)) +
                         pair_tensor_gradient(S, deformation_tensor(phi));
        rep.momentum = std::max(rep.momentum, std::abs(r) / (bank.w21_divfree[i] * datascale));
    }
    for (std::size_t i = 0; i < bank.vectors.size(); ++i) {
        const VectorField& psi = bank.vectors[i];
        const double r = inner(triplet.V, laplacian(psi)) +
                         pair_tensor_gradient(VU, deformation_tensor(psi)) +
                         inner(cubic, psi);
        rep.director = std::max(rep.director, std::abs(r) / (bank.w21_vectors[i] * datascale));
    }
    for (std::size_t i = 0; i < bank.scalars.size(); ++i) {
        const double r = inner(triplet.U, gradient(bank.scalars[i]));
        rep.divergence = std::max(rep.divergence, std::abs(r) / (bank.w21_scalars[i] * datascale));
    }
    return rep;
}

ScalarField pressure_from_uv(const VectorField& U, const VectorField& V) {
    const GridSpec& g = U.grid();
    require_components(U, g.dim, "pressure_from_uv U");
    require_components(V, g.dim, "pressure_from_uv V");
    const TensorField G = deformation_tensor(V);
    TensorField T = outer_product(U, U, Dealias::follow_grid);
    T += odot(G, G, Dealias::follow_grid);

    const Spectrum t = fft(T);
    Spectrum ps(g, 1);
    const int n = g.dim;
    const NodeIndexer ix(g);
    for (std::size_t flat = 0; flat < ps.modes(); ++flat) {
        const auto idx = ix.unflat(flat);
        std::array<double, 3> k{0, 0, 0};
        double k2 = 0.0;
        for (int d = 0; d < n; ++d) {
            k[d] = g.wavenumber(idx[d]);
            k2 += k[d] * k[d];
        }
        if (k2 == 0.0) continue;
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += (-k[i] * k[j] / k2) * t(i * n + j, flat);
        ps(0, flat) = acc;
    }
    return ifft(ps);
}

IdentityReport integral_identity_check(const WeakSolutionTriplet& triplet, double p,
                                       const BallSampling& sampling) {
    const TensorField G = deformation_tensor(triplet.V);

    TensorField TU = outer_product(triplet.U, triplet.U, Dealias::follow_grid);
    TU += odot(G, G, Dealias::follow_grid);
    Spectrum su = divergence_of_tensor(fft(TU));
    apply_leray(su);
    apply_inverse_laplacian(su);
    Field U_rhs = ifft(su);
    U_rhs *= -1.0;

    const TensorField VU = outer_product(triplet.V, triplet.U, Dealias::follow_grid);
    Spectrum sv1 = divergence_of_tensor(fft(VU));
    apply_inverse_laplacian(sv1);
    const VectorField cubic = scalar_multiply(
        frobenius_inner(G, G, Dealias::follow_grid), triplet.V, Dealias::follow_grid);
    Spectrum sv2 = fft(cubic);
    apply_inverse_laplacian(sv2);
    Field V_rhs = ifft(sv2);
    V_rhs -= ifft(sv1);

    IdentityReport rep;
    const Field du = triplet.U - U_rhs;
    rep.u_sup = linf_norm(du);
    rep.u_morrey = morrey_value(du, p, sampling);
    const Field dv = remove_mean(triplet.V) - V_rhs;
    rep.v_sup = linf_norm(dv);
    rep.v_morrey = morrey_value(dv, p, sampling);
    return rep;
}

BootstrapReport bootstrap_derivatives(const WeakSolutionTriplet& triplet, double p,
                                      int max_order, const BallSampling& sampling) {
    const GridSpec& g = triplet.U.grid();
    if (!(p > g.dim)) throw std::invalid_argument("bootstrap_derivatives: requires p > dim");
    if (max_order < 1 || max_order > kMaxDerivativeOrder)
        throw std::invalid_argument(
            "bootstrap_derivatives: order outside the resolution guard (1..4)");
    triplet.validate();

    const TensorField G = deformation_tensor(triplet.V);
    const ScalarField P = pressure_from_uv(triplet.U, triplet.V);
    DerivCache dU(triplet.U), dV(triplet.V), dG(G), dP(P);
    const MorreyParams params{2.0, p, g.dim};

    BootstrapReport rep;
    rep.max_order = max_order;
    const int holder_pairs = 120000;
    const double noise_floor = 1e-10 * (1.0 + linf_norm(triplet.U) + linf_norm(G));
    std::uint64_t salt = 0;
    for (const auto& alpha : multi_indices(g.dim, 1, max_order)) {
        BootstrapEntry e;
        e.alpha = alpha;
        const Field& du_direct = dU.get(alpha);
        const Field& dv_direct = dV.get(alpha);
        const Field& dp_direct = dP.get(alpha);
        e.morrey_u = morrey_norm(du_direct, params, sampling).value;
        e.morrey_p = morrey_norm(dp_direct, params, sampling).value;
        e.morrey_v = morrey_norm(dv_direct, params, sampling).value;
        e.identity_mismatch_u = linf_norm(du_direct - bootstrap_rhs_u(dU, dG, alpha, g));
        e.identity_mismatch_v = linf_norm(dv_direct - bootstrap_rhs_v(dU, dV, dG, alpha, g));
        e.holder_u = guarded_holder(du_direct, noise_floor, holder_pairs, 0x517cc1b727220a95ull + salt);
        e.holder_p = guarded_holder(dp_direct, noise_floor, holder_pairs, 0x2545f4914f6cdd1dull + salt);
        e.holder_v = guarded_holder(dv_direct, noise_floor, holder_pairs, 0x9e3779b97f4a7c15ull + salt);
        rep.entries.push_back(std::move(e));
        ++salt;
    }
    return rep;
}

RegularityReport regularity_report(const WeakSolutionTriplet& triplet, double p,
                                   const RegularityOptions& opt) {
    const GridSpec& g = triplet.U.grid();
    if (!(p > g.dim)) throw std::invalid_argument("regularity_report: requires p > dim");
    triplet.validate();

    RegularityReport rep;
    rep.p = p;
    const auto sampling = BallSampling::dyadic(g, opt.sampling_levels);
    const TensorField G = deformation_tensor(triplet.V);

    rep.decay = check_decay_condition(triplet.U, G, p, sampling, opt.decay_tol);
    rep.decay_ok = rep.decay.pass;

    const TestBank bank = make_test_bank(g);
    rep.residuals = residual_very_weak(triplet, bank);
    rep.solution_ok = rep.residuals.momentum <= opt.residual_gate &&
                      rep.residuals.director <= opt.residual_gate &&
                      rep.residuals.divergence <= opt.residual_gate;
    rep.hypotheses_met = rep.decay_ok && rep.solution_ok;

    rep.morrey_u = morrey_value(triplet.U, p, sampling);
    rep.morrey_gradv = morrey_value(G, p, sampling);

    WeakSolutionTriplet work = triplet;
    if (!triplet.pressure_known) {
        work.P = pressure_from_uv(triplet.U, triplet.V);
        work.pressure_known = true;
        rep.pressure_recovered = true;
    }

    rep.identity = integral_identity_check(triplet, p, sampling);
    rep.bootstrap = bootstrap_derivatives(triplet, p, opt.bootstrap_order, sampling);

    const double noise_floor = 1e-10 * (1.0 + linf_norm(triplet.U) + linf_norm(G));
    rep.holder_u0 = guarded_holder(triplet.U, noise_floor, opt.holder_pairs, 0xd6e8feb86659fd93ull);
    rep.holder_p0 = guarded_holder(work.P, noise_floor, opt.holder_pairs, 0xc2b2ae3d27d4eb4full);
    rep.holder_v0 = guarded_holder(triplet.V, noise_floor, opt.holder_pairs, 0x165667b19e3779f9ull);

    rep.holder_floor = 1.0 - g.dim / p - opt.holder_slack;
    bool any = false;
    double minb = 0.0;
    auto fold = [&](const HolderFit& f) {
        if (!f.defined) return;
        minb = any ? std::min(minb, f.beta) : f.beta;
        any = true;
    };
    fold(rep.holder_u0);
    fold(rep.holder_p0);
    fold(rep.holder_v0);
    for (const auto& e : rep.bootstrap.entries) {
        fold(e.holder_u);
        fold(e.holder_p);
        fold(e.holder_v);
    }
    rep.min_defined_beta = any ? minb : 0.0;
    rep.holder_pass = !any || minb >= rep.holder_floor;

    if (!rep.hypotheses_met)
        rep.verdict = Verdict::hypotheses_not_met;
    else
        rep.verdict = rep.holder_pass ? Verdict::regular : Verdict::not_regular;
    return rep;
}

RegularityReport nse_mode(const VectorField& U, const std::optional<ScalarField>& P, double p,
                          const RegularityOptions& opt) {
    const GridSpec& g = U.grid();
    VectorField V = Field::vector(g);
    for (double& x : V.component(0)) x = 1.0;

    WeakSolutionTriplet triplet;
    triplet.U = U;
    triplet.V = std::move(V);
    if (P.has_value()) {
        triplet.P = *P;
        triplet.pressure_known = true;
    }
    return regularity_report(triplet, p, opt);
}

MhdReport mhd_residual(const VectorField& U, const VectorField& B, const ScalarField& P,
                       double p, const TestBank& bank, const BallSampling& sampling) {
    const GridSpec& g = U.grid();
    require_components(U, g.dim, "mhd_residual U");
    require_components(B, g.dim, "mhd_residual B");
    if (!B.grid().same_geometry(g)) throw std::invalid_argument("mhd_residual: grid mismatch");
    if (linf_norm(divergence(U)) > 1e-8 || linf_norm(divergence(B)) > 1e-8)
        throw std::invalid_argument("mhd_residual: inputs must be solenoidal");
    if (bank.size() == 0) throw std::invalid_argument("mhd_residual: empty test bank");
    (void)P;  // drops out of the weak form against divergence-free tests

    TensorField mom = outer_product(U, U, Dealias::off);
    mom -= outer_product(B, B, Dealias::off);
    TensorField ind = outer_product(B, U, Dealias::off);
    ind -= outer_product(U, B, Dealias::off);

    const double du = linf_norm(U);
    const double db = linf_norm(B);
    const double datascale = 1.0 + du * du + db * db;

    MhdReport rep;
    rep.bank_size = static_cast<int>(bank.size());
    for (std::size_t i = 0; i < bank.divfree.size(); ++i) {
        const VectorField& phi = bank.divfree[i];
        const double r =
            inner(U, laplacian(phi)) + pair_tensor_gradient(mom, deformation_tensor(phi));
        rep.momentum = std::max(rep.momentum, std::abs(r) / (bank.w21_divfree[i] * datascale));
    }
    for (std::size_t i = 0; i < bank.vectors.size(); ++i) {
        const VectorField& psi = bank.vectors[i];
        const double nl = pair_tensor_gradient(ind, deformation_tensor(psi));
        const double r = inner(B, laplacian(psi)) + nl;
        rep.induction = std::max(rep.induction, std::abs(r) / (bank.w21_vectors[i] * datascale));
        rep.induction_nonlinear =
            std::max(rep.induction_nonlinear, std::abs(nl) / (bank.w21_vectors[i] * datascale));
    }
    for (std::size_t i = 0; i < bank.scalars.size(); ++i) {
        const VectorField gchi = gradient(bank.scalars[i]);
        rep.divergence_u = std::max(rep.divergence_u,
                                    std::abs(inner(U, gchi)) / (bank.w21_scalars[i] * datascale));
        rep.divergence_b = std::max(rep.divergence_b,
                                    std::abs(inner(B, gchi)) / (bank.w21_scalars[i] * datascale));
    }
    rep.decay_u = check_decay_condition_single(U, p, sampling);
    rep.decay_b = check_decay_condition_single(B, p, sampling);
    return rep;
}

}  // namespace mflow
