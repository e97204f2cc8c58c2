#pragma once

#include <optional>
#include <vector>

#include "mflow/field.hpp"
#include "mflow/morrey.hpp"

namespace mflow {

// One time sample of the auxiliary parabolic system: the velocity u and the
// matrix unknown V_mat (which stands for the deformation tensor of the
// director when replaying the stationary argument).
struct State {
    VectorField u;
    TensorField v_mat;
};

struct Trajectory {
    std::vector<double> times;  // strictly increasing, starts at 0
    std::vector<State> states;
    VectorField director;  // fixed unit field entering the cubic form
    double grading = 2.0;

    void validate() const;
};

struct SolverConfig {
    double p = 4.0;
    double horizon = 0.25;  // T
    int steps = 64;         // M; mesh t_m = T (m/M)^grading
    int picard_max = 30;
    double picard_tol = 1e-8;
    double grading = 2.0;
    int sampling_levels = 6;  // dyadic levels of the E_T ball sampling

    void validate(int dim) const;
};

std::vector<double> graded_mesh(double horizon, int steps, double grading);

// The four bilinear Duhamel forms of the integral formulation, as positive
// integrals over [0, t]:
//   B1 = int e^{(t-s)Lap} P div(u (x) u') ds          (vector)
//   B2 = int e^{(t-s)Lap} P div(V . V')  ds           (vector, odot product)
//   B3 = int e^{(t-s)Lap} grad (x) (u V) ds           (tensor)
//   B4 = int e^{(t-s)Lap} grad (x) (<V,V'> director)  (tensor)
// Quadrature: midpoint rule on the graded mesh, fields interpolated linearly
// to slice midpoints, exact heat propagation of each slice. t must be a mesh
// point. The mild iteration combines them with the Duhamel signs
// u = e^{tL}u0 - B1 - B2,  V = e^{tL}V0 - B3 + B4.
VectorField b1(const std::vector<double>& times, const std::vector<VectorField>& u,
               const std::vector<VectorField>& u2, double t);
VectorField b2(const std::vector<double>& times, const std::vector<TensorField>& V,
               const std::vector<TensorField>& V2, double t);
TensorField b3(const std::vector<double>& times, const std::vector<VectorField>& u,
               const std::vector<TensorField>& V, double t);
TensorField b4(const std::vector<double>& times, const std::vector<TensorField>& V,
               const std::vector<TensorField>& V2, const VectorField& director, double t);

// All four forms along the whole mesh (shared spectral slice cache).
struct BilinearSeries {
    std::vector<VectorField> b12;  // B1 + B2 at each mesh time
    std::vector<TensorField> b34_transport;  // B3
    std::vector<TensorField> b4_cubic;       // B4
};

struct PicardResult {
    Trajectory traj;
    std::vector<double> et_norms;    // E_T norm of each iterate
    std::vector<double> increments;  // E_T norm of successive differences
    bool converged = false;
    bool diverged = false;
    double residual = 0.0;  // ||X - Phi(X)||_{E_T} of the returned trajectory
    int iterations = 0;
};

PicardResult picard_solve(const VectorField& u0, const TensorField& V0,
                          const VectorField& director, const SolverConfig& cfg);

// Halves the horizon (up to max_halvings) until the iteration converges with
// measured increment ratio <= 1/2; the contraction certificate is a
// posteriori, since the existence constants are not explicit.
struct AutoSolveResult {
    PicardResult result;
    SolverConfig used;
    int halvings = 0;
    double increment_ratio = 0.0;
    bool satisfied = false;  // converged with ratio <= 1/2 before halvings ran out
};

AutoSolveResult picard_solve_auto(const VectorField& u0, const TensorField& V0,
                                  const VectorField& director, SolverConfig cfg,
                                  int max_halvings = 5);

// E_T norm of the pair trajectory, ||(u, V)|| = ||u||_{E_T} + ||V||_{E_T}.
double et_norm(const Trajectory& traj, double p, const BallSampling& sampling);

struct ContractionFit {
    double slope_b12 = 0.0;
    double constant_b12 = 0.0;
    double slope_b34 = 0.0;
    double constant_b34 = 0.0;
    struct Row {
        double horizon;
        double norm_b12;
        double norm_b34;
    };
    std::vector<Row> rows;
};

// Freezes the inputs at their heat evolution and measures the E_T norms of
// B1+B2 and B3+B4 against the horizon; the fitted slope estimates the
// T-exponent 1/2 - n/2p of the bilinear bound.
ContractionFit contraction_exponent_fit(const VectorField& u0, const TensorField& V0,
                                        const VectorField& director, double p,
                                        const std::vector<double>& horizons, int steps = 32);

struct Schedule {
    int steps;
    double grading = 2.0;
    int picard_max = 30;
};

struct UniquenessResult {
    double max_divergence = 0.0;  // sup_t M^{2,p} distance over common mesh times
    int common_times = 0;
    int iterations_a = 0;
    int iterations_b = 0;
};

UniquenessResult uniqueness_experiment(const VectorField& u0, const TensorField& V0,
                                       const VectorField& director, const SolverConfig& cfg,
                                       const Schedule& schedule_a, const Schedule& schedule_b);

struct SmoothingCheck {
    double sup_weighted = 0.0;  // sup_t t^{n/2p} ||e^{tL}u0||_inf
    double slope = 0.0;         // log-log slope of ||e^{tL}u0||_inf vs t
    bool slope_defined = false;
    struct Row {
        double t;
        double sup_norm;
        double weighted;
    };
    std::vector<Row> rows;
};

SmoothingCheck smoothing_estimate_check(const Field& u0, double p,
                                        const std::vector<double>& t_list);

}  // namespace mflow
