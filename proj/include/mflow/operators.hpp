#pragma once

#include "mflow/field.hpp"

namespace mflow {

inline constexpr int kMaxDerivativeOrder = 4;

// Dealiasing policy for pointwise products. follow_grid uses the grid's
// dealias flag; distributional pairings use off so that grid sums see the
// raw pointwise values.
enum class Dealias { follow_grid, off, on };

// ---- spectrum-level multipliers (in place) ----
void apply_heat(Spectrum& s, double t);
void apply_inverse_laplacian(Spectrum& s);  // zero mode (and zeroed Nyquist) -> 0
void apply_laplacian(Spectrum& s);
void apply_partial(Spectrum& s, const MultiIndex& alpha);
void apply_leray(Spectrum& vec);           // vector spectra only
void apply_dealias(Spectrum& s);           // 2/3-rule truncation
// vector spectrum -> vector spectrum: e^{t*Laplacian} P div of a tensor.
Spectrum divergence_of_tensor(const Spectrum& tensor);
Spectrum deformation_of_vector(const Spectrum& vec);  // (i,j) = ik_i * v_j

// ---- field-level operators ----
VectorField gradient(const ScalarField& f);
TensorField deformation_tensor(const VectorField& v);   // (i,j) = d_i V_j
ScalarField divergence(const VectorField& v);
VectorField tensor_divergence(const TensorField& t);    // [div T]_i = sum_j d_j T_ij
Field laplacian(const Field& f);
Field heat_semigroup(const Field& f, double t);
VectorField leray_project(const VectorField& v);
ScalarField riesz_riesz(const ScalarField& f, int i, int j);
Field inverse_laplacian(const Field& f);
Field partial_alpha(const Field& f, const MultiIndex& alpha,
                    int max_order = kMaxDerivativeOrder);
Field dealias_truncate(const Field& f);

// ---- pointwise products (dealiased per policy) ----
TensorField odot(const TensorField& a, const TensorField& b,
                 Dealias mode = Dealias::follow_grid);   // (i,j) = sum_k A_ik B_jk
TensorField outer_product(const VectorField& u, const VectorField& v,
                          Dealias mode = Dealias::follow_grid);  // (i,j) = u_i v_j
// (uV)_j = sum_i u_i V_ij
VectorField contract_vector_tensor(const VectorField& u, const TensorField& V,
                                   Dealias mode = Dealias::follow_grid);
ScalarField frobenius_inner(const TensorField& a, const TensorField& b,
                            Dealias mode = Dealias::follow_grid);
Field scalar_multiply(const ScalarField& s, const Field& f,
                      Dealias mode = Dealias::follow_grid);

ScalarField extract_component(const Field& f, int c);
Field remove_mean(const Field& f);

}  // namespace mflow
