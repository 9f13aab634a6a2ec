#pragma once

#include "bq/spectral_field.hpp"

namespace bq {

enum class Axis : int { x1 = 0, x2 = 1, x3 = 2 };

// Spectral differential operators. All act component-wise unless stated and
// preserve Hermitian symmetry. First derivatives treat the Nyquist index as
// wavenumber 0 so that real fields stay real.

SpectralField derivative(const SpectralField& f, Axis axis);
/// (d1 f, d2 f, 0) for a scalar f.
SpectralField grad_h(const SpectralField& f);
SpectralField laplacian_h(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);
/// Multiplies by -1/|xi|^2; the xi = 0 coefficient is set to zero.
SpectralField inv_laplacian(const SpectralField& f);
/// Multiplies by -1/|xi_h|^2; every xi_h = 0 coefficient is set to zero.
SpectralField inv_laplacian_h(const SpectralField& f);

/// curl of a vector3 field.
SpectralField curl(const SpectralField& v);
/// Divergence of the first three components of a vector3/vector4 field.
SpectralField divergence(const SpectralField& v);
/// u = (-Delta)^{-1} curl(omega) for a vector3 field; xi = 0 maps to zero.
SpectralField biot_savart(const SpectralField& omega);

/// ||xi . v|| / ||(|xi| v)|| over the first three components (0 for v = 0).
double divergence_residual(const SpectralField& v);

/// Zeroes every mode outside the two-thirds mask. Idempotent.
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

}  // namespace bq
