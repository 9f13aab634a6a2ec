#pragma once

#include <array>
#include <stdexcept>

#include "bq/spectral_grid.hpp"

namespace bq {

/// Raised for wavevectors where the eigenbasis or phase quantity is undefined.
class DegenerateMode : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Formulation { velocity, vorticity };

using Vec4c = std::array<cplx, 4>;
using Mat4c = std::array<Vec4c, 4>;

/// Eigenvectors of the linear symbol at one wavevector with xi_h != 0.
struct EigenBasis {
  Vec4c stationary{};
  Vec4c disp_plus{};
  Vec4c disp_minus{};
  cplx eigenvalue_plus;
  cplx eigenvalue_minus;
  Formulation formulation = Formulation::vorticity;
};

/// |xi_h| / |xi|. Throws std::invalid_argument for xi = 0.
double dispersion_relation(const Vec3& xi);

/// Throws DegenerateMode when xi_h = 0.
EigenBasis eigen_basis(const Vec3& xi, Formulation formulation);

/// Linear 4x4 symbol whose eigenpairs are those of eigen_basis.
///
/// velocity: d/dt (u, T) = sigma B (u, T), with the linear pressure folded in.
/// vorticity: the (omega, T) symbol written for the reflected Fourier
/// convention d/dx <-> -i xi. Under this library's convention (d/dx <-> i xi)
/// the generator is A(-xi) = -A(xi), so the mode labelled "plus" rotates with
/// exp(-i sigma t |xi_h|/|xi|).
Mat4c linear_symbol(const Vec3& xi, Formulation formulation);

Vec4c apply(const Mat4c& m, const Vec4c& v);

/// Gradient of |xi_h|/|xi|. Throws DegenerateMode when xi_h = 0.
Vec3 phase_gradient(const Vec3& xi);

/// |det Hess(|xi_h|/|xi|)|^{-1/2} = |xi_3|^{-2} |xi_h|^{1/2} |xi|^{9/2}.
/// Throws DegenerateMode when xi_h = 0 or xi_3 = 0.
double phase_hessian_invsqrt(const Vec3& xi);

}  // namespace bq
