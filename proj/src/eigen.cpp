#include "bq/eigen.hpp"

#include <cmath>

namespace bq {

namespace {

double norm_h(const Vec3& xi) { return std::hypot(xi[0], xi[1]); }
double norm3(const Vec3& xi) { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }

void require_horizontal(const Vec3& xi, const char* what) {
  if (xi[0] == 0.0 && xi[1] == 0.0)
    throw DegenerateMode(std::string(what) + ": xi_h = 0 has no dispersive modes");
}

}  // namespace

double dispersion_relation(const Vec3& xi) {
  const double r = norm3(xi);
  if (r == 0.0) throw std::invalid_argument("dispersion_relation: xi = 0");
  return norm_h(xi) / r;
}

EigenBasis eigen_basis(const Vec3& xi, Formulation formulation) {
  require_horizontal(xi, "eigen_basis");
  const double h = norm_h(xi);
  const double r = norm3(xi);
  const double h2 = xi[0] * xi[0] + xi[1] * xi[1];
  EigenBasis e;
  e.formulation = formulation;
  e.eigenvalue_plus = cplx(0.0, h / r);
  e.eigenvalue_minus = cplx(0.0, -h / r);
  if (formulation == Formulation::vorticity) {
    e.stationary = {-xi[0] * xi[2], -xi[1] * xi[2], h2, 0.0};
    e.disp_plus = {-xi[1] * r, xi[0] * r, 0.0, h};
    e.disp_minus = {-xi[1] * r, xi[0] * r, 0.0, -h};
  } else {
    e.stationary = {-xi[1], xi[0], 0.0, 0.0};
    e.disp_plus = {xi[0] * xi[2], xi[1] * xi[2], -h2, cplx(0.0, -h * r)};
    e.disp_minus = {xi[0] * xi[2], xi[1] * xi[2], -h2, cplx(0.0, h * r)};
  }
  return e;
}

Mat4c linear_symbol(const Vec3& xi, Formulation formulation) {
  const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  if (r2 == 0.0) throw std::invalid_argument("linear_symbol: xi = 0");
  Mat4c m{};
  const cplx I(0.0, 1.0);
  if (formulation == Formulation::vorticity) {
    m[0][3] = -I * xi[1];
    m[1][3] = I * xi[0];
    m[3][0] = -I * xi[1] / r2;
    m[3][1] = I * xi[0] / r2;
  } else {
    m[0][3] = -xi[0] * xi[2] / r2;
    m[1][3] = -xi[1] * xi[2] / r2;
    m[2][3] = (xi[0] * xi[0] + xi[1] * xi[1]) / r2;
    m[3][2] = -1.0;
  }
  return m;
}

Vec4c apply(const Mat4c& m, const Vec4c& v) {
  Vec4c out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
  return out;
}

Vec3 phase_gradient(const Vec3& xi) {
  require_horizontal(xi, "phase_gradient");
  const double h = norm_h(xi);
  const double r = norm3(xi);
  const double s = xi[2] / (r * r * r);
  return {s * xi[0] * xi[2] / h, s * xi[1] * xi[2] / h, -s * h};
}

double phase_hessian_invsqrt(const Vec3& xi) {
  require_horizontal(xi, "phase_hessian_invsqrt");
  if (xi[2] == 0.0) throw DegenerateMode("phase_hessian_invsqrt: xi_3 = 0");
  const double h = norm_h(xi);
  const double r = norm3(xi);
  return std::sqrt(h) * std::pow(r, 4.5) / (xi[2] * xi[2]);
}

}  // namespace bq
