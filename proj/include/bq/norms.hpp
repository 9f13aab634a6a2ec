#pragma once

#include <map>
#include <vector>

#include "bq/spectral_field.hpp"

namespace bq {

struct NormReport {
  double l2 = 0.0;
  double l_inf = 0.0;
  /// ||f||_inf + ||grad f||_inf, pointwise Euclidean/Frobenius norms.
  double w1_inf = 0.0;
  /// order -> sqrt(V sum (1+|xi|^2)^k |c|^2)
  std::map<int, double> hk;
  /// sum_j 2^{3j} ||P_j f||_{L1} over dyadic shells 2^j <= |xi| < 2^{j+1}.
  double besov_3_11 = 0.0;
};

/// L2 norm by Parseval, V * sum |c|^2 over all components.
double l2_norm(const SpectralField& f);
/// H^k norm with weight (1 + |xi|^2)^k.
double hk_norm(const SpectralField& f, int k);
/// Max over grid points of the pointwise Euclidean norm.
double linf_norm(const SpectralField& f);
/// ||f||_inf + ||grad f||_inf on the grid.
double w1inf_norm(const SpectralField& f);
/// Max over grid points of the Frobenius norm of the gradient.
double grad_linf_norm(const SpectralField& f);
double besov_3_11(const SpectralField& f);

NormReport norms(const SpectralField& f, const std::vector<int>& orders);

/// Physical-space L2 by the rectangle rule; equals l2_norm for band-limited
/// fields. Used as an independent check.
double l2_norm_quadrature(const PhysicalField& f);

}  // namespace bq
