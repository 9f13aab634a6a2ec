#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bq/spectral_grid.hpp"

namespace bq {

enum class Rank : int { scalar = 1, vector3 = 3, vector4 = 4 };

/// Fourier coefficients of a real field on a SpectralGrid, component-major.
class SpectralField {
 public:
  SpectralField(GridPtr grid, int components);
  SpectralField(GridPtr grid, Rank rank) : SpectralField(std::move(grid), static_cast<int>(rank)) {}

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  int components() const { return ncomp_; }
  std::size_t size() const { return grid_->size(); }

  std::span<cplx> operator[](int c) { return {data_.data() + c * size(), size()}; }
  std::span<const cplx> operator[](int c) const { return {data_.data() + c * size(), size()}; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

  /// Selects a contiguous range of components as a new field.
  SpectralField slice(int first, int count) const;

 private:
  GridPtr grid_;
  int ncomp_;
  std::vector<cplx> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Point values of a real field, component-major, same layout as the grid.
class PhysicalField {
 public:
  PhysicalField(GridPtr grid, int components);

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  int components() const { return ncomp_; }
  std::size_t size() const { return grid_->size(); }

  std::span<double> operator[](int c) { return {data_.data() + c * size(), size()}; }
  std::span<const double> operator[](int c) const { return {data_.data() + c * size(), size()}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Grid coordinate x_axis of point index i along that axis.
  double coordinate(int axis, int i) const { return i * grid_->spacing(axis); }

 private:
  GridPtr grid_;
  int ncomp_;
  std::vector<double> data_;
};

/// Samples f(x1, x2, x3) on the grid into a scalar field.
PhysicalField sample(const GridPtr& grid, const std::function<double(double, double, double)>& f);

/// Largest |c(k) - conj(c(-k))| relative to the largest |c|, over all components.
double hermitian_defect(const SpectralField& f);

/// Overwrites each pair (k, -k) with its Hermitian average.
void symmetrize(SpectralField& f);

/// Relative L2 distance ||a - b|| / max(||b||, tiny), coefficients only.
double relative_l2_distance(const SpectralField& a, const SpectralField& b);

}  // namespace bq
