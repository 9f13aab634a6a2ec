#include "bq/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bq {

namespace {

void require_compatible(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw std::invalid_argument("spectral field: incompatible operands");
  }
}

}  // namespace

SpectralField::SpectralField(GridPtr grid, int components)
    : grid_(std::move(grid)), ncomp_(components) {
  if (!grid_) throw std::invalid_argument("spectral field: null grid");
  if (components < 1) throw std::invalid_argument("spectral field: components must be >= 1");
  data_.assign(static_cast<std::size_t>(components) * grid_->size(), cplx{});
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

SpectralField SpectralField::slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > ncomp_) {
    throw std::out_of_range("spectral field: bad component slice");
  }
  SpectralField out(grid_, count);
  std::copy_n(data_.begin() + first * size(), count * size(), out.data_.begin());
  return out;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

PhysicalField::PhysicalField(GridPtr grid, int components)
    : grid_(std::move(grid)), ncomp_(components) {
  if (!grid_) throw std::invalid_argument("physical field: null grid");
  data_.assign(static_cast<std::size_t>(components) * grid_->size(), 0.0);
}

PhysicalField sample(const GridPtr& grid, const std::function<double(double, double, double)>& f) {
  PhysicalField out(grid, 1);
  auto v = out[0];
  const auto d = grid->dims();
  for (int i1 = 0; i1 < d[0]; ++i1)
    for (int i2 = 0; i2 < d[1]; ++i2)
      for (int i3 = 0; i3 < d[2]; ++i3) {
        v[grid->flat(i1, i2, i3)] =
            f(i1 * grid->spacing(0), i2 * grid->spacing(1), i3 * grid->spacing(2));
      }
  return out;
}

double hermitian_defect(const SpectralField& f) {
  const auto& g = f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f[c];
    for (std::size_t i = 0; i < v.size(); ++i) {
      scale = std::max(scale, std::abs(v[i]));
      worst = std::max(worst, std::abs(v[i] - std::conj(v[g.conjugate(i)])));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

void symmetrize(SpectralField& f) {
  const auto& g = f.grid();
  for (int c = 0; c < f.components(); ++c) {
    auto v = f[c];
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t j = g.conjugate(i);
      if (j < i) continue;
      const cplx avg = 0.5 * (v[i] + std::conj(v[j]));
      v[i] = avg;
      v[j] = std::conj(avg);
    }
  }
}

double relative_l2_distance(const SpectralField& a, const SpectralField& b) {
  require_compatible(a, b);
  double num = 0.0;
  double den = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    num += std::norm(da[i] - db[i]);
    den += std::norm(db[i]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace bq
