#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "bq/spectral_field.hpp"

namespace bq {

// BQF1 container:
//   "BQF1" | u32 rank | u32 n1 | u32 n2 | u32 n3 | f64 box_length |
//   rank * n1*n2*n3 complex coefficients as interleaved f64 (re, im),
//   component-major, lattice row-major with axis 1 slowest.
// All numbers little-endian.

class BqfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_bqf(const std::filesystem::path& path, const SpectralField& f);
/// Reads a field; the grid is rebuilt from the header.
SpectralField read_bqf(const std::filesystem::path& path);

std::string encode_bqf(const SpectralField& f);
SpectralField decode_bqf(const std::string& bytes);

}  // namespace bq
