#include "bq/bqf_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace bq {

namespace {

constexpr char kMagic[4] = {'B', 'Q', 'F', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_bytes(const std::string& in, std::size_t& pos, int count) {
  if (pos + count > in.size()) throw BqfError("bqf: truncated input");
  std::uint64_t v = 0;
  for (int b = 0; b < count; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  pos += count;
  return v;
}

}  // namespace

std::string encode_bqf(const SpectralField& f) {
  const auto& g = f.grid();
  std::string out;
  out.reserve(kHeaderBytes + f.data().size() * 16);
  out.append(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(f.components()));
  for (int a = 0; a < 3; ++a) put_u32(out, static_cast<std::uint32_t>(g.n(a)));
  put_f64(out, g.box_length());
  for (const cplx& c : f.data()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  return out;
}

SpectralField decode_bqf(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw BqfError("bqf: bad magic");
  std::size_t pos = 4;
  const auto rank = static_cast<int>(get_bytes(bytes, pos, 4));
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(get_bytes(bytes, pos, 4));
  const double box = std::bit_cast<double>(get_bytes(bytes, pos, 8));
  if (rank < 1 || rank > 64) throw BqfError("bqf: bad rank");
  GridPtr grid;
  try {
    grid = make_grid(n[0], n[1], n[2], box);
  } catch (const std::invalid_argument& e) {
    throw BqfError(std::string("bqf: bad grid: ") + e.what());
  }
  SpectralField f(grid, rank);
  const std::size_t need = kHeaderBytes + f.data().size() * 16;
  if (bytes.size() != need) throw BqfError("bqf: payload size mismatch");
  for (cplx& c : f.data()) {
    const double re = std::bit_cast<double>(get_bytes(bytes, pos, 8));
    const double im = std::bit_cast<double>(get_bytes(bytes, pos, 8));
    c = cplx(re, im);
  }
  return f;
}

void write_bqf(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw BqfError("bqf: cannot open " + path.string() + " for writing");
  const std::string bytes = encode_bqf(f);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw BqfError("bqf: write failed for " + path.string());
}

SpectralField read_bqf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw BqfError("bqf: cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_bqf(bytes);
}

}  // namespace bq
