#include "glp/io_matrix.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "glp/errors.hpp"

namespace glp {

namespace {
constexpr char kMagic[4] = {'G', 'L', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_matrix_binary(const std::string& path, const Tensor& m) {
  if (m.rows != m.cols) throw DataError("matrix binary expects a square matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(kMagic, 4);
  std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), 4);
  std::uint64_t l = static_cast<std::uint64_t>(m.rows);
  out.write(reinterpret_cast<const char*>(&l), 8);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (double v : m.data) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      for (int b = 0; b < 8; ++b) {
        char byte = static_cast<char>((bits >> (8 * b)) & 0xff);
        out.write(&byte, 1);
      }
    }
  }
}

Tensor read_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t l = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&l), 8);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("'" + path + "' is not a matrix binary (magic mismatch)");
  if (version != kVersion) throw DataError("'" + path + "': unsupported version");
  Tensor m(static_cast<int>(l), static_cast<int>(l));
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (double& v : m.data) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      std::memcpy(&v, &bits, 8);
    }
  }
  if (!in) throw DataError("'" + path + "': truncated payload");
  return m;
}

std::string matrix_to_tsv(const Tensor& m) {
  std::string out;
  char buf[64];
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(r, c));
      out += buf;
      out += (c + 1 == m.cols) ? '\n' : '\t';
    }
  }
  return out;
}

std::string matrix_heatmap(const Tensor& m, double lo, double hi) {
  static const char ramp[] = " .:-=+*#%@";
  std::string out;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      double v = (m.at(r, c) - lo) / (hi - lo);
      int idx = static_cast<int>(v * 9.999);
      if (idx < 0) idx = 0;
      if (idx > 9) idx = 9;
      out += ramp[idx];
    }
    out += '\n';
  }
  return out;
}

}  // namespace glp
