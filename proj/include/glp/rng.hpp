#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace glp {

// Stable 64-bit FNV-1a; used wherever a hash feeds a seed so results do not
// depend on the standard library's std::hash.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr std::uint64_t fnv1a64_bytes(const void* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

// Bounded draw. The modulo bias is ~n/2^64 and irrelevant here; what matters
// is that the mapping is fixed by the standard-specified mt19937_64 stream
// (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) { return gen() % n; }

inline double unit_real(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// First k entries of a seeded Fisher-Yates shuffle of 0..n-1 (sampling
// without replacement).
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           std::mt19937_64& gen) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  if (k > n) k = n;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(gen, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace glp
