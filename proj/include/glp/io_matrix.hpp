#pragma once

#include <string>

#include "glp/tensor.hpp"

namespace glp {

// Flat square-matrix binary: magic "GLPM", u32 version, u64 L, then L*L
// little-endian f64 row-major. Used for the distance-bias dump and the
// contact probability matrix.
void write_matrix_binary(const std::string& path, const Tensor& m);
Tensor read_matrix_binary(const std::string& path);

// Tab-separated debug dump (%.17g).
std::string matrix_to_tsv(const Tensor& m);

// Text heat map: one character per cell by value decile within [lo, hi].
std::string matrix_heatmap(const Tensor& m, double lo = 0.0, double hi = 1.0);

}  // namespace glp
