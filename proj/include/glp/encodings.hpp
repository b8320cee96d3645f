#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/autograd.hpp"
#include "glp/geom.hpp"
#include "glp/tensor.hpp"

namespace glp {

// Learnable pieces of the pairwise distance encoding: K Gaussian kernels,
// per-type-pair affine scalars, and the two projection matrices that turn the
// K basis values into one attention-bias scalar per pair.
struct DistanceEncoderParams {
  Tensor centers;     // 1 x K
  Tensor widths;      // 1 x K (|width| used, floored)
  Tensor pair_scale;  // 1 x P over unordered residue-type pairs
  Tensor pair_shift;  // 1 x P
  Tensor mix;         // K x K
  Tensor out;         // K x 1
  double width_floor = 1e-3;

  int num_kernels() const { return centers.cols; }

  // Centers evenly spaced over [0, 20] Angstrom, widths equal to the
  // spacing, scale 1 / shift 0, seeded random projections.
  static DistanceEncoderParams init(int num_kernels, std::mt19937_64& gen);
};

// Canonical index of an unordered residue-type pair (25 types, 325 pairs).
int pair_type_index(int token_a, int token_b);
int pair_type_index(char a, char b);
inline constexpr int kNumPairTypes = 25 * 26 / 2;

// Basis values for one pair; forward-only convenience over the graph op.
std::vector<double> gaussian_basis_point(double dist, char type_a, char type_b,
                                         const DistanceEncoderParams& params);

// Graph construction shared by the model and the standalone encoder:
// gaussian_basis -> GELU(phi * mix) * out, reshaped to L x L.
Value build_distance_bias(Tape& tape, Value centers, Value widths, Value pair_scale,
                          Value pair_shift, Value mix, Value out, const std::vector<Vec3>& coords,
                          const std::vector<int>& tokens, double width_floor);

// Forward-only L x L bias matrix from residue coordinates and types.
Tensor distance_encoding(const std::vector<Vec3>& coords, const std::string& types,
                         const DistanceEncoderParams& params);

// Dense substructure vocabulary over the 20 residue graphs plus the UNK set;
// every vocab token (incl. specials) maps to an identifier list.
struct MolecularVocab {
  std::vector<std::uint64_t> identifiers;             // sorted, distinct
  std::unordered_map<std::uint64_t, int> dense_index;
  std::vector<std::vector<int>> per_token;            // kVocabSize entries

  static const MolecularVocab& instance();
  int size() const { return static_cast<int>(identifiers.size()); }
};

// Row i = sum of the substructure embeddings of tokens[i].
Value build_molecular_encoding(Tape& tape, Value table, const std::vector<int>& tokens);

// Forward-only L x d matrix.
Tensor molecular_encoding(const std::vector<int>& tokens, const Tensor& table);

}  // namespace glp
