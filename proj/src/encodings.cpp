#include "glp/encodings.hpp"

#include <algorithm>
#include <cmath>

#include "glp/alphabet.hpp"
#include "glp/amino_acids.hpp"
#include "glp/errors.hpp"

namespace glp {

DistanceEncoderParams DistanceEncoderParams::init(int num_kernels, std::mt19937_64& gen) {
  if (num_kernels < 1) throw UsageError("num_kernels must be >= 1");
  DistanceEncoderParams p;
  const double spacing = 20.0 / num_kernels;
  p.centers = Tensor(1, num_kernels);
  p.widths = Tensor(1, num_kernels);
  for (int k = 0; k < num_kernels; ++k) {
    p.centers.data[k] = spacing * k;
    p.widths.data[k] = spacing;
  }
  p.pair_scale = Tensor::full(1, kNumPairTypes, 1.0);
  p.pair_shift = Tensor(1, kNumPairTypes);
  p.mix = Tensor::randn(num_kernels, num_kernels, 0.3, gen);
  p.out = Tensor::randn(num_kernels, 1, 0.3, gen);
  return p;
}

int pair_type_index(int token_a, int token_b) {
  int a = std::min(token_a, token_b);
  int b = std::max(token_a, token_b);
  if (a < 0 || b >= kNumResidues) throw DataError("pair_type_index: token outside residue range");
  // Upper-triangle (incl. diagonal) of the symmetric 25 x 25 table.
  return a * kNumResidues - a * (a - 1) / 2 + (b - a);
}

int pair_type_index(char a, char b) {
  return pair_type_index(residue_token(a), residue_token(b));
}

std::vector<double> gaussian_basis_point(double dist, char type_a, char type_b,
                                         const DistanceEncoderParams& params) {
  if (!std::isfinite(dist) || dist < 0) throw DataError("gaussian_basis: bad distance");
  const int k = params.num_kernels();
  const int tp = pair_type_index(type_a, type_b);
  double x = params.pair_scale.data[tp] * dist + params.pair_shift.data[tp];
  std::vector<double> phi(k);
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  for (int i = 0; i < k; ++i) {
    double s = std::max(std::abs(params.widths.data[i]), params.width_floor);
    double t = (x - params.centers.data[i]) / s;
    phi[i] = -(inv_sqrt_2pi / s) * std::exp(-0.5 * t * t);
  }
  return phi;
}

Value build_distance_bias(Tape& tape, Value centers, Value widths, Value pair_scale,
                          Value pair_shift, Value mix, Value out, const std::vector<Vec3>& coords,
                          const std::vector<int>& tokens, double width_floor) {
  const int l = static_cast<int>(coords.size());
  if (l < 2) throw DataError("distance_encoding: need at least 2 residues");
  if (tokens.size() != coords.size())
    throw DataError("distance_encoding: coordinate/type length mismatch");
  for (const Vec3& v : coords)
    for (double x : v)
      if (!std::isfinite(x)) throw DataError("distance_encoding: non-finite coordinate");

  std::vector<double> distances(static_cast<std::size_t>(l) * l);
  std::vector<int> pair_types(distances.size());
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      distances[static_cast<std::size_t>(i) * l + j] = distance(coords[i], coords[j]);
      pair_types[static_cast<std::size_t>(i) * l + j] = pair_type_index(tokens[i], tokens[j]);
    }
  }
  Value phi = tape.gaussian_basis(centers, widths, pair_scale, pair_shift, std::move(distances),
                                  std::move(pair_types), width_floor);
  Value hidden = tape.gelu(tape.matmul(phi, mix));
  Value bias_col = tape.matmul(hidden, out);  // (L*L) x 1
  return tape.reshape(bias_col, l, l);
}

Tensor distance_encoding(const std::vector<Vec3>& coords, const std::string& types,
                         const DistanceEncoderParams& params) {
  std::vector<int> tokens = tokenize(types);
  Tape tape;
  Value bias = build_distance_bias(
      tape, tape.constant(params.centers, "centers"), tape.constant(params.widths, "widths"),
      tape.constant(params.pair_scale, "pair_scale"), tape.constant(params.pair_shift, "pair_shift"),
      tape.constant(params.mix, "mix"), tape.constant(params.out, "out"), coords, tokens,
      params.width_floor);
  return bias->value;
}

const MolecularVocab& MolecularVocab::instance() {
  static const MolecularVocab vocab = [] {
    MolecularVocab v;
    std::vector<std::uint64_t> all = unk_substructure_ids();
    for (int t = 0; t < kNumStandardResidues; ++t) {
      auto ids = substructure_ids(kResidueAlphabet[t]);
      all.insert(all.end(), ids.begin(), ids.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    v.identifiers = all;
    for (std::size_t i = 0; i < all.size(); ++i) v.dense_index[all[i]] = static_cast<int>(i);

    v.per_token.resize(kVocabSize);
    for (int t = 0; t < kVocabSize; ++t) {
      std::vector<std::uint64_t> ids = (t < kNumStandardResidues)
                                           ? substructure_ids(kResidueAlphabet[t])
                                           : unk_substructure_ids();
      for (std::uint64_t id : ids) v.per_token[t].push_back(v.dense_index.at(id));
    }
    return v;
  }();
  return vocab;
}

Value build_molecular_encoding(Tape& tape, Value table, const std::vector<int>& tokens) {
  const MolecularVocab& vocab = MolecularVocab::instance();
  std::vector<std::vector<int>> lists;
  lists.reserve(tokens.size());
  for (int t : tokens) {
    if (t < 0 || t >= kVocabSize) throw DataError("molecular_encoding: token out of vocab");
    lists.push_back(vocab.per_token[t]);
  }
  return tape.sum_embeddings(table, std::move(lists));
}

Tensor molecular_encoding(const std::vector<int>& tokens, const Tensor& table) {
  Tape tape;
  return build_molecular_encoding(tape, tape.constant(table, "mol_table"), tokens)->value;
}

}  // namespace glp
