#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace glp {

// Heavy-atom graph of one free amino acid (backbone N/CA/C/O/OXT plus side
// chain). Hydrogens are omitted; elements come from the atom names.
struct AminoAcidGraph {
  char code;
  std::vector<std::string> atoms;
  std::vector<std::pair<int, int>> bonds;
};

// The 20 standard residues, ordered as in the alphabet.
const std::vector<AminoAcidGraph>& amino_acid_graphs();

// ECFP-style circular identifiers of radius 0 and 1 over the residue's
// heavy-atom graph: the initial atom label is element plus heavy degree,
// radius-1 labels hash the sorted neighbor labels. Deduplicated, sorted.
// Non-standard residues (X, U, Z, B, O) and special tokens share one UNK
// identifier set.
std::vector<std::uint64_t> substructure_ids(char residue);

std::vector<std::uint64_t> unk_substructure_ids();

}  // namespace glp
