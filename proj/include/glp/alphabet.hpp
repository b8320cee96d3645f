#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace glp {

// Residue alphabet: the 20 standard amino acids followed by the extended
// symbols X (unknown), U (selenocysteine), Z, B (ambiguous), O (pyrrolysine).
// Token ids 0..24 are residues; 25..28 are the special tokens.
inline constexpr std::string_view kResidueAlphabet = "ACDEFGHIKLMNPQRSTVWYXUZBO";
inline constexpr int kNumResidues = 25;
inline constexpr int kNumStandardResidues = 20;

inline constexpr int kMaskToken = 25;
inline constexpr int kPadToken = 26;
inline constexpr int kClsToken = 27;
inline constexpr int kSepToken = 28;
inline constexpr int kVocabSize = 29;

constexpr bool is_residue_symbol(char c) {
  for (char a : kResidueAlphabet)
    if (a == c) return true;
  return false;
}

// Unknown letters collapse to 'X'.
constexpr char canonical_residue(char c) {
  char u = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  return is_residue_symbol(u) ? u : 'X';
}

constexpr int residue_token(char c) {
  char u = canonical_residue(c);
  for (int i = 0; i < kNumResidues; ++i)
    if (kResidueAlphabet[i] == u) return i;
  return 20;  // 'X'
}

inline std::vector<int> tokenize(std::string_view sequence) {
  std::vector<int> out;
  out.reserve(sequence.size());
  for (char c : sequence) out.push_back(residue_token(c));
  return out;
}

inline std::string token_name(int t) {
  if (t >= 0 && t < kNumResidues) return std::string(1, kResidueAlphabet[t]);
  switch (t) {
    case kMaskToken: return "[MASK]";
    case kPadToken: return "[PAD]";
    case kClsToken: return "[CLS]";
    case kSepToken: return "[SEP]";
    default: return "?";
  }
}

}  // namespace glp
