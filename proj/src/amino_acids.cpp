#include "glp/amino_acids.hpp"

#include <algorithm>

#include "glp/alphabet.hpp"
#include "glp/rng.hpp"

namespace glp {

namespace {

AminoAcidGraph make_graph(char code, std::vector<std::string> side_atoms,
                          std::vector<std::pair<std::string, std::string>> side_bonds) {
  AminoAcidGraph g;
  g.code = code;
  g.atoms = {"N", "CA", "C", "O", "OXT"};
  for (auto& a : side_atoms) g.atoms.push_back(std::move(a));
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < g.atoms.size(); ++i)
      if (g.atoms[i] == name) return static_cast<int>(i);
    return -1;
  };
  const std::pair<const char*, const char*> backbone[] = {
      {"N", "CA"}, {"CA", "C"}, {"C", "O"}, {"C", "OXT"}};
  for (auto [a, b] : backbone) g.bonds.emplace_back(index_of(a), index_of(b));
  for (auto& [a, b] : side_bonds) g.bonds.emplace_back(index_of(a), index_of(b));
  return g;
}

std::vector<AminoAcidGraph> build_graphs() {
  std::vector<AminoAcidGraph> graphs;
  graphs.push_back(make_graph('A', {"CB"}, {{"CA", "CB"}}));
  graphs.push_back(make_graph('C', {"CB", "SG"}, {{"CA", "CB"}, {"CB", "SG"}}));
  graphs.push_back(make_graph('D', {"CB", "CG", "OD1", "OD2"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "OD1"}, {"CG", "OD2"}}));
  graphs.push_back(make_graph('E', {"CB", "CG", "CD", "OE1", "OE2"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "OE1"}, {"CD", "OE2"}}));
  graphs.push_back(make_graph('F', {"CB", "CG", "CD1", "CD2", "CE1", "CE2", "CZ"},
                              {{"CA", "CB"},
                               {"CB", "CG"},
                               {"CG", "CD1"},
                               {"CG", "CD2"},
                               {"CD1", "CE1"},
                               {"CD2", "CE2"},
                               {"CE1", "CZ"},
                               {"CE2", "CZ"}}));
  graphs.push_back(make_graph('G', {}, {}));
  graphs.push_back(make_graph('H', {"CB", "CG", "ND1", "CD2", "CE1", "NE2"},
                              {{"CA", "CB"},
                               {"CB", "CG"},
                               {"CG", "ND1"},
                               {"CG", "CD2"},
                               {"ND1", "CE1"},
                               {"CE1", "NE2"},
                               {"NE2", "CD2"}}));
  graphs.push_back(make_graph('I', {"CB", "CG1", "CG2", "CD1"},
                              {{"CA", "CB"}, {"CB", "CG1"}, {"CB", "CG2"}, {"CG1", "CD1"}}));
  graphs.push_back(make_graph('K', {"CB", "CG", "CD", "CE", "NZ"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "CE"}, {"CE", "NZ"}}));
  graphs.push_back(make_graph('L', {"CB", "CG", "CD1", "CD2"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD1"}, {"CG", "CD2"}}));
  graphs.push_back(make_graph('M', {"CB", "CG", "SD", "CE"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "SD"}, {"SD", "CE"}}));
  graphs.push_back(make_graph('N', {"CB", "CG", "OD1", "ND2"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "OD1"}, {"CG", "ND2"}}));
  graphs.push_back(make_graph('P', {"CB", "CG", "CD"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "N"}}));
  graphs.push_back(make_graph('Q', {"CB", "CG", "CD", "OE1", "NE2"},
                              {{"CA", "CB"}, {"CB", "CG"}, {"CG", "CD"}, {"CD", "OE1"}, {"CD", "NE2"}}));
  graphs.push_back(make_graph('R', {"CB", "CG", "CD", "NE", "CZ", "NH1", "NH2"},
                              {{"CA", "CB"},
                               {"CB", "CG"},
                               {"CG", "CD"},
                               {"CD", "NE"},
                               {"NE", "CZ"},
                               {"CZ", "NH1"},
                               {"CZ", "NH2"}}));
  graphs.push_back(make_graph('S', {"CB", "OG"}, {{"CA", "CB"}, {"CB", "OG"}}));
  graphs.push_back(make_graph('T', {"CB", "OG1", "CG2"},
                              {{"CA", "CB"}, {"CB", "OG1"}, {"CB", "CG2"}}));
  graphs.push_back(make_graph('V', {"CB", "CG1", "CG2"},
                              {{"CA", "CB"}, {"CB", "CG1"}, {"CB", "CG2"}}));
  graphs.push_back(make_graph('W', {"CB", "CG", "CD1", "CD2", "NE1", "CE2", "CE3", "CZ2", "CZ3", "CH2"},
                              {{"CA", "CB"},
                               {"CB", "CG"},
                               {"CG", "CD1"},
                               {"CG", "CD2"},
                               {"CD1", "NE1"},
                               {"NE1", "CE2"},
                               {"CE2", "CD2"},
                               {"CD2", "CE3"},
                               {"CE3", "CZ3"},
                               {"CZ3", "CH2"},
                               {"CH2", "CZ2"},
                               {"CZ2", "CE2"}}));
  graphs.push_back(make_graph('Y', {"CB", "CG", "CD1", "CD2", "CE1", "CE2", "CZ", "OH"},
                              {{"CA", "CB"},
                               {"CB", "CG"},
                               {"CG", "CD1"},
                               {"CG", "CD2"},
                               {"CD1", "CE1"},
                               {"CD2", "CE2"},
                               {"CE1", "CZ"},
                               {"CE2", "CZ"},
                               {"CZ", "OH"}}));
  // Reorder to alphabet order (already alphabetical by construction above).
  return graphs;
}

std::vector<std::uint64_t> ids_for_graph(const AminoAcidGraph& g) {
  const std::size_t n = g.atoms.size();
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : g.bonds) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::string> label0(n);
  for (std::size_t i = 0; i < n; ++i)
    label0[i] = std::string(1, g.atoms[i][0]) + ":" + std::to_string(adj[i].size());

  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(fnv1a64("0|" + label0[i]));
    std::vector<std::string> neigh;
    for (int j : adj[i]) neigh.push_back(label0[j]);
    std::sort(neigh.begin(), neigh.end());
    std::string l1 = "1|" + label0[i] + "|";
    for (std::size_t k = 0; k < neigh.size(); ++k) {
      if (k) l1 += ",";
      l1 += neigh[k];
    }
    ids.push_back(fnv1a64(l1));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

const std::vector<AminoAcidGraph>& amino_acid_graphs() {
  static const std::vector<AminoAcidGraph> graphs = build_graphs();
  return graphs;
}

std::vector<std::uint64_t> unk_substructure_ids() {
  return {fnv1a64("0|UNK")};
}

std::vector<std::uint64_t> substructure_ids(char residue) {
  char c = canonical_residue(residue);
  int token = residue_token(c);
  if (token >= kNumStandardResidues) return unk_substructure_ids();
  static const std::vector<std::vector<std::uint64_t>> cache = [] {
    std::vector<std::vector<std::uint64_t>> out;
    for (const AminoAcidGraph& g : amino_acid_graphs()) out.push_back(ids_for_graph(g));
    return out;
  }();
  return cache[token];
}

}  // namespace glp
