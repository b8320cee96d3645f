#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "glp/geom.hpp"

namespace glp {

// One protein: residue sequence over the 25-letter alphabet, optionally with
// one alpha-carbon coordinate per residue (Angstrom).
struct ProteinRecord {
  std::string id;
  std::string sequence;
  std::optional<std::vector<Vec3>> ca_coords;

  std::size_t length() const { return sequence.size(); }
  bool has_coords() const { return ca_coords.has_value(); }

  // Throws DataError on violation: length >= 2, coords (when present) match
  // the sequence length and are finite.
  void validate() const;
};

// Parsed coordinate set, prior to binding to a sequence.
struct CoordSet {
  std::string id;
  std::vector<Vec3> coords;
  // True when the source residue numbering had holes; such a set is rejected
  // from structure binding.
  bool has_numbering_gaps = false;
};

enum class CoordFormat { pdb_atom, tsv };

// Immutable after construction; ids unique.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<ProteinRecord> records);

  const std::vector<ProteinRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const ProteinRecord& at(std::size_t i) const { return records_[i]; }
  const ProteinRecord* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }

 private:
  std::vector<ProteinRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// FASTA ('>' headers, folded sequence lines). Unknown letters map to 'X';
// symbols are uppercased. Record ids are the first whitespace-delimited
// header token.
std::vector<ProteinRecord> parse_fasta(const std::string& text);
std::string serialize_fasta(const std::vector<ProteinRecord>& records);

// PDB ATOM-record subset (v3.3 fixed columns) keeping CA atoms of the first
// chain, or a `index\tx\ty\tz` TSV. `id` labels the parsed set (PDB files do
// not reliably carry one).
CoordSet parse_ca_coords(const std::string& text, CoordFormat format, const std::string& id);
std::string serialize_coords(const CoordSet& set, CoordFormat format);

// Full PDB read: CA coordinates plus the residue sequence recovered from the
// three-letter residue names (unknown names become 'X').
ProteinRecord read_pdb_protein(const std::string& text, const std::string& id);
std::string serialize_pdb(const ProteinRecord& record);

struct BindDiagnostic {
  std::string id;
  std::string message;
};

// Attach coordinate sets to sequence records by id. A length mismatch (or a
// numbering gap) keeps the record sequence-only and emits a diagnostic; an
// unknown id is an error.
Corpus bind(const std::vector<ProteinRecord>& sequences, const std::vector<CoordSet>& coord_sets,
            std::vector<BindDiagnostic>* diagnostics = nullptr);

// Corpus manifest: `id<TAB>seq_path<TAB>coord_path` per line; coord_path may
// be "-" for sequence-only records. Paths are resolved relative to the
// manifest's directory.
Corpus load_manifest(const std::string& manifest_path, std::vector<BindDiagnostic>* diagnostics = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace glp
