#include "glp/protein.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "glp/alphabet.hpp"
#include "glp/errors.hpp"

namespace glp {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

double parse_double_strict(std::string_view tok, const std::string& context) {
  std::string s = trim(tok);
  if (s.empty()) throw DataError(context + ": empty numeric field");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw DataError(context + ": non-numeric coordinate '" + s + "'");
  return v;
}

long parse_int_strict(std::string_view tok, const std::string& context) {
  std::string s = trim(tok);
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DataError(context + ": non-integer field '" + s + "'");
  return v;
}

}  // namespace

void ProteinRecord::validate() const {
  if (sequence.size() < 2)
    throw DataError("record '" + id + "': sequence length must be >= 2, got " +
                    std::to_string(sequence.size()));
  for (char c : sequence)
    if (!is_residue_symbol(c))
      throw DataError("record '" + id + "': symbol '" + std::string(1, c) + "' outside alphabet");
  if (ca_coords) {
    if (ca_coords->size() != sequence.size())
      throw DataError("record '" + id + "': " + std::to_string(ca_coords->size()) +
                      " coordinates for " + std::to_string(sequence.size()) + " residues");
    for (const Vec3& v : *ca_coords)
      for (double x : v)
        if (!std::isfinite(x)) throw DataError("record '" + id + "': non-finite coordinate");
  }
}

Corpus::Corpus(std::vector<ProteinRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    auto [it, inserted] = index_.emplace(records_[i].id, i);
    if (!inserted) throw DataError("duplicate record id '" + records_[i].id + "'");
  }
}

const ProteinRecord* Corpus::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<ProteinRecord> parse_fasta(const std::string& text) {
  std::vector<ProteinRecord> records;
  ProteinRecord current;
  bool in_record = false;

  auto flush = [&] {
    if (!in_record) return;
    if (current.sequence.empty())
      throw DataError("FASTA record '" + current.id + "' has an empty sequence");
    current.validate();
    records.push_back(std::move(current));
    current = {};
  };

  for (const std::string& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      std::string header = trim(line.substr(1));
      std::string id = header.substr(0, header.find_first_of(" \t"));
      if (id.empty()) throw DataError("malformed FASTA header '" + line + "'");
      current.id = id;
      in_record = true;
    } else {
      if (!in_record) throw DataError("FASTA sequence data before any '>' header");
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c)))
          current.sequence.push_back(canonical_residue(c));
    }
  }
  flush();
  if (records.empty()) throw DataError("FASTA input contains no records");
  return records;
}

std::string serialize_fasta(const std::vector<ProteinRecord>& records) {
  std::string out;
  for (const ProteinRecord& r : records) {
    out += '>';
    out += r.id;
    out += '\n';
    for (std::size_t i = 0; i < r.sequence.size(); i += 60) {
      out += r.sequence.substr(i, 60);
      out += '\n';
    }
  }
  return out;
}

namespace {

CoordSet parse_pdb_ca(const std::string& text, const std::string& id) {
  CoordSet set;
  set.id = id;
  std::set<long> seen;
  char chain = '\0';
  bool chain_locked = false;
  long prev_res = 0;
  bool have_prev = false;

  for (const std::string& line : split_lines(text)) {
    if (line.rfind("ATOM", 0) != 0) continue;
    if (line.size() < 54) throw DataError("PDB '" + id + "': truncated ATOM line");
    std::string atom_name = trim(line.substr(12, 4));
    if (atom_name != "CA") continue;
    char this_chain = line.size() > 21 ? line[21] : ' ';
    if (!chain_locked) {
      chain = this_chain;
      chain_locked = true;
    } else if (this_chain != chain) {
      continue;  // first chain only
    }
    long res_seq = parse_int_strict(line.substr(22, 4), "PDB '" + id + "'");
    if (!seen.insert(res_seq).second)
      throw DataError("PDB '" + id + "': duplicate residue index " + std::to_string(res_seq));
    if (have_prev && res_seq != prev_res + 1) set.has_numbering_gaps = true;
    prev_res = res_seq;
    have_prev = true;
    Vec3 v{parse_double_strict(line.substr(30, 8), "PDB '" + id + "'"),
           parse_double_strict(line.substr(38, 8), "PDB '" + id + "'"),
           parse_double_strict(line.substr(46, 8), "PDB '" + id + "'")};
    set.coords.push_back(v);
  }
  if (set.coords.empty()) throw DataError("PDB '" + id + "': no CA atoms found");
  return set;
}

CoordSet parse_tsv_coords(const std::string& text, const std::string& id) {
  CoordSet set;
  set.id = id;
  bool have_prev = false;
  long prev_index = 0;
  for (const std::string& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) fields.push_back(tok);
    if (fields.size() != 4)
      throw DataError("TSV '" + id + "': expected `index\\tx\\ty\\tz`, got '" + line + "'");
    long idx = parse_int_strict(fields[0], "TSV '" + id + "'");
    if (have_prev) {
      if (idx == prev_index)
        throw DataError("TSV '" + id + "': duplicate residue index " + std::to_string(idx));
      if (idx < prev_index)
        throw DataError("TSV '" + id + "': residue index not increasing at " + std::to_string(idx));
      if (idx != prev_index + 1) set.has_numbering_gaps = true;
    }
    prev_index = idx;
    have_prev = true;
    set.coords.push_back({parse_double_strict(fields[1], "TSV '" + id + "'"),
                          parse_double_strict(fields[2], "TSV '" + id + "'"),
                          parse_double_strict(fields[3], "TSV '" + id + "'")});
  }
  if (set.coords.empty()) throw DataError("TSV '" + id + "': no coordinates found");
  return set;
}

const char* kOneToThree[20] = {"ALA", "CYS", "ASP", "GLU", "PHE", "GLY", "HIS",
                               "ILE", "LYS", "LEU", "MET", "ASN", "PRO", "GLN",
                               "ARG", "SER", "THR", "VAL", "TRP", "TYR"};

char three_to_one(const std::string& name) {
  static const std::unordered_map<std::string, char> table = [] {
    std::unordered_map<std::string, char> t;
    const std::string_view standard = "ACDEFGHIKLMNPQRSTVWY";
    for (int i = 0; i < 20; ++i) t[kOneToThree[i]] = standard[i];
    t["SEC"] = 'U';
    t["PYL"] = 'O';
    t["ASX"] = 'B';
    t["GLX"] = 'Z';
    return t;
  }();
  auto it = table.find(name);
  return it == table.end() ? 'X' : it->second;
}

std::string one_to_three(char c) {
  const std::string_view standard = "ACDEFGHIKLMNPQRSTVWY";
  for (int i = 0; i < 20; ++i)
    if (standard[i] == c) return kOneToThree[i];
  switch (c) {
    case 'U': return "SEC";
    case 'O': return "PYL";
    case 'B': return "ASX";
    case 'Z': return "GLX";
    default: return "UNK";
  }
}

}  // namespace

CoordSet parse_ca_coords(const std::string& text, CoordFormat format, const std::string& id) {
  return format == CoordFormat::pdb_atom ? parse_pdb_ca(text, id) : parse_tsv_coords(text, id);
}

std::string serialize_coords(const CoordSet& set, CoordFormat format) {
  std::string out;
  char buf[128];
  if (format == CoordFormat::tsv) {
    for (std::size_t i = 0; i < set.coords.size(); ++i) {
      const Vec3& v = set.coords[i];
      std::snprintf(buf, sizeof(buf), "%zu\t%.17g\t%.17g\t%.17g\n", i, v[0], v[1], v[2]);
      out += buf;
    }
    return out;
  }
  for (std::size_t i = 0; i < set.coords.size(); ++i) {
    const Vec3& v = set.coords[i];
    std::snprintf(buf, sizeof(buf),
                  "ATOM  %5zu  CA  UNK A%4zu    %8.3f%8.3f%8.3f  1.00  0.00           C\n",
                  i + 1, i + 1, v[0], v[1], v[2]);
    out += buf;
  }
  return out;
}

ProteinRecord read_pdb_protein(const std::string& text, const std::string& id) {
  ProteinRecord rec;
  rec.id = id;
  std::vector<Vec3> coords;
  std::set<long> seen;
  char chain = '\0';
  bool chain_locked = false;
  for (const std::string& line : split_lines(text)) {
    if (line.rfind("ATOM", 0) != 0) continue;
    if (line.size() < 54) throw DataError("PDB '" + id + "': truncated ATOM line");
    if (trim(line.substr(12, 4)) != "CA") continue;
    char this_chain = line.size() > 21 ? line[21] : ' ';
    if (!chain_locked) {
      chain = this_chain;
      chain_locked = true;
    } else if (this_chain != chain) {
      continue;
    }
    long res_seq = parse_int_strict(line.substr(22, 4), "PDB '" + id + "'");
    if (!seen.insert(res_seq).second)
      throw DataError("PDB '" + id + "': duplicate residue index " + std::to_string(res_seq));
    rec.sequence.push_back(three_to_one(trim(line.substr(17, 3))));
    coords.push_back({parse_double_strict(line.substr(30, 8), "PDB '" + id + "'"),
                      parse_double_strict(line.substr(38, 8), "PDB '" + id + "'"),
                      parse_double_strict(line.substr(46, 8), "PDB '" + id + "'")});
  }
  if (coords.empty()) throw DataError("PDB '" + id + "': no CA atoms found");
  rec.ca_coords = std::move(coords);
  rec.validate();
  return rec;
}

std::string serialize_pdb(const ProteinRecord& record) {
  if (!record.ca_coords) throw DataError("record '" + record.id + "': no coordinates to write");
  std::string out;
  char buf[128];
  for (std::size_t i = 0; i < record.sequence.size(); ++i) {
    const Vec3& v = (*record.ca_coords)[i];
    std::snprintf(buf, sizeof(buf),
                  "ATOM  %5zu  CA  %s A%4zu    %8.3f%8.3f%8.3f  1.00  0.00           C\n",
                  i + 1, one_to_three(record.sequence[i]).c_str(), i + 1, v[0], v[1], v[2]);
    out += buf;
  }
  out += "TER\n";
  return out;
}

Corpus bind(const std::vector<ProteinRecord>& sequences, const std::vector<CoordSet>& coord_sets,
            std::vector<BindDiagnostic>* diagnostics) {
  std::unordered_map<std::string, const CoordSet*> by_id;
  for (const CoordSet& c : coord_sets) {
    if (!by_id.emplace(c.id, &c).second)
      throw DataError("duplicate coordinate set for id '" + c.id + "'");
  }
  std::unordered_map<std::string, bool> known;
  for (const ProteinRecord& r : sequences) known[r.id] = true;
  for (const CoordSet& c : coord_sets)
    if (!known.count(c.id)) throw DataError("coordinates for unknown id '" + c.id + "'");

  std::vector<ProteinRecord> out;
  out.reserve(sequences.size());
  for (const ProteinRecord& r : sequences) {
    ProteinRecord rec = r;
    auto it = by_id.find(r.id);
    if (it != by_id.end()) {
      const CoordSet& c = *it->second;
      if (c.has_numbering_gaps) {
        if (diagnostics)
          diagnostics->push_back({r.id, "residue numbering has gaps; kept sequence-only"});
      } else if (c.coords.size() != r.sequence.size()) {
        if (diagnostics)
          diagnostics->push_back({r.id, "coordinate count " + std::to_string(c.coords.size()) +
                                            " != sequence length " +
                                            std::to_string(r.sequence.size()) +
                                            "; kept sequence-only"});
      } else {
        rec.ca_coords = c.coords;
      }
    }
    rec.validate();
    out.push_back(std::move(rec));
  }
  return Corpus(std::move(out));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
}

Corpus load_manifest(const std::string& manifest_path, std::vector<BindDiagnostic>* diagnostics) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q.string() : (base / q).string();
  };

  std::vector<ProteinRecord> sequences;
  std::vector<CoordSet> coord_sets;
  for (const std::string& raw : split_lines(read_text_file(manifest_path))) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) fields.push_back(tok);
    if (fields.size() != 3)
      throw DataError("manifest line '" + line + "': expected `id\\tseq_path\\tcoord_path`");
    const std::string& id = fields[0];
    auto fasta = parse_fasta(read_text_file(resolve(fields[1])));
    const ProteinRecord* match = nullptr;
    for (const ProteinRecord& r : fasta)
      if (r.id == id) match = &r;
    if (!match) throw DataError("manifest id '" + id + "' not found in " + fields[1]);
    sequences.push_back(*match);
    if (fields[2] != "-" && !fields[2].empty()) {
      std::string cp = resolve(fields[2]);
      CoordFormat fmt = cp.size() >= 4 && cp.substr(cp.size() - 4) == ".pdb" ? CoordFormat::pdb_atom
                                                                             : CoordFormat::tsv;
      CoordSet set = parse_ca_coords(read_text_file(cp), fmt, id);
      coord_sets.push_back(std::move(set));
    }
  }
  return glp::bind(sequences, coord_sets, diagnostics);
}

}  // namespace glp
