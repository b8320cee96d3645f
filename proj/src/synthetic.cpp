#include "glp/synthetic.hpp"

#include <cmath>

#include "glp/alphabet.hpp"
#include "glp/rng.hpp"

namespace glp {

std::vector<Vec3> helix_trace(int length) {
  // CA geometry of an ideal alpha helix: 2.3 A radius, 1.5 A rise, 100 deg
  // per residue.
  std::vector<Vec3> pts(length);
  const double turn = 100.0 * M_PI / 180.0;
  for (int i = 0; i < length; ++i)
    pts[i] = {2.3 * std::cos(turn * i), 2.3 * std::sin(turn * i), 1.5 * i};
  return pts;
}

std::vector<Vec3> hairpin_trace(int length, double arm_gap) {
  // Two antiparallel extended strands joined by a short arc; residues across
  // the arms sit ~arm_gap apart.
  std::vector<Vec3> pts(length);
  const double rise = 3.5;
  const int turn_len = 4;
  const int arm = (length - turn_len) / 2;
  for (int i = 0; i < length; ++i) {
    if (i < arm) {
      pts[i] = {0.0, rise * i, 0.0};
    } else if (i < arm + turn_len) {
      double t = (i - arm + 1) / static_cast<double>(turn_len + 1);
      double angle = M_PI * t;
      double r = arm_gap / 2.0;
      pts[i] = {r - r * std::cos(angle), rise * (arm - 1) + r * std::sin(angle), 0.0};
    } else {
      int k = i - arm - turn_len;
      pts[i] = {arm_gap, rise * (arm - 1 - k), 0.0};
    }
  }
  return pts;
}

std::vector<Vec3> coil_trace(int length, std::mt19937_64& rng) {
  std::vector<Vec3> pts;
  pts.reserve(length);
  pts.push_back({0, 0, 0});
  const double step = 3.8;
  while (static_cast<int>(pts.size()) < length) {
    Vec3 dir{};
    // Marsaglia rejection for a uniform direction.
    for (;;) {
      double x = 2.0 * unit_real(rng) - 1.0;
      double y = 2.0 * unit_real(rng) - 1.0;
      double z = 2.0 * unit_real(rng) - 1.0;
      double n2 = x * x + y * y + z * z;
      if (n2 > 1e-4 && n2 <= 1.0) {
        double inv = 1.0 / std::sqrt(n2);
        dir = {x * inv, y * inv, z * inv};
        break;
      }
    }
    Vec3 next = pts.back() + step * dir;
    bool clash = false;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      if (distance(pts[k], next) < 3.0) {
        clash = true;
        break;
      }
    }
    if (!clash) pts.push_back(next);
  }
  return pts;
}

std::string random_sequence(int length, std::mt19937_64& rng) {
  std::string s(length, 'A');
  for (char& c : s) c = kResidueAlphabet[bounded(rng, kNumStandardResidues)];
  return s;
}

std::string mutate_sequence(const std::string& base, double rate, std::mt19937_64& rng) {
  std::string s = base;
  for (char& c : s)
    if (unit_real(rng) < rate) c = kResidueAlphabet[bounded(rng, kNumStandardResidues)];
  return s;
}

std::vector<Vec3> jitter_coords(const std::vector<Vec3>& coords, double sigma,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<Vec3> out = coords;
  for (Vec3& v : out)
    for (double& x : v) x += noise(rng);
  return out;
}

ProteinRecord random_structure(const std::string& id, int length, std::mt19937_64& rng) {
  ProteinRecord rec;
  rec.id = id;
  rec.sequence = random_sequence(length, rng);
  rec.ca_coords = coil_trace(length, rng);
  return rec;
}

RigidTransform random_rigid(std::mt19937_64& rng, double translation_scale) {
  Vec3 axis{2.0 * unit_real(rng) - 1.0, 2.0 * unit_real(rng) - 1.0, 2.0 * unit_real(rng) - 1.0};
  if (norm(axis) < 1e-6) axis = {0, 0, 1};
  double angle = 2.0 * M_PI * unit_real(rng);
  RigidTransform g;
  g.rotation = axis_angle_rotation(axis, angle);
  g.translation = {translation_scale * (2.0 * unit_real(rng) - 1.0),
                   translation_scale * (2.0 * unit_real(rng) - 1.0),
                   translation_scale * (2.0 * unit_real(rng) - 1.0)};
  return g;
}

std::vector<ProteinRecord> make_family(FamilyKind kind, const std::string& prefix, int members,
                                       int length, std::uint64_t seed, double mutation_rate,
                                       double jitter) {
  std::mt19937_64 rng(seed);
  std::vector<Vec3> base;
  switch (kind) {
    case FamilyKind::helix: base = helix_trace(length); break;
    case FamilyKind::hairpin: base = hairpin_trace(length); break;
    case FamilyKind::coil: base = coil_trace(length, rng); break;
  }
  std::string base_seq = random_sequence(length, rng);

  std::vector<ProteinRecord> family;
  for (int m = 0; m < members; ++m) {
    ProteinRecord rec;
    rec.id = prefix + "_" + std::to_string(m);
    rec.sequence = mutate_sequence(base_seq, mutation_rate, rng);
    rec.ca_coords = jitter_coords(base, jitter, rng);
    family.push_back(std::move(rec));
  }
  return family;
}

}  // namespace glp
