#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "glp/geom.hpp"
#include "glp/protein.hpp"

namespace glp {

// Idealized CA traces for the three generator families.
std::vector<Vec3> helix_trace(int length);                          // alpha-helix geometry
std::vector<Vec3> hairpin_trace(int length, double arm_gap = 4.8);  // two antiparallel strands
std::vector<Vec3> coil_trace(int length, std::mt19937_64& rng);     // 3.8 A random walk

std::string random_sequence(int length, std::mt19937_64& rng);  // 20 standard residues
std::string mutate_sequence(const std::string& base, double rate, std::mt19937_64& rng);
std::vector<Vec3> jitter_coords(const std::vector<Vec3>& coords, double sigma,
                                std::mt19937_64& rng);

// Random coil structure with a random sequence.
ProteinRecord random_structure(const std::string& id, int length, std::mt19937_64& rng);

RigidTransform random_rigid(std::mt19937_64& rng, double translation_scale = 20.0);

enum class FamilyKind { helix, hairpin, coil };

// `members` structurally and sequence-wise related records derived from one
// base trace/sequence per family.
std::vector<ProteinRecord> make_family(FamilyKind kind, const std::string& prefix, int members,
                                       int length, std::uint64_t seed, double mutation_rate = 0.15,
                                       double jitter = 0.3);

}  // namespace glp
