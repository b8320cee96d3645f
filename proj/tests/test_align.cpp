#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "glp/align.hpp"
#include "glp/errors.hpp"
#include "glp/synthetic.hpp"
#include "oracles.hpp"

using namespace glp;

namespace {

ProteinRecord with_coords(const std::string& id, std::string seq, std::vector<Vec3> coords) {
  ProteinRecord r;
  r.id = id;
  r.sequence = std::move(seq);
  r.ca_coords = std::move(coords);
  return r;
}

}  // namespace

TEST_CASE("kabsch identity") {
  std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  auto res = kabsch(pts, pts);
  CHECK(res.rmsd == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.transform.orthogonality_error() < 1e-9);
  CHECK(res.transform.det_error() < 1e-9);
  for (int i = 0; i < 3; ++i) {
    Vec3 mapped = res.transform.apply(pts[i]);
    for (int c = 0; c < 3; ++c) CHECK(mapped[c] == doctest::Approx(pts[i][c]).epsilon(1e-10));
  }
}

TEST_CASE("kabsch recovers an exact rigid copy") {
  std::mt19937_64 gen(11);
  std::vector<Vec3> a;
  for (int i = 0; i < 7; ++i)
    a.push_back({unit_real(gen) * 10, unit_real(gen) * 10, unit_real(gen) * 10});
  RigidTransform g;
  g.rotation = axis_angle_rotation({0, 0, 1}, M_PI / 2);
  g.translation = {5, 0, 0};
  std::vector<Vec3> b = apply_transform(g, a);

  auto res = kabsch(a, b);
  CHECK(res.rmsd < 1e-9);
  // Recovered transform inverts g.
  for (const Vec3& p : b) {
    Vec3 back = res.transform.apply(p);
    (void)back;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec3 mapped = res.transform.apply(b[i]);
    for (int c = 0; c < 3; ++c) CHECK(mapped[c] == doctest::Approx(a[i][c]).epsilon(1e-9));
  }
}

TEST_CASE("kabsch matches the rotation-grid oracle on random clouds") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Vec3> a, b;
    for (int i = 0; i < 6; ++i) {
      a.push_back({6 * unit_real(gen), 6 * unit_real(gen), 6 * unit_real(gen)});
      b.push_back({6 * unit_real(gen), 6 * unit_real(gen), 6 * unit_real(gen)});
    }
    double expected = oracle::brute_force_min_rmsd(a, b);
    double actual = kabsch(a, b).rmsd;
    CHECK(actual == doctest::Approx(expected).epsilon(1e-3));
    CHECK(actual <= expected + 1e-9);  // kabsch is the closed-form optimum
  }
}

TEST_CASE("kabsch error paths") {
  std::vector<Vec3> two{{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(kabsch(two, two), DataError);
  std::vector<Vec3> degenerate{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  std::vector<Vec3> ok{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(kabsch(ok, degenerate), DataError);
  CHECK_THROWS_AS(kabsch(degenerate, ok), DataError);
}

TEST_CASE("kabsch rmsd is zero iff congruent under a proper rigid motion") {
  std::mt19937_64 gen(5);
  std::vector<Vec3> a;
  for (int i = 0; i < 5; ++i)
    a.push_back({4 * unit_real(gen), 4 * unit_real(gen), 4 * unit_real(gen)});
  RigidTransform g = random_rigid(gen);
  CHECK(kabsch(a, apply_transform(g, a)).rmsd < 1e-9);

  auto perturbed = a;
  perturbed[2][0] += 0.5;
  CHECK(kabsch(a, apply_transform(g, perturbed)).rmsd > 0.05);
}

TEST_CASE("needleman_wunsch identical strings") {
  auto p = needleman_wunsch("ACD", "ACD", {1, -1, -1});
  REQUIRE(p.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.pairs[i].first == i);
    CHECK(p.pairs[i].second == i);
  }
}

TEST_CASE("needleman_wunsch hand-checked DP cases") {
  // 3x2 table by hand: aligning ACD with AD skips the C.
  auto p = needleman_wunsch("ACD", "AD", {1, -1, -1});
  REQUIRE(p.size() == 2);
  CHECK(p.pairs[0] == std::make_pair(0, 0));
  CHECK(p.pairs[1] == std::make_pair(2, 1));

  // Single mismatch cheaper than two gaps under gap=-2.
  auto q = needleman_wunsch("A", "C", {1, -1, -2});
  REQUIRE(q.size() == 1);
  CHECK(q.pairs[0] == std::make_pair(0, 0));
}

TEST_CASE("needleman_wunsch equals exhaustive enumeration on short strings") {
  std::mt19937_64 gen(123);
  const char alphabet[] = "ACGT";
  AlignmentScoring sc{2, -1, -2};
  for (int trial = 0; trial < 60; ++trial) {
    std::string a, b;
    int la = 1 + static_cast<int>(bounded(gen, 6));
    int lb = 1 + static_cast<int>(bounded(gen, 6));
    for (int i = 0; i < la; ++i) a.push_back(alphabet[bounded(gen, 4)]);
    for (int i = 0; i < lb; ++i) b.push_back(alphabet[bounded(gen, 4)]);

    long expected = oracle::enumerate_best_alignment(a, b, sc);
    CHECK(nw_score(a, b, sc) == expected);
    CHECK(oracle::pairing_score(a, b, needleman_wunsch(a, b, sc), sc) == expected);
  }
}

TEST_CASE("needleman_wunsch monotone pairing") {
  auto p = needleman_wunsch("MLTAHV", "MLAHV", {});
  for (std::size_t i = 1; i < p.pairs.size(); ++i) {
    CHECK(p.pairs[i].first > p.pairs[i - 1].first);
    CHECK(p.pairs[i].second > p.pairs[i - 1].second);
  }
}

TEST_CASE("d_zero formula and clamp") {
  CHECK(d_zero(15) == 0.5);
  CHECK(d_zero(1) == 0.5);
  // 1.24 * 6^(1/3) - 1.8 = 0.45323... clamps to the 0.5 floor.
  CHECK(d_zero(21) == 0.5);
  // 125^(1/3) = 5 exactly.
  CHECK(d_zero(140) == doctest::Approx(4.4).epsilon(1e-12));
  CHECK_THROWS_AS(d_zero(0), DataError);
}

TEST_CASE("tm_score self alignment is exactly 1") {
  std::mt19937_64 gen(31);
  for (int len : {8, 17, 40}) {
    ProteinRecord p = random_structure("p" + std::to_string(len), len, gen);
    auto res = tm_score(p, p);
    CHECK(res.score == 1.0);
    CHECK(res.l_native == len);
    CHECK(static_cast<int>(res.pairing.size()) == len);
  }
}

TEST_CASE("tm_score rigid-motion identity and invariance") {
  std::mt19937_64 gen(77);
  ProteinRecord a = random_structure("a", 24, gen);
  ProteinRecord b = random_structure("b", 20, gen);

  RigidTransform g = random_rigid(gen);
  ProteinRecord a_moved = a;
  a_moved.ca_coords = apply_transform(g, *a.ca_coords);
  CHECK(tm_score(a, a_moved).score >= 1.0 - 1e-9);

  double base = tm_score(a, b).score;
  for (int trial = 0; trial < 4; ++trial) {
    RigidTransform h = random_rigid(gen);
    ProteinRecord b_moved = b;
    b_moved.ca_coords = apply_transform(h, *b.ca_coords);
    CHECK(tm_score(a, b_moved).score == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("tm_score is monotone as one residue drifts away") {
  std::mt19937_64 gen(13);
  ProteinRecord a = random_structure("a", 12, gen);
  double prev = 1.1;
  for (double shift : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    ProteinRecord b = a;
    b.id = "b";
    (*b.ca_coords)[7][2] += shift;
    double s = tm_score(a, b).score;
    CHECK(s <= prev + 1e-12);
    CHECK(s > 0.0);
    CHECK(s <= 1.0);
    prev = s;
  }
}

TEST_CASE("tm_score matches the brute-force SO(3) x translation oracle") {
  std::mt19937_64 gen(21);
  ProteinRecord a = random_structure("a", 8, gen);
  ProteinRecord b = a;
  b.id = "b";
  (*b.ca_coords)[5] = (*b.ca_coords)[5] + Vec3{2.0, -1.0, 0.5};

  auto res = tm_score(a, b);
  std::vector<Vec3> pa, pb;
  for (auto [ia, ib] : res.pairing.pairs) {
    pa.push_back((*a.ca_coords)[ia]);
    pb.push_back((*b.ca_coords)[ib]);
  }
  double expected = oracle::brute_force_max_tm(pa, pb, res.d0, res.l_native);
  CHECK(res.score == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("tm_score error paths") {
  std::mt19937_64 gen(3);
  ProteinRecord a = random_structure("a", 10, gen);
  ProteinRecord no_coords;
  no_coords.id = "n";
  no_coords.sequence = a.sequence;
  CHECK_THROWS_AS(tm_score(a, no_coords), DataError);
  CHECK_THROWS_AS(tm_score(no_coords, a), DataError);
}

TEST_CASE("tm_score transform satisfies rigidity invariants") {
  std::mt19937_64 gen(55);
  ProteinRecord a = random_structure("a", 16, gen);
  ProteinRecord b = random_structure("b", 14, gen);
  auto res = tm_score(a, b);
  CHECK(res.transform.orthogonality_error() < 1e-9);
  CHECK(res.transform.det_error() < 1e-9);
  CHECK(res.d0 >= 0.5);
  CHECK(res.score > 0.0);
  CHECK(res.score <= 1.0);
}
