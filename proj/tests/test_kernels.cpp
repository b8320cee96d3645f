#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "glp/kernels.hpp"

using namespace glp;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> d(0.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

bool close(double a, double b, double rel = 1e-12) {
  double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
  std::mt19937_64 gen(42);
  auto x = random_vec(257, gen);
  auto y = random_vec(257, gen);
  const auto& k = kernels::scalar_backend();

  double expected_dot = 0, expected_sum = 0, expected_max = x[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    expected_dot += x[i] * y[i];
    expected_sum += x[i];
    expected_max = std::max(expected_max, x[i]);
  }
  CHECK(k.dot(x.data(), y.data(), x.size()) == doctest::Approx(expected_dot));
  CHECK(k.sum(x.data(), x.size()) == doctest::Approx(expected_sum));
  CHECK(k.max(x.data(), x.size()) == expected_max);

  auto y2 = y;
  k.axpy(1.5, x.data(), y2.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y2[i] == doctest::Approx(y[i] + 1.5 * x[i]));
}

TEST_CASE("wider backends agree with the scalar reference") {
  auto backends = kernels::available_backends();
  REQUIRE(!backends.empty());
  CHECK(std::string(backends[0]->name) == "scalar");

  std::mt19937_64 gen(7);
  const auto& ref = kernels::scalar_backend();
  for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 9ul, 15ul, 16ul, 17ul, 33ul, 100ul,
                        1001ul}) {
    auto x = random_vec(n, gen);
    auto y = random_vec(n, gen);
    for (const kernels::Backend* b : backends) {
      INFO("backend ", b->name, " n=", n);
      if (n > 0) {
        CHECK(close(b->dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n)));
        CHECK(close(b->sum(x.data(), n), ref.sum(x.data(), n)));
        CHECK(b->max(x.data(), n) == ref.max(x.data(), n));
      } else {
        CHECK(b->dot(x.data(), y.data(), 0) == 0.0);
        CHECK(b->sum(x.data(), 0) == 0.0);
      }
      std::vector<double> out_b(n), out_ref(n);
      b->add(x.data(), y.data(), out_b.data(), n);
      ref.add(x.data(), y.data(), out_ref.data(), n);
      CHECK(out_b == out_ref);
      b->sub(x.data(), y.data(), out_b.data(), n);
      ref.sub(x.data(), y.data(), out_ref.data(), n);
      CHECK(out_b == out_ref);
      b->mul(x.data(), y.data(), out_b.data(), n);
      ref.mul(x.data(), y.data(), out_ref.data(), n);
      CHECK(out_b == out_ref);

      auto sx = x;
      auto sx_ref = x;
      b->scale(sx.data(), -0.37, n);
      ref.scale(sx_ref.data(), -0.37, n);
      CHECK(sx == sx_ref);

      auto ax = y;
      auto ax_ref = y;
      b->axpy(0.77, x.data(), ax.data(), n);
      ref.axpy(0.77, x.data(), ax_ref.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close(ax[i], ax_ref[i]));
    }
  }
}

TEST_CASE("backend selection") {
  CHECK(kernels::select_backend("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select_backend("no-such-backend"));
  CHECK(kernels::select_backend("auto"));
}
