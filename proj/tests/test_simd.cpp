#include <doctest.h>

#include <cmath>
#include <random>

#include "nodetok/simd/kernels.hpp"

using namespace nodetok;
using namespace nodetok::simd;

namespace {

std::vector<Hops> random_hops(std::mt19937_64& rng, std::size_t n, double unreachable_rate) {
  std::vector<Hops> v(n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (auto& x : v) x = coin(rng) < unreachable_rate ? kUnreachable : static_cast<Hops>(rng() % 1000);
  return v;
}

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels on hand examples") {
  const auto& k = scalar_kernels();
  const std::vector<Hops> a{1, 3}, b{3, 1};
  CHECK(k.min_plus(a.data(), b.data(), 2) == 4);
  const std::vector<Hops> c{kUnreachable, 2}, d{0, kUnreachable};
  CHECK(k.min_plus(c.data(), d.data(), 2) == kUnreachable);
  CHECK(k.min_plus(a.data(), b.data(), 0) == kUnreachable);
  CHECK(k.min_u32(a.data(), 2) == 1);
  const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  CHECK(k.dot(x.data(), y.data(), 3) == 32.0);
  CHECK(k.squared_distance(x.data(), y.data(), 3) == 27.0);
  std::vector<double> z = y;
  k.axpy(2.0, x.data(), z.data(), 3);
  CHECK(z == std::vector<double>{6, 9, 12});
}

TEST_CASE("every available variant matches the scalar reference") {
  const auto& ref = scalar_kernels();
  std::mt19937_64 rng(5);
  for (Isa isa : available_isas()) {
    CAPTURE(isa_name(isa));
    const auto& k = kernels_for(isa);
    CHECK(k.isa == isa);
    for (std::size_t n : {0, 1, 3, 4, 7, 8, 9, 15, 16, 17, 31, 64, 100, 257}) {
      for (double rate : {0.0, 0.3, 1.0}) {
        const auto a = random_hops(rng, n, rate);
        const auto b = random_hops(rng, n, rate);
        REQUIRE(k.min_plus(a.data(), b.data(), n) == ref.min_plus(a.data(), b.data(), n));
        REQUIRE(k.min_u32(a.data(), n) == ref.min_u32(a.data(), n));
      }
      const auto x = random_doubles(rng, n);
      const auto y = random_doubles(rng, n);
      const double scale = 1.0 + ref.dot(x.data(), x.data(), n) + ref.dot(y.data(), y.data(), n);
      REQUIRE(std::abs(k.dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= 1e-12 * scale);
      REQUIRE(std::abs(k.squared_distance(x.data(), y.data(), n) - ref.squared_distance(x.data(), y.data(), n)) <=
              1e-12 * scale);
      auto z1 = y, z2 = y;
      k.axpy(0.37, x.data(), z1.data(), n);
      ref.axpy(0.37, x.data(), z2.data(), n);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(z1[i] - z2[i]) <= 1e-14 * (1.0 + std::abs(z2[i])));
    }
  }
}

TEST_CASE("min_plus ignores lanes where either side is unreachable") {
  std::vector<Hops> a(16, kUnreachable), b(16, 5);
  a[11] = 2;
  b[11] = kUnreachable;
  a[13] = 7;
  for (Isa isa : available_isas()) CHECK(kernels_for(isa).min_plus(a.data(), b.data(), 16) == 12);
}

TEST_CASE("active selection is one of the available variants") {
  const auto isas = available_isas();
  CHECK(std::find(isas.begin(), isas.end(), active().isa) != isas.end());
}
