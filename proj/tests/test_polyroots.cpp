#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmsflow/polyroots.hpp"

using namespace cmsflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> sorted_real_parts(const std::vector<poly::cdouble>& rts) {
  std::vector<double> out;
  for (auto& z : rts) out.push_back(z.real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

TEST_CASE("construction and evaluation", "[polyroots]") {
  auto c = poly::from_roots({2.0, 1.0});  // z^2 - 3z + 2
  REQUIRE(c.size() == 3);
  CHECK_THAT(c[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(c[1], WithinAbs(-3.0, 1e-15));
  CHECK_THAT(c[2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(poly::horner(c, 0.0), WithinAbs(2.0, 1e-15));
  CHECK_THAT(poly::horner(c, 1.0), WithinAbs(0.0, 1e-15));
  auto d = poly::derivative(c);
  CHECK_THAT(poly::horner(d, 1.0), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("roots of known polynomials", "[polyroots]") {
  {
    auto r = poly::roots({-3.0, 0.0, 0.0, 1.0});  // z^3 - 3: one real root
    REQUIRE(r.size() == 3);
    CHECK_THAT(r[0].real(), WithinRel(std::cbrt(3.0), 1e-12));
  }
  {
    auto r = poly::roots({0.0, -3.0, 0.0, 1.0});  // z^3 - 3z
    auto x = sorted_real_parts(r);
    CHECK_THAT(x[0], WithinRel(std::sqrt(3.0), 1e-12));
    CHECK_THAT(x[1], WithinAbs(0.0, 1e-12));
    CHECK_THAT(x[2], WithinRel(-std::sqrt(3.0), 1e-12));
    for (auto& z : r) CHECK_THAT(z.imag(), WithinAbs(0.0, 1e-12));
  }
  {
    auto r = poly::roots({1.0, 0.0, 1.0});  // z^2 + 1
    REQUIRE(r.size() == 2);
    CHECK_THAT(std::abs(r[0].imag()), WithinRel(1.0, 1e-12));
  }
  {
    // integer roots 1..10: a mildly ill-conditioned classic
    std::vector<double> roots10;
    for (int k = 10; k >= 1; --k) roots10.push_back(k);
    auto r = poly::roots(poly::from_roots(roots10));
    auto x = sorted_real_parts(r);
    for (int k = 0; k < 10; ++k) CHECK_THAT(x[k], WithinRel(10.0 - k, 1e-8));
  }
  {
    // tiny-scale roots exercise the geometric rescaling
    std::vector<double> small;
    for (int k = 6; k >= 1; --k) small.push_back(1e-6 * k);
    auto r = poly::roots(poly::from_roots(small));
    auto x = sorted_real_parts(r);
    for (int k = 0; k < 6; ++k) CHECK_THAT(x[k], WithinRel(1e-6 * (6 - k), 1e-9));
  }
  {
    // exact zero roots deflate exactly
    auto r = poly::roots({0.0, 0.0, -1.0, 1.0});  // z^2 (z - 1)
    auto x = sorted_real_parts(r);
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);
    CHECK_THAT(x[0], WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("random roots round-trip", "[polyroots]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> gap(0.1, 1.0);
  std::uniform_real_distribution<double> base(-3.0, 0.0);
  for (int n : {2, 4, 7, 11}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> roots(n);
      double cur = base(rng);
      for (int i = n - 1; i >= 0; --i) {
        roots[i] = cur;
        cur += gap(rng);
      }
      auto rec = sorted_real_parts(poly::roots(poly::from_roots(roots)));
      for (int i = 0; i < n; ++i)
        CHECK_THAT(rec[i], WithinAbs(roots[i], 1e-9 * (1.0 + std::abs(roots[i]))));
    }
  }
}

TEST_CASE("resultant and discriminant", "[polyroots]") {
  // res(z^2 - 1, z - 2) = (1-2)(-1-2)
  CHECK_THAT(poly::resultant({-1.0, 0.0, 1.0}, {-2.0, 1.0}), WithinRel(3.0, 1e-14));
  CHECK_THAT(poly::discriminant_monic({2.0, -3.0, 1.0}), WithinRel(1.0, 1e-14));
  CHECK(poly::discriminant_monic({1.0, -2.0, 1.0}) == 0.0);  // (z-1)^2
  CHECK_THAT(poly::discriminant_monic({0.0, -3.0, 0.0, 1.0}), WithinRel(108.0, 1e-13));
  // quadratic rule disc = b^2 - 4c on monic z^2 + bz + c
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  for (int k = 0; k < 30; ++k) {
    double b = coef(rng), c = coef(rng);
    CHECK_THAT(poly::discriminant_monic({c, b, 1.0}), WithinRel(b * b - 4 * c, 1e-12));
  }
  // discriminant vs the defining product over roots
  for (int k = 0; k < 20; ++k) {
    std::vector<double> roots(4);
    double cur = coef(rng);
    for (int i = 3; i >= 0; --i) {
      roots[i] = cur;
      cur += std::abs(coef(rng)) + 0.3;
    }
    double prod = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) prod *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
    CHECK_THAT(poly::discriminant_monic(poly::from_roots(roots)), WithinRel(prod, 1e-9));
  }
}
