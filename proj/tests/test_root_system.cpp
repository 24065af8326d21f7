#include <catch2/catch_amalgamated.hpp>

#include "cmsflow/root_system.hpp"
#include "test_support.hpp"

using namespace cmsflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("chamber membership", "[root_system]") {
  CHECK(in_chamber({3, 2, 1}, RootSystemSpec::A(3), true));
  CHECK_FALSE(in_chamber({1, 2}, RootSystemSpec::B(2, 1.0)));
  CHECK_FALSE(in_chamber({2, 1, -1.5}, RootSystemSpec::D(3)));

  CHECK(in_chamber({2, 2}, RootSystemSpec::A(2)));
  CHECK_FALSE(in_chamber({2, 2}, RootSystemSpec::A(2), true));
  CHECK(in_chamber({2, 0}, RootSystemSpec::B(2, 0.5)));
  CHECK_FALSE(in_chamber({2, 0}, RootSystemSpec::B(2, 0.5), true));
  // x_N = 0 is not a D wall
  CHECK(in_chamber({2, 1, 0}, RootSystemSpec::D(3), true));
  CHECK(in_chamber({2, 1, -1}, RootSystemSpec::D(3)));
  CHECK_FALSE(in_chamber({2, 1, -1}, RootSystemSpec::D(3), true));

  CHECK_THROWS_AS(in_chamber({1, 2, 3}, RootSystemSpec::A(2)), std::invalid_argument);
  CHECK_THROWS_AS(RootSystemSpec::A(1), std::invalid_argument);
  CHECK_THROWS_AS(RootSystemSpec::D(1), std::invalid_argument);
  CHECK_THROWS_AS(RootSystemSpec::B(2, -0.5), std::invalid_argument);
}

TEST_CASE("boundary distance", "[root_system]") {
  CHECK_THAT(boundary_distance(ChamberPoint(RootSystemSpec::A(2), {1, -1})),
             WithinRel(std::sqrt(2.0), 1e-15));
  CHECK(boundary_distance(ChamberPoint(RootSystemSpec::A(3), {1, 1, 0})) == 0.0);
  CHECK(boundary_distance(ChamberPoint(RootSystemSpec::B(2, 1.0), {2, 0})) == 0.0);
  CHECK(boundary_distance(ChamberPoint(RootSystemSpec::D(3), {3, 1, -1})) == 0.0);
  CHECK_THAT(boundary_distance(ChamberPoint(RootSystemSpec::D(2), {2, 1})),
             WithinRel(1.0 / std::sqrt(2.0), 1e-14));

  std::mt19937_64 rng(7);
  for (auto sys : {RootSystemSpec::A(5), RootSystemSpec::B(4, 0.7), RootSystemSpec::D(4)}) {
    for (int k = 0; k < 20; ++k) {
      auto p = testsupport::random_interior(sys, rng);
      CHECK(in_chamber(p.coords, sys, true));
      CHECK(boundary_distance(p) > 0.0);
    }
  }
}

TEST_CASE("drift on the examples", "[root_system]") {
  auto hA = drift({1, -1}, RootSystemSpec::A(2));
  CHECK_THAT(hA[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(hA[1], WithinAbs(-0.5, 1e-15));

  auto hB = drift({2}, RootSystemSpec::B(1, 2.0));
  CHECK_THAT(hB[0], WithinAbs(1.0, 1e-15));

  auto hD = drift({2, 1}, RootSystemSpec::D(2));
  CHECK_THAT(hD[0], WithinRel(4.0 / 3.0, 1e-15));
  CHECK_THAT(hD[1], WithinRel(-2.0 / 3.0, 1e-15));
}

TEST_CASE("drift is the half-gradient of log weight", "[root_system]") {
  std::mt19937_64 rng(11);
  for (auto sys : {RootSystemSpec::A(4), RootSystemSpec::A(6), RootSystemSpec::B(3, 0.5),
                   RootSystemSpec::B(5, 2.5), RootSystemSpec::D(4), RootSystemSpec::D(6)}) {
    for (int k = 0; k < 10; ++k) {
      auto p = testsupport::random_interior(sys, rng);
      auto h = drift(p.coords, sys);
      auto g = testsupport::half_log_weight_gradient(p.coords, sys);
      for (int i = 0; i < sys.n; ++i)
        CHECK_THAT(h[i], WithinRel(g[i], 1e-6) || WithinAbs(g[i], 1e-9));
    }
  }
}

TEST_CASE("drift equivariance", "[root_system]") {
  std::mt19937_64 rng(13);
  auto sysA = RootSystemSpec::A(5);
  for (int k = 0; k < 10; ++k) {
    auto p = testsupport::random_interior(sysA, rng);
    auto h = drift(p.coords, sysA);
    for (double r : {-3.7, 0.25, 12.0}) {
      auto shifted = p.coords;
      for (double& v : shifted) v += r;
      auto hs = drift(shifted, sysA);
      CHECK(testsupport::max_abs_diff(h, hs) < 1e-12);
    }
  }
  // scale covariance: drift(c x) = drift(x)/c, all families
  for (auto sys : {RootSystemSpec::A(4), RootSystemSpec::B(4, 1.5), RootSystemSpec::D(4)}) {
    auto p = testsupport::random_interior(sys, rng);
    auto h = drift(p.coords, sys);
    for (double c : {0.5, 2.0, 10.0}) {
      auto scaled = p.coords;
      for (double& v : scaled) v *= c;
      auto hs = drift(scaled, sys);
      for (int i = 0; i < sys.n; ++i) CHECK_THAT(hs[i], WithinRel(h[i] / c, 1e-12));
    }
  }
}

TEST_CASE("log weight values", "[root_system]") {
  CHECK_THAT(log_weight({1, -1}, RootSystemSpec::A(2)), WithinRel(std::log(4.0), 1e-15));
  CHECK_THAT(log_weight({2, 1}, RootSystemSpec::B(2, 1.0)), WithinRel(std::log(36.0), 1e-14));
  for (double t : {-2.0, 0.0, 5.5})
    CHECK_THAT(log_weight({t + 1, t}, RootSystemSpec::A(2)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("singular inputs are rejected", "[root_system]") {
  auto sysA = RootSystemSpec::A(2);
  CHECK_THROWS_AS(drift({1.0, 1.0 - 1e-15}, sysA), SingularInput);
  CHECK_THROWS_AS(log_weight({1.0, 1.0}, sysA), SingularInput);
  CHECK_THROWS_AS(drift({1.0, 1e-15}, RootSystemSpec::B(2, 1.0)), SingularInput);
  CHECK_NOTHROW(drift({1.0, 1e-15}, RootSystemSpec::B(2, 0.0)));  // no wall term at nu = 0
}
