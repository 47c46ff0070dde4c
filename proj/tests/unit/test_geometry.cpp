#include <cmath>
#include <numbers>

#include "doctest.h"
#include "risim/errors.hpp"
#include "risim/geometry.hpp"
#include "test_support.hpp"

using namespace risim;

TEST_CASE("radio constants derive the wavelength from c / f_c") {
  const RadioConstants rc(1e10);
  CHECK(std::abs(rc.wavelength() - kSpeedOfLight / 1e10) <= 1e-12 * rc.wavelength());
  // 10 GHz is 3 cm, not 30 cm.
  CHECK(rc.wavelength() == doctest::Approx(0.03).epsilon(1e-3));
  CHECK(rc.angular_frequency() == doctest::Approx(2 * std::numbers::pi * 1e10));
  CHECK_THROWS_AS(RadioConstants(1e10, kSpeedOfLight, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RadioConstants(1e10, kSpeedOfLight, 1.5), InvalidArgument);
  CHECK_THROWS_AS(RadioConstants(-1.0), InvalidArgument);
}

TEST_CASE("build_ris_rectangular") {
  SUBCASE("single element") {
    const auto r = build_ris_rectangular(1, 1, 0.0075, Vec3::Zero());
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Vec3::Zero());
  }
  SUBCASE("unit lattice, row-major with rows along z") {
    const auto r = build_ris_rectangular(2, 2, 1.0, Vec3::Zero());
    REQUIRE(r.size() == 4);
    CHECK(r[0] == Vec3(0, 0, 0));
    CHECK(r[1] == Vec3(0, 1, 0));
    CHECK(r[2] == Vec3(0, 0, 1));
    CHECK(r[3] == Vec3(0, 1, 1));
  }
  SUBCASE("20x20 at quarter wavelength") {
    const RadioConstants rc(1e10, 3e8);  // lambda = 0.03 exactly
    const auto r = build_ris_rectangular(20, 20, rc.wavelength() / 4, Vec3::Zero());
    REQUIRE(r.size() == 400);
    double ymax = 0, zmax = 0;
    for (const auto& p : r) {
      CHECK(p.x() == 0.0);
      ymax = std::max(ymax, p.y());
      zmax = std::max(zmax, p.z());
    }
    CHECK(ymax == doctest::Approx(0.1425).epsilon(1e-12));
    CHECK(zmax == doctest::Approx(0.1425).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_ris_rectangular(0, 3, 1.0, Vec3::Zero()), InvalidArgument);
  CHECK_THROWS_AS(build_ris_rectangular(3, -1, 1.0, Vec3::Zero()), InvalidArgument);
  CHECK_THROWS_AS(build_ris_rectangular(3, 3, 0.0, Vec3::Zero()), InvalidArgument);
}

TEST_CASE("build_target_grid") {
  const auto one = build_target_grid(1, 1, 0.6, Vec3(2, 0, 0));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Vec3(2, 0, 0));

  const auto g = build_target_grid(2, 2, 0.6, Vec3(2, 0, 0));
  REQUIRE(g.size() == 4);
  CHECK((g[0] - Vec3(2, 0, 0)).norm() < 1e-15);
  CHECK((g[1] - Vec3(2, 0.6, 0)).norm() < 1e-15);
  CHECK((g[2] - Vec3(2.6, 0, 0)).norm() < 1e-15);
  CHECK((g[3] - Vec3(2.6, 0.6, 0)).norm() < 1e-15);

  const auto big = build_target_grid(10, 10, 0.6, Vec3::Zero());
  REQUIRE(big.size() == 100);
  CHECK(big.back().x() == doctest::Approx(5.4));
  CHECK(big.back().y() == doctest::Approx(5.4));
  for (const auto& p : big) CHECK(p.z() == 0.0);

  CHECK_THROWS_AS(build_target_grid(0, 1, 0.6, Vec3::Zero()), InvalidArgument);

  // Deterministic and ordering-stable.
  CHECK(build_target_grid(4, 3, 0.5, Vec3(1, 2, 3)) == build_target_grid(4, 3, 0.5, Vec3(1, 2, 3)));
  CHECK(build_ris_rectangular(3, 5, 0.1, Vec3(0, 1, 0)) == build_ris_rectangular(3, 5, 0.1, Vec3(0, 1, 0)));
}

TEST_CASE("spherical_from_tx") {
  auto s = spherical_from_tx(Vec3(1, 0, 0), Vec3::Zero());
  CHECK(s.range == 1.0);
  CHECK(s.azimuth == 0.0);
  CHECK(s.elevation == 0.0);

  s = spherical_from_tx(Vec3(0, 0, 1), Vec3::Zero());
  CHECK(s.range == 1.0);
  CHECK(s.azimuth == 0.0);
  CHECK(s.elevation == doctest::Approx(std::numbers::pi / 2));

  s = spherical_from_tx(Vec3(0, 0.1, 0.05), Vec3(0.2, 0.1, 0.1));
  CHECK(s.range == doctest::Approx(std::sqrt(0.04 + 0.0025)).epsilon(1e-14));
  CHECK(s.range == doctest::Approx(0.20616).epsilon(1e-5));

  CHECK_THROWS_AS(spherical_from_tx(Vec3(1, 2, 3), Vec3(1, 2, 3)), DegenerateGeometry);
}

TEST_CASE("spherical_from_tx round-trips through the Cartesian form") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 tx(rng.normal(), rng.normal(), rng.normal());
    const Vec3 p(rng.normal() * 5, rng.normal() * 5, rng.normal() * 5);
    const auto s = spherical_from_tx(p, tx);
    const Vec3 back = tx + s.range * Vec3(std::cos(s.elevation) * std::cos(s.azimuth),
                                          std::cos(s.elevation) * std::sin(s.azimuth),
                                          std::sin(s.elevation));
    CHECK((back - p).norm() < 1e-9);
  }
}

TEST_CASE("attenuation_coefficient") {
  const RadioConstants rc(1e10, 3e8);
  const AntennaPattern iso;
  const double lambda = rc.wavelength();

  SUBCASE("radius lambda / 4 pi has unit magnitude and phase -1/2") {
    const auto q = attenuation_coefficient(lambda / (4 * std::numbers::pi), 0.3, 0.1, iso, rc);
    CHECK(std::abs(q) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::arg(q) == doctest::Approx(-0.5).epsilon(1e-14));
  }
  SUBCASE("pattern null") {
    const AntennaPattern null([](double, double) { return 0.0; });
    CHECK(attenuation_coefficient(0.5, 0, 0, null, rc) == Complex(0, 0));
  }
  SUBCASE("magnitude at half a meter") {
    const auto q = attenuation_coefficient(0.5, 0, 0, iso, rc);
    CHECK(std::abs(q) == doctest::Approx(0.03 / (4 * std::numbers::pi * 0.5)).epsilon(1e-14));
    CHECK(std::abs(q) == doctest::Approx(4.7746e-3).epsilon(1e-4));
  }
  SUBCASE("magnitude scales as 1 / r") {
    for (double r : {0.1, 0.37, 2.0, 13.0}) {
      const double a = std::abs(attenuation_coefficient(r, 0.2, -0.4, iso, rc));
      const double b = std::abs(attenuation_coefficient(2 * r, 0.2, -0.4, iso, rc));
      CHECK(testing::rel_err(b, a / 2) < 1e-12);
    }
  }
  SUBCASE("eta and gain enter under a square root") {
    const RadioConstants half(1e10, 3e8, 0.25);
    const AntennaPattern four([](double, double) { return 4.0; });
    CHECK(std::abs(attenuation_coefficient(1.0, 0, 0, four, half)) ==
          doctest::Approx(std::abs(attenuation_coefficient(1.0, 0, 0, iso, rc))));
  }
  CHECK_THROWS_AS(attenuation_coefficient(0.0, 0, 0, iso, rc), DegenerateGeometry);
  const AntennaPattern negative([](double, double) { return -1.0; });
  CHECK_THROWS_AS(attenuation_coefficient(1.0, 0, 0, negative, rc), InvalidArgument);
}

TEST_CASE("path_distance") {
  CHECK(path_distance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)) == 2.0);
  CHECK(path_distance(Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 0)) == 2.0);
  const double want = std::hypot(5.6, 0.6) + std::hypot(5.6, -0.1);
  const double got = path_distance(Vec3(0, 0, 0), Vec3(5.6, 0.6, 0), Vec3(0, 0.7, 0));
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
  CHECK(got == doctest::Approx(11.2330).epsilon(1e-5));
}

TEST_CASE("path_distance obeys the triangle inequality over the reference scene") {
  const auto ris = build_ris_rectangular(20, 20, 0.0075, Vec3::Zero());
  const auto grid = build_target_grid(10, 10, 0.6, Vec3(3.8, 0, 0));
  const Vec3 rx(0, 0.7, 0);
  for (const auto& m : ris) {
    for (const auto& k : grid) CHECK(path_distance(m, k, rx) >= (m - rx).norm());
  }
}

TEST_CASE("scene geometry invariants") {
  const RadioConstants rc(1e10);
  const Vec3 tx(0.2, 0.1, 0.1), rx(0, 0.7, 0);
  const auto ris = build_ris_rectangular(2, 2, 0.0075, Vec3::Zero());
  const auto grid = build_target_grid(2, 2, 0.6, Vec3(3.8, 0, 0));
  CHECK_NOTHROW(SceneGeometry(tx, rx, ris, grid, rc));
  CHECK_THROWS_AS(SceneGeometry(tx, rx, {}, grid, rc), InvalidArgument);
  CHECK_THROWS_AS(SceneGeometry(tx, rx, ris, {}, rc), InvalidArgument);
  CHECK_THROWS_AS(SceneGeometry(ris[1], rx, ris, grid, rc), DegenerateGeometry);
  CHECK_THROWS_AS(SceneGeometry(tx, grid[0], ris, grid, rc), DegenerateGeometry);
  CHECK_THROWS_AS(SceneGeometry(tx, rx, ris, {ris[2]}, rc), DegenerateGeometry);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SceneGeometry(Vec3(nan, 0, 0), rx, ris, grid, rc), InvalidArgument);
}
