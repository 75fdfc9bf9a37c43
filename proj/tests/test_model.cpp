#include <algorithm>
#include <random>

#include "doctest.h"
#include "persched/model.hpp"

using namespace persched;

namespace {
const Platform kJupiter{640, 0.01, 3.0};
const ApplicationSpec kT1{"T1", 512, 4480.0, 128.2};
const ApplicationSpec kT2{"T2", 64, 76.8, 235.8};
const ApplicationSpec kAP{"AP", 128, 15360.0, 423.4};
}  // namespace

TEST_CASE("min io time follows the binding bandwidth") {
  // 64 cores * 0.01 GB/s = 0.64 GB/s binds below B = 3
  CHECK(min_io_time(kT2, kJupiter) == doctest::Approx(235.8 / 0.64).epsilon(1e-12));
  // 512 cores * 0.01 = 5.12 GB/s, so B = 3 binds
  CHECK(min_io_time(kT1, kJupiter) == doctest::Approx(128.2 / 3.0).epsilon(1e-12));
  ApplicationSpec dry{"dry", 8, 100.0, 0.0};
  CHECK(min_io_time(dry, kJupiter) == 0.0);
}

TEST_CASE("optimal efficiency is the compute fraction of an uncontended instance") {
  CHECK(optimal_efficiency(kT2, kJupiter) ==
        doctest::Approx(76.8 / (76.8 + 368.4375)).epsilon(1e-12));
  CHECK(optimal_efficiency(kAP, kJupiter) ==
        doctest::Approx(15360.0 / (15360.0 + 423.4 / 1.28)).epsilon(1e-12));
  ApplicationSpec dry{"dry", 8, 100.0, 0.0};
  CHECK(optimal_efficiency(dry, kJupiter) == 1.0);
}

TEST_CASE("upper bound reproduces the published per-set values") {
  const double expected[10] = {0.172, 0.334, 0.495, 0.656, 0.816,
                               0.818, 0.827, 0.977, 0.979, 0.988};
  for (int i = 0; i < 10; ++i) {
    Scenario sc = load_catalog("set" + std::to_string(i + 1));
    CHECK(std::abs(upper_bound_syseff(sc) - expected[i]) < 0.001);
  }
}

TEST_CASE("upper bound is invariant under app permutation") {
  Scenario sc = load_catalog("set4");
  double ub = upper_bound_syseff(sc);
  std::mt19937 rng(7);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(sc.apps.begin(), sc.apps.end(), rng);
    CHECK(upper_bound_syseff(sc) == doctest::Approx(ub).epsilon(1e-12));
  }
}

TEST_CASE("catalog entries") {
  Scenario s1 = load_catalog("set1");
  REQUIRE(s1.apps.size() == 10);
  for (const auto& a : s1.apps) {
    CHECK(a.procs == 64);
    CHECK(a.compute_time == 76.8);
    CHECK(a.io_volume == 235.8);
  }
  Scenario s5 = load_catalog("set5");
  REQUIRE(s5.apps.size() == 3);
  CHECK(s5.apps[0].id == "T2-1");
  CHECK(s5.apps[2].id == "PP");
  CHECK(s5.apps[2].compute_time == 483456.0);

  CHECK_THROWS_AS(load_catalog("setX"), NotFoundError);
  CHECK_THROWS_AS(load_catalog("nope"), NotFoundError);

  Scenario raw = load_catalog("raw:T1");
  CHECK(raw.apps[0].procs == 32768);
  CHECK(raw.apps[0].compute_time == 70.0);
}

TEST_CASE("every catalog set books exactly 640 cores") {
  for (int i = 1; i <= 10; ++i) {
    Scenario sc = load_catalog("set" + std::to_string(i));
    long procs = 0;
    for (const auto& a : sc.apps) procs += a.procs;
    CHECK(procs == 640);
  }
}

TEST_CASE("derived quantities are self-consistent on the catalog") {
  for (int i = 1; i <= 10; ++i) {
    Scenario sc = load_catalog("set" + std::to_string(i));
    for (const auto& a : sc.apps) {
      DerivedApp d = derive(a, sc.platform);
      // the binding constraint recovers the volume exactly
      CHECK(d.min_io_time * d.max_rate == doctest::Approx(a.io_volume).epsilon(1e-9));
      CHECK(d.best_efficiency > 0.0);
      CHECK(d.best_efficiency <= 1.0);
      CHECK((a.io_volume == 0.0) == (d.best_efficiency == 1.0));
    }
  }
}

TEST_CASE("invalid inputs are rejected at construction") {
  CHECK_THROWS_AS((Platform{0, 0.01, 3.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((Platform{64, -1.0, 3.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((ApplicationSpec{"x", 0, 1.0, 1.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((ApplicationSpec{"x", 1, 0.0, 1.0}).check(), std::invalid_argument);
  CHECK_THROWS_AS((ApplicationSpec{"x", 1, 1.0, -2.0}).check(), std::invalid_argument);

  Scenario dup;
  dup.name = "dup";
  dup.platform = kJupiter;
  dup.apps = {kT2, kT2};
  CHECK_THROWS_AS(dup.check(), std::invalid_argument);

  Scenario over;
  over.name = "over";
  over.platform = Platform{100, 0.01, 3.0};
  over.apps = {kT1};
  CHECK_THROWS_AS(over.check(), std::invalid_argument);
}
