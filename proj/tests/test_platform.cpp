#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "wcett/platform.hpp"

using namespace wcett;

namespace {

PlatformModel unit_platform(const ProgramDag& dag, double mu_max,
                            std::uint64_t seed = 7) {
  PlatformModel p;
  p.true_weights.assign(static_cast<std::size_t>(dag.num_edges()), 1.0);
  p.mu_max = mu_max;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("zero noise measures the exact baseline") {
  ProgramDag d = make_diamond_chain(3);
  PlatformModel p = unit_platform(d, 0.0);
  for (const PathVec& path : enumerate_paths(d)) {
    CHECK(measure(p, path) == doctest::Approx(6.0));
    CHECK(true_baseline(p, path) == doctest::Approx(6.0));
  }
}

TEST_CASE("uniform law stays within mu_max of the baseline") {
  ProgramDag d = make_layered({4, 3, 0.5}, 3);
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 5);
  p.mu_max = 4.5;
  p.seed = 99;
  for (const PathVec& path : enumerate_paths(d)) {
    double l = measure(p, path);
    CHECK(std::abs(l - true_baseline(p, path)) <= p.mu_max + 1e-12);
    CHECK(l >= 0.0);
  }
}

TEST_CASE("adversarial law spikes exactly the listed path") {
  // one hidden slow path, everything else noise-free: the measurement set
  // cannot distinguish the slow path's true length inside [2n-mu, 2n+mu]
  ProgramDag d = make_diamond_chain(3);
  PlatformModel p = unit_platform(d, 2.0);
  p.law = PerturbationLaw::Adversarial;
  std::vector<int> slow = {2, 3, 6, 7, 10, 11};  // all-bottom
  p.adversarial.emplace_back(slow, 2.0);
  for (const PathVec& path : enumerate_paths(d)) {
    double expect = path.edges() == slow ? 8.0 : 6.0;
    CHECK(measure(p, path) == doctest::Approx(expect));
  }
}

TEST_CASE("adversarial d beyond mu_max is rejected") {
  ProgramDag d = make_diamond_chain(1);
  PlatformModel p = unit_platform(d, 1.0);
  p.law = PerturbationLaw::Adversarial;
  p.adversarial.emplace_back(std::vector<int>{0, 1}, 1.5);
  CHECK_THROWS_AS(measure(p, PathVec(d, {0, 1})), Error);
}

TEST_CASE("measure is deterministic and order-independent") {
  ProgramDag d = make_layered({5, 3, 0.4}, 11);
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 21);
  p.mu_max = 3.0;
  p.seed = 1234;
  std::vector<PathVec> paths = enumerate_paths(d);

  MeasurementSet a = measure_all(p, paths);
  std::vector<PathVec> reversed(paths.rbegin(), paths.rend());
  MeasurementSet b = measure_all(p, reversed);
  for (const PathVec& path : paths) {
    REQUIRE(a.length_of(path).has_value());
    CHECK(*a.length_of(path) == *b.length_of(path));  // bit-identical
    CHECK(*a.length_of(path) == measure(p, path));
  }

  // a different seed shifts at least one observation
  PlatformModel p2 = p;
  p2.seed = 4321;
  bool any_diff = false;
  for (const PathVec& path : paths)
    any_diff = any_diff || measure(p2, path) != measure(p, path);
  CHECK(any_diff);
}

TEST_CASE("measure_all of an empty list is empty") {
  ProgramDag d = make_diamond_chain(1);
  PlatformModel p = unit_platform(d, 1.0);
  CHECK(measure_all(p, {}).empty());
}

TEST_CASE("MeasurementSet upsert overwrites, append_raw does not") {
  ProgramDag d = make_diamond_chain(1);
  PathVec top(d, {0, 1});
  MeasurementSet ms;
  ms.upsert(top, 10.0);
  ms.upsert(top, 12.0);
  CHECK(ms.size() == 1);
  CHECK(*ms.length_of(top) == doctest::Approx(12.0));
  ms.append_raw(top, 14.0);
  CHECK(ms.size() == 2);
}

TEST_CASE("perturb at zero percent is the identity") {
  ProgramDag d = make_diamond_chain(2);
  PlatformModel p = unit_platform(d, 0.0);
  MeasurementSet ms = measure_all(p, enumerate_paths(d));
  MeasurementSet same = perturb(ms, 0.0, 5);
  REQUIRE(same.size() == ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i)
    CHECK(same.records()[i].length == ms.records()[i].length);
}

TEST_CASE("perturb at 50 percent stays within the multiplicative band") {
  ProgramDag d = make_layered({4, 2, 0.6}, 17);
  PlatformModel p;
  p.true_weights = random_weights(d.num_edges(), 18);
  p.seed = 3;
  MeasurementSet ms = measure_all(p, enumerate_paths(d));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    MeasurementSet shaken = perturb(ms, 50.0, seed);
    REQUIRE(shaken.size() == ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
      double l = ms.records()[i].length;
      double s = shaken.records()[i].length;
      CHECK(s >= 0.5 * l - 1e-9);
      CHECK(s <= 1.5 * l + 1e-9);
    }
  }
  // same seed reproduces, different seed varies
  MeasurementSet x = perturb(ms, 25.0, 9);
  MeasurementSet y = perturb(ms, 25.0, 9);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(x.records()[i].length == y.records()[i].length);
}

TEST_CASE("diamond chains have the advertised shape") {
  for (int n : {1, 2, 5}) {
    ProgramDag d = make_diamond_chain(n);
    CHECK_NOTHROW(validate(d));
    CHECK(d.num_edges() == 4 * n);
    CHECK(d.num_vertices() == 3 * n + 1);
    CHECK(count_paths(d) == (std::uint64_t{1} << n));
  }
  CHECK(count_paths(make_diamond_chain(1)) == 2);
}

TEST_CASE("layered generator always yields valid graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProgramDag d = make_layered({5, 3, 0.3}, seed);
    CHECK_NOTHROW(validate(d));
    CHECK(count_paths(d) == oracle::brute_count(d));
  }
  // determinism
  ProgramDag a = make_layered({4, 4, 0.5}, 123);
  ProgramDag b = make_layered({4, 4, 0.5}, 123);
  REQUIRE(a.num_edges() == b.num_edges());
  for (int e = 0; e < a.num_edges(); ++e) {
    CHECK(a.edge(e).from == b.edge(e).from);
    CHECK(a.edge(e).to == b.edge(e).to);
  }
}

TEST_CASE("random_weights are integers in [1, 100]") {
  EdgeWeights w = random_weights(200, 77);
  REQUIRE(w.size() == 200);
  for (double v : w) {
    CHECK(v >= 1.0);
    CHECK(v <= 100.0);
    CHECK(v == std::round(v));
  }
  CHECK(random_weights(200, 77) == w);
  CHECK(random_weights(200, 78) != w);
}
