#include "schurlab/extremal_search.hpp"

#include "schurlab/diameter_graph.hpp"
#include "schurlab/rand.hpp"

#include <cmath>
#include <cstdlib>

#include "doctest.h"

using namespace schurlab;

namespace {

constexpr uint64_t kSeed = 42;

SearchProblem make_problem(int d, int n, int l, long budget,
                           uint64_t seed = kSeed) {
  SearchProblem p;
  p.space = Space::euclidean(d);
  p.n = n;
  p.l = l;
  p.budget = budget;
  p.seed = seed;
  return p;
}

long recount(const PointConfig& cfg, int l) {
  return count_cliques(build_diameter_graph(cfg, Tolerance{}), l).count;
}

bool same_points(const PointConfig& a, const PointConfig& b) {
  if (a.n() != b.n()) return false;
  for (int i = 0; i < a.n(); ++i)
    if (a.points[static_cast<size_t>(i)] != b.points[static_cast<size_t>(i)])
      return false;
  return true;
}

bool same_trace(const SearchResult& a, const SearchResult& b) {
  if (a.trace.size() != b.trace.size()) return false;
  for (size_t r = 0; r < a.trace.size(); ++r) {
    if (a.trace[r].size() != b.trace[r].size()) return false;
    for (size_t i = 0; i < a.trace[r].size(); ++i) {
      const TraceEntry& x = a.trace[r][i];
      const TraceEntry& y = b.trace[r][i];
      if (x.iteration != y.iteration || x.count != y.count ||
          x.slack != y.slack)
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("diameter-cycle polygons") {
  SUBCASE("triangle") {
    const PointConfig tri = reuleaux_polygon(3);
    REQUIRE(tri.n() == 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(dist(tri.points[size_t(i)], tri.points[size_t(j)]) ==
              doctest::Approx(1.0).epsilon(1e-12));
    CHECK(build_diameter_graph(tri).edge_count() == 3);
  }

  SUBCASE("odd polygons give an n-cycle of diameters") {
    for (int n : {5, 7, 9}) {
      const PointConfig poly = reuleaux_polygon(n);
      REQUIRE(poly.n() == n);
      CHECK(diameter(poly.points) == doctest::Approx(1.0).epsilon(1e-12));
      const DiameterGraph g = build_diameter_graph(poly);
      CHECK(g.edge_count() == n);
      for (int i = 0; i < n; ++i) {
        int degree = 0;
        for (int j = 0; j < n; ++j)
          if (j != i && g.edge(i, j)) ++degree;
        CHECK(degree == 2);
      }
    }
  }

  SUBCASE("even or tiny vertex counts are rejected") {
    CHECK_THROWS_AS(reuleaux_polygon(4), ArgumentError);
    CHECK_THROWS_AS(reuleaux_polygon(2), ArgumentError);
    CHECK_THROWS_AS(reuleaux_polygon(1), ArgumentError);
    CHECK_THROWS_AS(reuleaux_polygon(-3), ArgumentError);
  }
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(search(make_problem(2, 5, 1, 100)), ArgumentError);
  CHECK_THROWS_AS(search(make_problem(2, 5, 6, 100)), ArgumentError);
  CHECK_THROWS_AS(search(make_problem(2, 1, 2, 100)), ArgumentError);
  CHECK_THROWS_AS(search(make_problem(2, 5, 2, 0)), ArgumentError);
  SearchProblem p = make_problem(2, 5, 2, 100);
  p.restarts = 0;
  CHECK_THROWS_AS(search(p), ArgumentError);
  p = make_problem(2, 5, 2, 100);
  p.sigma_lo = 0.2;  // above sigma_hi
  CHECK_THROWS_AS(search(p), ArgumentError);
}

TEST_CASE("planar search reaches n diameters on n points") {
  const SearchResult result = search(make_problem(2, 7, 2, 8000));
  CHECK(result.count == 7);
  CHECK(result.diagnostic.empty());
  CHECK(result.best_slack >= 0.0);
  // the emitted configuration is normalized and re-verifiable
  CHECK(diameter(result.best.points) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(recount(result.best, 2) == 7);
  REQUIRE(result.trace.size() == 4);
  for (const auto& restart : result.trace) CHECK(!restart.empty());
}

TEST_CASE("planar search handles an even point count") {
  const SearchResult result = search(make_problem(2, 4, 2, 800));
  CHECK(result.count == 4);
  CHECK(recount(result.best, 2) == 4);
}

TEST_CASE("spatial search reaches n triangles on n points") {
  const SearchResult result = search(make_problem(3, 6, 3, 8000));
  CHECK(result.count >= 6);
  CHECK(result.count <= 6);  // the clique-count ceiling is n
  CHECK(recount(result.best, 3) == result.count);
}

TEST_CASE("four-dimensional search respects the clique ceiling") {
  const SearchResult result = search(make_problem(4, 6, 4, 20000));
  CHECK(result.count == 6);
  CHECK(recount(result.best, 4) == 6);
  // a count above n in the critical case is a tolerance artifact and must
  // never be reported as the result
  CHECK(result.count <= 6);
}

TEST_CASE("search results are isometry invariant") {
  const SearchResult result = search(make_problem(3, 6, 3, 4000));
  Rng rng(kSeed);
  const Mat q = random_orthogonal(rng, 3);
  const Vec shift = gaussian_vec(rng, 3, 2.0);
  PointConfig moved = result.best;
  for (Vec& p : moved.points) p = q * p + shift;
  CHECK(recount(moved, 3) == result.count);
}

TEST_CASE("search is reproducible across runs and thread caps") {
  const SearchProblem problem = make_problem(2, 5, 2, 1500);
  const SearchResult first = search(problem);
  const SearchResult second = search(problem);
  CHECK(same_trace(first, second));
  CHECK(same_points(first.best, second.best));
  CHECK(first.count == second.count);

  setenv("SCHURLAB_THREADS", "3", 1);
  const SearchResult capped = search(problem);
  unsetenv("SCHURLAB_THREADS");
  CHECK(same_trace(first, capped));
  CHECK(same_points(first.best, capped.best));
}

TEST_CASE("spherical search stays on the sphere") {
  SearchProblem p;
  p.space = Space::sphere(2, 0.8);
  p.n = 4;
  p.l = 2;
  p.budget = 2000;
  p.seed = kSeed;
  const SearchResult result = search(p);
  CHECK(result.count >= 1);
  REQUIRE(result.best.space.is_sphere());
  for (const Vec& pt : result.best.points)
    CHECK(pt.norm() ==
          doctest::Approx(result.best.space.radius).epsilon(1e-9));
  CHECK(recount(result.best, 2) == result.count);

  // random starts make the outcome seed-sensitive
  p.seed = kSeed + 1;
  const SearchResult different = search(p);
  CHECK(!same_points(result.best, different.best));
}

TEST_CASE("simplex-pair hunt") {
  SUBCASE("a reduced second simplex fits at unit diameter") {
    const SearchResult result = counterexample_hunt(3, 20000, kSeed, 2);
    CHECK(result.best_slack > -1e-9);
    CHECK(result.best_slack < 1e-9);
    // only the full simplex forms a top clique; the extra segment stays
    // strictly inside
    CHECK(result.count == 1);
    REQUIRE(result.best.n() == 6);
  }

  SUBCASE("the default second simplex cannot fit") {
    const SearchResult result = counterexample_hunt(3, 20000, kSeed);
    CHECK(result.best_slack < 0.0);
    REQUIRE(result.best.n() == 7);
  }

  SUBCASE("fixed seeds reproduce the trace") {
    const SearchResult a = counterexample_hunt(3, 4000, kSeed, 2);
    const SearchResult b = counterexample_hunt(3, 4000, kSeed, 2);
    CHECK(same_trace(a, b));
    CHECK(same_points(a.best, b.best));

    setenv("SCHURLAB_THREADS", "3", 1);
    const SearchResult capped = counterexample_hunt(3, 4000, kSeed, 2);
    unsetenv("SCHURLAB_THREADS");
    CHECK(same_trace(a, capped));
  }

  SUBCASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(counterexample_hunt(2, 100, kSeed), ArgumentError);
    CHECK_THROWS_AS(counterexample_hunt(3, 0, kSeed), ArgumentError);
    CHECK_THROWS_AS(counterexample_hunt(3, 100, kSeed, 1), ArgumentError);
    CHECK_THROWS_AS(counterexample_hunt(3, 100, kSeed, 5), ArgumentError);
  }
}

TEST_CASE("result serialization") {
  const SearchResult result = search(make_problem(2, 4, 2, 600));
  const nlohmann::ordered_json j = search_result_to_json(result);
  REQUIRE(j.contains("count"));
  REQUIRE(j.contains("best_slack"));
  REQUIRE(j.contains("diagnostic"));
  REQUIRE(j.contains("trace"));
  REQUIRE(j.contains("config"));
  CHECK(j["count"].get<long>() == result.count);
  CHECK(j["trace"].size() == result.trace.size());
  const auto& first_restart = j["trace"][0];
  REQUIRE(!first_restart.empty());
  CHECK(first_restart[0].contains("iteration"));
  CHECK(first_restart[0].contains("slack"));
  // field order is pinned for byte-stable reports
  const std::string dumped = j.dump();
  CHECK(dumped.find("\"count\"") < dumped.find("\"best_slack\""));
  CHECK(dumped.find("\"best_slack\"") < dumped.find("\"trace\""));
}
