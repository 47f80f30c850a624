#pragma once

#include "schurlab/diameter_graph.hpp"
#include "schurlab/geom.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace schurlab {

// Annealing search for configurations with many cliques of a given size in
// their diameter graph. The walk optimizes a smooth surrogate (sigmoid edge
// indicators multiplied over candidate cliques) because the exact count is
// piecewise constant; every reported count comes from exact re-enumeration.
struct SearchProblem {
  Space space = Space::euclidean(2);
  int n = 0;          // number of points
  int l = 2;          // clique size to maximize
  long budget = 10000;  // total iterations, split evenly across restarts
  int restarts = 4;
  uint64_t seed = 0;
  double sigma_hi = 0.1;   // proposal scale at the start of each restart
  double sigma_lo = 1e-4;  // proposal scale at the end
  Tolerance tol;

  // budget > 0, restarts >= 1, 2 <= l <= n, and the subset count C(n, l)
  // small enough to enumerate
  void validate() const;
};

struct TraceEntry {
  long iteration = 0;  // global iteration within the restart
  long count = 0;      // exact clique count at that point
  double slack = 0;    // see SearchResult::best_slack
};

struct SearchResult {
  PointConfig best;  // normalized to diameter 1
  long count = 0;    // exact count of size-l cliques, re-verified on `best`
  // for searches: the smallest edge distance minus the edge threshold on the
  // normalized config (larger = more robust witness, used to break count
  // ties). For hunts: 1 - diameter of the union (nonnegative means the two
  // simplices fit at unit diameter).
  double best_slack = 0;
  std::vector<std::vector<TraceEntry>> trace;  // best-so-far per restart
  // nonempty when a candidate was rejected as a tolerance artifact (an
  // exact count above the proven ceiling, e.g. from near-coincident points)
  std::string diagnostic;
};

// deterministic for a fixed seed and independent of the thread cap; restarts
// run concurrently and merge by count, then slack, then restart order
SearchResult search(const SearchProblem& problem);

// n odd >= 3: n points in the plane whose diameter graph is an n-cycle (the
// regular n-gon sized so the long chords are the diameter)
PointConfig reuleaux_polygon(int n);

// Pose-space search for two vertex-disjoint unit simplices (d+1 vertices and
// second_size vertices; 0 picks floor((d+1)/2) + 1) whose union has diameter
// at most 1. The first simplex stays fixed; the second anneals over rigid
// motions. best_slack is 1 - diameter(union): any nonnegative value is a
// counterexample witness, and a strictly negative best is the expected
// outcome for the default size.
SearchResult counterexample_hunt(int d, long budget, uint64_t seed,
                                 int second_size = 0);

nlohmann::ordered_json search_result_to_json(const SearchResult& result);

}  // namespace schurlab
