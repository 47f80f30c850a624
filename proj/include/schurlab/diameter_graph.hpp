#pragma once

#include "schurlab/geom.hpp"

#include <vector>

namespace schurlab {

// graph on a configuration normalized to diameter 1; edges join pairs at
// distance >= 1 - eq_tol (chord distance on spheres)
struct DiameterGraph {
  PointConfig config;
  Tolerance tol;
  std::vector<std::vector<bool>> adjacency;

  int n() const { return config.n(); }
  bool edge(int i, int j) const { return adjacency[i][j]; }
  long edge_count() const;
};

// normalizes by a similarity: Euclidean points scale to diameter 1, spherical
// configurations scale radius and coordinates together so chords match
DiameterGraph build_diameter_graph(PointConfig config, Tolerance tol = {});

// scales geodesic distances from the spherical centroid by `factor`, keeping
// the sphere fixed. Not a similarity: chord ratios drift, and `residual`
// reports the worst absolute chord deviation from exact scaling.
struct GeodesicRescale {
  PointConfig config;
  double factor = 1;
  double residual = 0;
};
GeodesicRescale geodesic_rescale(const PointConfig& config, double factor);

// geodesic_rescale tuned by bisection until the chord diameter hits 1
GeodesicRescale geodesic_normalize(const PointConfig& config,
                                   double tol = 1e-12);

struct CliqueReport {
  int l = 0;
  long count = 0;
  std::vector<std::vector<int>> cliques;  // sorted members, lexicographic list
  // min |K intersect K'| over clique pairs; -1 when fewer than two cliques
  // or when count exceeds the pairwise-scan cap (5000)
  int pairwise_shared = -1;
};

// exact enumeration by ordered backtracking with candidate pruning
CliqueReport count_cliques(const DiameterGraph& g, int l);

// subset-enumeration oracle; refuses n > 20
CliqueReport brute_force_cliques(const DiameterGraph& g, int l);

struct AuditReport {
  int n = 0;
  int dim = 0;                      // intrinsic dimension d
  long clique_count = 0;            // cliques of size d
  bool count_bound_holds = true;    // clique_count <= n
  int min_pairwise_intersection = -1;  // -1 when fewer than two d-cliques
  bool intersection_bound_holds = true;  // min >= d - 2, vacuously true
  double min_edge_dist = 1;         // smallest distance counted as an edge
  double max_nonedge_dist = 0;      // largest distance below the threshold
  double geodesic_residual = 0;     // spherical pre-normalization drift
  bool out_of_scope = false;        // sphere radius <= 1/sqrt(2) after scaling
  bool violation = false;           // an asserted bound failed while in scope
};

// counts d-cliques and checks the two combinatorial bounds: at most n of
// them, and every pair sharing at least d - 2 vertices. Spherical input off
// diameter 1 is first renormalized along geodesics so the sphere radius
// stays put; the drift lands in geodesic_residual.
AuditReport schur_audit(PointConfig config, Tolerance tol = {});

struct SharedVertexReport {
  long clique_pairs = 0;
  int min_intersection = -1;  // -1 when vacuous
  bool vacuous = true;        // fewer than two cliques of size d
  bool share_vertex = true;   // min >= 1
  bool strong_bound = true;   // min >= d - 2
};

// pairwise intersection audit over the cliques of size d; needs d >= 3
SharedVertexReport shared_vertex_check(const DiameterGraph& g, int d);

}  // namespace schurlab
