#pragma once

#include "schurlab/geom.hpp"

#include <cstdint>
#include <vector>

namespace schurlab {

enum class BodyKind { Simplex, RugbyBall };

// intersection of unit balls centered at the vertices. A Simplex body has
// d+1 pairwise-unit vertices (d is the intrinsic dimension), a RugbyBall has
// d. Spherical bodies use unit chords on a frame sphere of radius > 1/sqrt(2)
// so every cap stays within an open hemisphere.
struct ReuleauxBody {
  BodyKind kind = BodyKind::Simplex;
  PointConfig vertices;
  Tolerance tol;

  static ReuleauxBody simplex(PointConfig vertices, Tolerance tol = {});
  static ReuleauxBody rugby_ball(PointConfig vertices, Tolerance tol = {});

  int dim() const { return vertices.space.dim; }
  bool spherical() const { return vertices.space.is_sphere(); }
  int n_vertices() const { return vertices.n(); }

  // 1 - max_i |p - v_i|; nonnegative within geom_tol means membership
  double margin(const Vec& p) const;
  bool contains(const Vec& p) const { return margin(p) >= -tol.geom_tol; }
};

// boundary face: the vertices strictly closer than 1 plus the sphere that
// carries the face. The carrier is centered at the centroid of the
// complementary vertex set (size m) with radius sqrt((m+1)/(2m)).
struct Face {
  std::vector<int> vertex_subset;
  Ball carrier;
};

// classifies a boundary point by its strict-distance vertex set. On a
// RugbyBall the apex has an empty strict set and is carried by the
// intersection of all vertex spheres.
Face face_of_boundary_point(const ReuleauxBody& body, const Vec& p);

// carrier sphere for a proper nonempty vertex subset
Ball face_carrier(const ReuleauxBody& body, std::vector<int> subset);

struct ProjectionCheck {
  int samples = 0;
  int agree = 0;
};

// shoots rays from the hull centroid through the relatively open hull face
// on `subset` and checks the boundary hit classifies back to `subset`
ProjectionCheck central_projection_check(const ReuleauxBody& body,
                                         const std::vector<int>& subset,
                                         int samples, uint64_t seed);

struct CrossSection {
  ReuleauxBody body;   // lower-dimensional Simplex in facet coordinates
  AffineFrame frame;   // chart of the facet hyperplane
};

// section by the hyperplane through a facet (d of the d+1 vertices)
CrossSection cross_section(const ReuleauxBody& body,
                           const std::vector<int>& facet);

struct SampleCheck {
  long samples = 0;
  long violations = 0;
  double worst_margin = 0;  // most adverse signed margin seen
};

// membership agreement, above the base hyperplane, between the Simplex body
// and the RugbyBall on its first d vertices
SampleCheck halfspace_identity_check(const ReuleauxBody& simplex, long samples,
                                     uint64_t seed);

// containment in the circumscribed ball (cap on spheres) plus the fact that
// boundary-sphere points of the body cluster at the vertices
SampleCheck circumball_check(const ReuleauxBody& simplex, long samples,
                             uint64_t seed);

// boundary point equidistant from v_i and v_j at unit distance from every
// other vertex; Euclidean Simplex only
Vec arc_midpoint(const ReuleauxBody& body, int i, int j);

struct RedBlue {
  PointConfig red;           // regular unit d-simplex
  PointConfig blue;          // contracted arc midpoints of disjoint arcs
  double delta = 0;
  double min_blue_blue = 0;  // smallest pairwise blue distance
  double max_red_blue = 0;   // largest red-blue distance
  double min_margin = 0;     // smallest body margin over blue points
};

// arc midpoints over floor((d+1)/2) pairwise disjoint vertex pairs,
// contracted toward the red centroid by 1-delta. Every blue pair stays
// farther than 1 apart while every red-blue pair comes strictly closer
// than 1; throws with the failing margin otherwise (delta = 0 included).
RedBlue red_blue_construction(int d, double delta = 1e-3);

// largest usable contraction, located by bisection on the failing margin
double red_blue_max_delta(int d);

// uniform points in the body by rejection from its circumscribed ball (cap
// on spheres); `proposals` reports the rejection effort when non-null
std::vector<Vec> sample_body(const ReuleauxBody& body, long n, uint64_t seed,
                             long* proposals = nullptr);

// boundary points on the face over `subset`, sampled on the carrier and
// filtered by the strict-distance constraints; Euclidean Simplex only
std::vector<Vec> sample_face(const ReuleauxBody& body,
                             const std::vector<int>& subset, long n,
                             uint64_t seed);

}  // namespace schurlab
