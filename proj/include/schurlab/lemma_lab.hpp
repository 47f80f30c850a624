#pragma once

#include "schurlab/geom.hpp"
#include "schurlab/rand.hpp"

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace schurlab {

//============================================================================
// Reports
//============================================================================

// outcome of a randomized inequality check. `worst_margin` is the smallest
// slack seen toward the asserted bound (negative means violated);
// `equality_cases` counts samples landing on the bound within eq_tol in a
// configuration where equality is admissible. A serialized witness of the
// first violating sample is attached iff violations > 0.
struct LemmaReport {
  std::string id;
  long trials = 0;
  long violations = 0;
  long equality_cases = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::optional<nlohmann::ordered_json> witness;
};

nlohmann::ordered_json lemma_report_to_json(const LemmaReport& report);

//============================================================================
// Distance-bound verifiers
//============================================================================

// Half-body diameter bound (id "half-body-diameter"). Builds the Reuleaux
// simplex over a base-aligned unit d-simplex plus its apex, samples pairs
// v, w in the half above the base hyperplane with the projection of v inside
// the base's convex hull, and checks |v - w| <= 1 -- strictly when the
// projection is strictly interior and neither point sits at a base vertex.
// Near-equality samples are classified against the two admissible equality
// configurations (a point at a base vertex; w on the base slice boundary
// with proj(v) on the hull boundary). Requires d >= 3.
LemmaReport verify_half_body_diameter(int d, long trials, uint64_t seed);

// Farthest-vertex bound (id "vertex-farthest"). In the Reuleaux body over a
// unit (d-1)-simplex with d vertices, samples v' in the vertex hull and w in
// the body, and checks max_i |v_i - v'| >= |w - v'|, strictly when v' is
// strictly interior to the hull. Requires d >= 3.
LemmaReport verify_vertex_farthest(int d, long trials, uint64_t seed);

// Farthest-boundary-point bound (ids "boundary-farthest" /
// "boundary-farthest-spherical"). For a sphere centered at a point C of a
// hyperplane through C, an open cap of it strictly on the positive side, a
// point X in the closed positive halfspace and a point Y in the cap, some
// boundary point Y' of the cap satisfies |X - Y'| >= |X - Y|, strictly
// unless X = C. The maximizing Y' is computed in closed form. euclidean =
// false runs the geodesic variant on a frame sphere (where the strict form
// also degenerates at the antipode of C; such X keep the non-strict check).
LemmaReport verify_boundary_farthest(bool euclidean, long trials,
                                     uint64_t seed);

//============================================================================
// Cut radius of unit spheres through a frame sphere
//============================================================================

// The k unit spheres centered at the vertices of a regular unit
// (k-1)-simplex lying on a frame sphere of radius r > 1/sqrt(2) cut that
// sphere in a subsphere of radius `radius` > 1/sqrt(2). `axis_offset` is the
// distance from the frame-sphere center to the simplex circumcenter along
// the common axis; `cut_offset` is the distance from the circumcenter to the
// flat carrying the subsphere.
struct SphereCut {
  double axis_offset = 0;  // b
  double cut_offset = 0;   // a = 1/(2kb)
  double radius = 0;       // sqrt((k+1)/(2k) - a^2)
};

// closed form: b = sqrt(r^2 - (k-1)/(2k)), a = 1/(2kb),
// radius = sqrt((k+1)/(2k) - a^2); satisfies 2*radius^2 = 1 + 2a(b-a).
// Throws DomainError for r <= 1/sqrt(2), ArgumentError for k < 2.
SphereCut sphere_cut_closed_form(double r, int k);

// Places `trials` randomly oriented regular unit (k-1)-simplices on the
// d-dimensional frame sphere of radius r, recovers the cut subsphere by
// direct linear algebra, and compares center offsets and radius to the
// closed form within 1e-9; also validates sampled subsphere points against
// the defining distance constraints. Requires 2 <= k <= d. The reported
// margin is radius - 1/sqrt(2), expected strictly positive.
// id: "cut-radius".
LemmaReport verify_sphere_cut(double r, int k, int d, long trials,
                              uint64_t seed);

//============================================================================
// Vertex rotation with a stopping rule
//============================================================================

enum class RotationEvent {
  UnitDistance,   // the moved vertex reaches distance 1 from the top witness
  HyperplaneHit,  // some lower witness lands on the moved base hyperplane
};

// Result of rotating the first simplex vertex around the flat of the others,
// toward the lower halfspace, until the first stopping event. The invariant
// log samples angles in (0, angle) and records the worst slack of: the top
// witness staying inside the moved body (containment), the top witness
// staying outside the moved circumscribed ball (exclusion), and the lower
// witnesses staying strictly below the moved hyperplane (plane).
struct RotationOutcome {
  RotationEvent event = RotationEvent::UnitDistance;
  double angle = 0;         // stop angle, in (0, pi/2)
  Vec moved_vertex;         // rotated position of the first vertex
  int plane_hit_index = -1; // witness index for HyperplaneHit, else -1
  double event_residual = 0;
  long invariant_samples = 0;
  long invariant_violations = 0;
  double containment_margin = std::numeric_limits<double>::infinity();
  double exclusion_margin = std::numeric_limits<double>::infinity();
  double plane_margin = std::numeric_limits<double>::infinity();
};

// Rotates clique vertex 0 about the flat of the remaining vertices, starting
// toward the side opposite witness 0, and stops at the first of: distance to
// witness 0 reaching 1, or a later witness meeting the moved hyperplane.
// Roots are bracketed on a pi/180 grid and bisected below 1e-12.
// Preconditions: the clique is a unit regular d-simplex in R^d (d >= 3);
// witness 0 lies strictly above the clique hyperplane, inside the
// unit-ball intersection body over the clique but not inside its
// circumscribed ball, at distance < 1 from vertex 0; all other witnesses lie
// strictly below. The seed only drives the invariant sampling log.
RotationOutcome rotation_procedure(const PointConfig& clique,
                                   const std::vector<Vec>& witnesses,
                                   uint64_t seed);

struct RotationInstance {
  PointConfig clique;
  std::vector<Vec> witnesses;
};

// deterministic valid geometry for the rotation procedure, jittered by seed;
// `bias` selects which stopping event the construction forces
RotationInstance make_rotation_instance(int d, uint64_t seed,
                                        RotationEvent bias);

// Runs the rotation procedure on `trials` generated instances (alternating
// the forced event), checking that the forced event fires, the stop angle
// stays in (0, pi/2), the event residual vanishes, and the invariant log is
// clean. The reported margin is the worst exclusion margin. id: "rotation".
LemmaReport verify_rotation(int d, long trials, uint64_t seed);

//============================================================================
// Elementary observations
//============================================================================

// Two properly intersecting balls, larger first, with the hyperplane through
// their sphere-sphere intersection; the hyperplane is oriented so both
// centers lie strictly on the plus side.
struct NestedBallInstance {
  Ball outer;
  Ball inner;
  Hyperplane sigma;
};

// Validates outer.radius > inner.radius (ArgumentError), proper intersection
// of the boundary spheres, and centers on one side of the cutting hyperplane
// (DomainError otherwise), then assembles the oriented instance.
NestedBallInstance make_nested_instance(Ball outer, Ball inner,
                                        const Tolerance& tol = {});

// Five sampling checks, `trials` accepted samples each, in this order:
//  - "nested-balls": on the plus side of the cut the bigger ball contains
//    the smaller; on the minus side the containment reverses.
//  - "projection-inside-base": points of the unit-ball intersection body
//    over a base simplex that lie outside its open circumscribed ball
//    project into the base's convex hull (strictly when strictly outside).
//  - "bisector-halfspace": points on x's side of the bisector hyperplane of
//    x, y are at least as close to x as to y.
//  - "rotation-nesting": after rotating one vertex, on the old vertex's side
//    of the equidistance hyperplane the old circumscribed ball contains the
//    moved one, and on the other side the moved body contains the old one.
//  - "acute-hull": on a frame sphere, points of the vertex hull of a
//    spherical Reuleaux simplex see every body point within geodesic angle
//    pi/2, strictly.
std::vector<LemmaReport> observation_reports(long trials, uint64_t seed);

// the five observation checks merged into one report (id "observations"):
// trials and violations are summed, the worst margin is the minimum
LemmaReport verify_observations(long trials, uint64_t seed);

}  // namespace schurlab
