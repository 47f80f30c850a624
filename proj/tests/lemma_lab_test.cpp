#include "schurlab/lemma_lab.hpp"

#include "schurlab/parallel.hpp"
#include "schurlab/rand.hpp"
#include "schurlab/reuleaux.hpp"
#include "schurlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "doctest.h"

using namespace schurlab;

namespace {

constexpr uint64_t kSeed = 42;
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// unit d-simplex in the base hyperplane plus the apex above its centroid;
// every pairwise distance is 1
struct UpperBodySetup {
  PointConfig clique;
  Vec apex;
};

UpperBodySetup upper_setup(int d) {
  UpperBodySetup s;
  s.clique = regular_unit_simplex(d, d);
  s.apex = Vec::Zero(d);
  s.apex[d - 1] = std::sqrt((d + 1) / (2.0 * d));
  return s;
}

}  // namespace

TEST_CASE("apex construction keeps every pairwise distance at one") {
  for (int d : {3, 4, 5}) {
    const UpperBodySetup s = upper_setup(d);
    for (const Vec& v : s.clique.points)
      CHECK(dist(s.apex, v) == doctest::Approx(1.0).epsilon(1e-12));
    // the apex sits on the circle that carries the rotated vertex
    std::vector<Vec> fixed(s.clique.points.begin() + 1,
                           s.clique.points.end());
    const Vec pivot = centroid(fixed);
    CHECK(dist(s.apex, pivot) ==
          doctest::Approx(dist(s.clique.points[0], pivot)).epsilon(1e-12));
  }
}

//----------------------------------------------------------------------------
// cut radius
//----------------------------------------------------------------------------

TEST_CASE("cut radius closed form matches the two-point hand computation") {
  // two unit-separated points on the unit sphere in any dimension: the flat
  // {y . v_i = 1/2} has minimum-norm point (v_1 + v_2)/3, so the cut radius
  // is sqrt(1 - 1/3) = sqrt(2/3)
  const SphereCut cut = sphere_cut_closed_form(1.0, 2);
  CHECK(cut.axis_offset ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(cut.cut_offset ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(cut.radius == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(cut.radius == doctest::Approx(0.8164965809277260).epsilon(1e-12));
}

TEST_CASE("cut radius satisfies its defining identity on a parameter grid") {
  for (double r : {0.72, 0.75, 0.8, 1.0, 2.0, 10.0}) {
    for (int k = 2; k <= 6; ++k) {
      const SphereCut cut = sphere_cut_closed_form(r, k);
      // the cut offset balances the chord condition:
      // 2 rad^2 = 1 + 2 a (b - a)
      const double lhs = 2.0 * cut.radius * cut.radius;
      const double rhs =
          1.0 + 2.0 * cut.cut_offset * (cut.axis_offset - cut.cut_offset);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(cut.radius > kInvSqrt2);
    }
  }
}

TEST_CASE("cut radius limits") {
  // huge sphere: the cut approaches the plane section through the simplex,
  // of radius sqrt((k+1)/(2k))
  const SphereCut big = sphere_cut_closed_form(1e3, 3);
  CHECK(std::abs(big.radius - std::sqrt(4.0 / 6.0)) < 1e-7);
  // shrinking toward the critical radius the cut collapses onto it
  const SphereCut tight = sphere_cut_closed_form(kInvSqrt2 + 1e-8, 2);
  CHECK(tight.radius > kInvSqrt2);
  CHECK(tight.radius - kInvSqrt2 < 1e-3);
}

TEST_CASE("cut radius rejects degenerate parameters") {
  CHECK_THROWS_AS(sphere_cut_closed_form(kInvSqrt2, 2), DomainError);
  CHECK_THROWS_AS(sphere_cut_closed_form(0.70, 3), DomainError);
  CHECK_THROWS_AS(sphere_cut_closed_form(1.0, 1), ArgumentError);
  CHECK_THROWS_AS(verify_sphere_cut(1.0, 3, 2, 5, kSeed), ArgumentError);
  CHECK_THROWS_AS(verify_sphere_cut(1.0, 2, 1, 5, kSeed), ArgumentError);
  CHECK_THROWS_AS(verify_sphere_cut(1.0, 2, 3, 0, kSeed), ArgumentError);
}

TEST_CASE("geometric cut check agrees with the closed form") {
  const LemmaReport report = verify_sphere_cut(1.0, 2, 3, 50, kSeed);
  CHECK(report.trials == 50);
  CHECK(report.violations == 0);
  CHECK(report.worst_margin ==
        doctest::Approx(std::sqrt(2.0 / 3.0) - kInvSqrt2).epsilon(1e-9));
}

TEST_CASE("geometric cut check passes across dimensions and radii") {
  for (double r : {0.75, 0.9, 1.2, 2.5}) {
    for (int d = 2; d <= 5; ++d) {
      for (int k = 2; k <= std::min(d, 4); ++k) {
        const LemmaReport report = verify_sphere_cut(r, k, d, 3, kSeed);
        CAPTURE(r);
        CAPTURE(d);
        CAPTURE(k);
        CHECK(report.violations == 0);
        CHECK(report.worst_margin > 0.0);
      }
    }
  }
}

//----------------------------------------------------------------------------
// half-body diameter bound
//----------------------------------------------------------------------------

TEST_CASE("half-body diameter bound holds on random pairs") {
  const LemmaReport report = verify_half_body_diameter(3, 20000, kSeed);
  CHECK(report.id == "half-body-diameter");
  CHECK(report.trials == 20000);
  CHECK(report.violations == 0);
  CHECK(!report.witness.has_value());
  CHECK(report.worst_margin > 0.0);
  // the bound is tight: pairs near an apex-vertex configuration approach it
  CHECK(report.worst_margin < 0.35);

  const LemmaReport d4 = verify_half_body_diameter(4, 4000, kSeed);
  CHECK(d4.violations == 0);
  CHECK(d4.worst_margin > 0.0);
}

TEST_CASE("half-body diameter bound rejects bad arguments") {
  CHECK_THROWS_AS(verify_half_body_diameter(2, 10, kSeed), ArgumentError);
  CHECK_THROWS_AS(verify_half_body_diameter(3, 0, kSeed), ArgumentError);
}

//----------------------------------------------------------------------------
// farthest-vertex bound
//----------------------------------------------------------------------------

TEST_CASE("farthest vertex beats every body point from a hull point") {
  const LemmaReport report = verify_vertex_farthest(3, 20000, kSeed);
  CHECK(report.id == "vertex-farthest");
  CHECK(report.violations == 0);
  CHECK(report.worst_margin > 0.0);
  // tight: a hull point at the center with a body point near a vertex
  CHECK(report.worst_margin < 0.15);

  const LemmaReport d4 = verify_vertex_farthest(4, 4000, kSeed);
  CHECK(d4.violations == 0);
  CHECK(d4.worst_margin > 0.0);
}

TEST_CASE("farthest vertex check rejects bad arguments") {
  CHECK_THROWS_AS(verify_vertex_farthest(2, 10, kSeed), ArgumentError);
}

//----------------------------------------------------------------------------
// farthest boundary point
//----------------------------------------------------------------------------

TEST_CASE("farthest cap point lies on the cap boundary (euclidean)") {
  const LemmaReport report = verify_boundary_farthest(true, 20000, kSeed);
  CHECK(report.id == "boundary-farthest");
  CHECK(report.violations == 0);
  CHECK(report.worst_margin > 0.0);
}

TEST_CASE("farthest cap point lies on the cap boundary (spherical)") {
  const LemmaReport report = verify_boundary_farthest(false, 20000, kSeed);
  CHECK(report.id == "boundary-farthest-spherical");
  CHECK(report.violations == 0);
  CHECK(report.worst_margin > 0.0);
}

TEST_CASE("rim maximizer formula matches a dense grid search") {
  // fixed cap in R^3: center origin, axis e3, radius 1, rim height 0.3
  const double alpha = 0.3;
  const double rim = std::sqrt(1.0 - alpha * alpha);
  Vec x(3);
  x << 0.4, -0.2, 0.5;
  // closed form: rim point against the tangential part of x - rim_center
  Vec rel = x;
  rel[2] -= alpha;
  Vec rel_perp = rel;
  rel_perp[2] = 0.0;
  Vec tstar = -rel_perp.normalized();
  Vec y_closed(3);
  y_closed << rim * tstar[0], rim * tstar[1], alpha;

  double grid_best = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double psi = 2.0 * kPi * i / 100000;
    Vec y(3);
    y << rim * std::cos(psi), rim * std::sin(psi), alpha;
    grid_best = std::max(grid_best, dist(x, y));
  }
  CHECK(dist(x, y_closed) >= grid_best - 1e-9);
  CHECK(std::abs(dist(x, y_closed) - grid_best) < 1e-7);
}

//----------------------------------------------------------------------------
// rotation procedure
//----------------------------------------------------------------------------

namespace {

struct RotationChart {
  Vec pivot;
  Vec e1;
  Vec e2;  // downward normal direction
  double radius;
};

RotationChart chart_of(const PointConfig& clique) {
  const int d = clique.space.dim;
  std::vector<Vec> fixed(clique.points.begin() + 1, clique.points.end());
  RotationChart c;
  c.pivot = centroid(fixed);
  Vec radial = clique.points[0] - c.pivot;
  c.radius = radial.norm();
  c.e1 = radial / c.radius;
  c.e2 = Vec::Zero(d);
  c.e2[d - 1] = -1.0;
  return c;
}

// hand-built d = 3 instance: the top witness slides from the apex toward
// vertex 0, the lower witnesses sit deep below the base plane with their
// in-plane component pushed away from vertex 0
RotationInstance handmade_instance(double slide) {
  RotationInstance inst;
  const UpperBodySetup s = upper_setup(3);
  inst.clique = s.clique;
  const RotationChart c = chart_of(inst.clique);
  Vec n = -c.e2;
  inst.witnesses.resize(3);
  inst.witnesses[0] = (1.0 - slide) * s.apex + slide * inst.clique.points[0];
  for (int i = 1; i < 3; ++i)
    inst.witnesses[static_cast<size_t>(i)] =
        inst.clique.points[static_cast<size_t>(i)] - 0.3 * n - 0.05 * c.e1;
  return inst;
}

}  // namespace

TEST_CASE("rotation stops at the predicted unit-distance angle") {
  const RotationInstance inst = handmade_instance(0.07);
  const RotationChart c = chart_of(inst.clique);

  // squared distance from the moving vertex to the top witness is
  // K - 2 R sqrt(a^2 + b^2) cos(theta - phi); solve for distance 1
  const Vec rel = inst.witnesses[0] - c.pivot;
  const double a = c.e1.dot(rel);
  const double b = c.e2.dot(rel);
  const double amp = std::sqrt(a * a + b * b);
  const double phi = std::atan2(b, a);
  const double k_const = rel.squaredNorm() + c.radius * c.radius;
  const double expected =
      phi + std::acos((k_const - 1.0) / (2.0 * c.radius * amp));
  REQUIRE(expected > 0.0);
  REQUIRE(expected < kPi / 2);

  const RotationOutcome out =
      rotation_procedure(inst.clique, inst.witnesses, kSeed);
  CHECK(out.event == RotationEvent::UnitDistance);
  CHECK(out.plane_hit_index == -1);
  CHECK(out.angle == doctest::Approx(expected).epsilon(1e-9));
  CHECK(out.event_residual < 1e-11);
  CHECK(dist(out.moved_vertex, inst.witnesses[0]) ==
        doctest::Approx(1.0).epsilon(1e-11));
  const Vec predicted = c.pivot + c.radius * (std::cos(out.angle) * c.e1 +
                                              std::sin(out.angle) * c.e2);
  CHECK(dist(out.moved_vertex, predicted) < 1e-12);
  CHECK(out.invariant_samples == 100);
  CHECK(out.invariant_violations == 0);
  CHECK(out.containment_margin > -1e-9);
  CHECK(out.exclusion_margin > -1e-9);
  CHECK(out.plane_margin > 0.0);
}

TEST_CASE("rotation stops at the predicted hyperplane-hit angle") {
  RotationInstance inst = handmade_instance(0.16);
  const RotationChart c = chart_of(inst.clique);
  Vec n = -c.e2;
  // witness 1 sits just below the plane, offset toward vertex 0: the moved
  // hyperplane reaches it at tan(theta) = depth / in-plane offset
  inst.witnesses[1] = c.pivot + (0.3 * c.radius) * c.e1 - 0.01 * n;
  const double a1 = c.e1.dot(inst.witnesses[1] - c.pivot);
  const double h1 = n.dot(inst.witnesses[1] - c.pivot);
  const double expected = std::atan(-h1 / a1);

  const RotationOutcome out =
      rotation_procedure(inst.clique, inst.witnesses, kSeed);
  CHECK(out.event == RotationEvent::HyperplaneHit);
  CHECK(out.plane_hit_index == 1);
  CHECK(out.angle == doctest::Approx(expected).epsilon(1e-9));
  CHECK(out.event_residual < 1e-11);
  CHECK(out.invariant_violations == 0);
}

TEST_CASE("rotation rejects malformed inputs") {
  const RotationInstance good = handmade_instance(0.07);

  SUBCASE("top witness on the clique hyperplane") {
    RotationInstance inst = good;
    inst.witnesses[0][2] = 0.0;
    // either the orientation pick fails or the lower-witness sign check does
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    Error);
  }
  SUBCASE("a second witness above the hyperplane") {
    RotationInstance inst = good;
    inst.witnesses[1][2] = 0.2;
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    DomainError);
  }
  SUBCASE("vertex 0 already at unit distance from the top witness") {
    RotationInstance inst = good;
    // slide 0 puts the witness at the apex, exactly at distance 1
    inst.witnesses[0] = upper_setup(3).apex;
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    DomainError);
  }
  SUBCASE("irregular clique") {
    RotationInstance inst = good;
    inst.clique.points[0] *= 1.1;
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    DomainError);
  }
  SUBCASE("wrong witness count") {
    RotationInstance inst = good;
    inst.witnesses.pop_back();
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    ArgumentError);
  }
  SUBCASE("top witness outside the unit-ball intersection body") {
    RotationInstance inst = good;
    inst.witnesses[0] = 2.0 * inst.witnesses[0];
    CHECK_THROWS_AS(rotation_procedure(inst.clique, inst.witnesses, kSeed),
                    DomainError);
  }
  SUBCASE("spherical input") {
    const SphericalFrame f = SphericalFrame::create(2, 1.0);
    const Mat q = Mat::Identity(3, 3);
    PointConfig cfg{Space::sphere(2, 1.0), unit_simplex_on_sphere(f, 3, q),
                    {}};
    CHECK_THROWS_AS(rotation_procedure(cfg, good.witnesses, kSeed),
                    DomainError);
  }
}

TEST_CASE("rotation instances are deterministic in the seed") {
  for (RotationEvent bias :
       {RotationEvent::UnitDistance, RotationEvent::HyperplaneHit}) {
    const RotationInstance a = make_rotation_instance(3, 123, bias);
    const RotationInstance b = make_rotation_instance(3, 123, bias);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (size_t i = 0; i < a.witnesses.size(); ++i)
      CHECK((a.witnesses[i] - b.witnesses[i]).norm() == 0.0);
    const RotationInstance other = make_rotation_instance(3, 124, bias);
    CHECK((a.witnesses[0] - other.witnesses[0]).norm() > 0.0);
  }
}

TEST_CASE("randomized rotation runs hit the designed events") {
  const LemmaReport d3 = verify_rotation(3, 200, 7);
  CHECK(d3.id == "rotation");
  CHECK(d3.trials == 200);
  CHECK(d3.violations == 0);
  CHECK(d3.worst_margin > 0.0);

  const LemmaReport d4 = verify_rotation(4, 100, 11);
  CHECK(d4.violations == 0);

  const LemmaReport d5 = verify_rotation(5, 40, 13);
  CHECK(d5.violations == 0);

  CHECK_THROWS_AS(verify_rotation(2, 10, kSeed), ArgumentError);
  CHECK_THROWS_AS(make_rotation_instance(2, kSeed,
                                         RotationEvent::UnitDistance),
                  ArgumentError);
}

//----------------------------------------------------------------------------
// nested-ball instances
//----------------------------------------------------------------------------

TEST_CASE("nested-ball cutting hyperplane is the equal-power plane") {
  Vec o = Vec::Zero(3);
  Vec op = Vec::Zero(3);
  op[0] = 0.8;
  const NestedBallInstance inst =
      make_nested_instance(Ball{o, 1.0}, Ball{op, 0.5});

  // both centers on the positive side
  CHECK(inst.sigma.signed_dist(inst.outer.center) > 0.0);
  CHECK(inst.sigma.signed_dist(inst.inner.center) > 0.0);

  // the plane carries the sphere-sphere intersection: points there are at
  // distance 1 from o and 1/2 from o'
  const double along = (0.64 + 1.0 - 0.25) / 1.6;
  const double ring = std::sqrt(1.0 - along * along);
  Vec x(3);
  x << along, ring, 0.0;
  CHECK(dist(x, o) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist(x, op) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(inst.sigma.signed_dist(x)) < 1e-12);
}

TEST_CASE("nested-ball instances reject degenerate configurations") {
  Vec o = Vec::Zero(3);
  Vec e = Vec::Zero(3);
  e[0] = 1.0;
  // inner radius not smaller
  CHECK_THROWS_AS(make_nested_instance(Ball{o, 1.0}, Ball{o + 0.3 * e, 1.0}),
                  ArgumentError);
  // concentric
  CHECK_THROWS_AS(make_nested_instance(Ball{o, 1.0}, Ball{o, 0.5}),
                  DomainError);
  // disjoint boundaries
  CHECK_THROWS_AS(make_nested_instance(Ball{o, 1.0}, Ball{o + 2.0 * e, 0.5}),
                  DomainError);
  // inner boundary entirely inside the outer one
  CHECK_THROWS_AS(make_nested_instance(Ball{o, 1.0}, Ball{o + 0.1 * e, 0.5}),
                  DomainError);
  // boundaries intersect but the plane separates the centers
  CHECK_THROWS_AS(make_nested_instance(Ball{o, 1.0}, Ball{o + 0.95 * e, 0.5}),
                  DomainError);
}

//----------------------------------------------------------------------------
// observations
//----------------------------------------------------------------------------

TEST_CASE("observation checks all pass") {
  const std::vector<LemmaReport> reports = observation_reports(2000, 3);
  REQUIRE(reports.size() == 5);
  const std::vector<std::string> ids = {
      "nested-balls", "projection-inside-base", "bisector-halfspace",
      "rotation-nesting", "acute-hull"};
  for (size_t i = 0; i < reports.size(); ++i) {
    CAPTURE(reports[i].id);
    CHECK(reports[i].id == ids[i]);
    CHECK(reports[i].trials == 2000);
    CHECK(reports[i].violations == 0);
    CHECK(reports[i].worst_margin > -1e-9);
  }

  const LemmaReport merged = verify_observations(2000, 3);
  CHECK(merged.id == "observations");
  CHECK(merged.trials == 10000);
  CHECK(merged.violations == 0);
  CHECK(!merged.witness.has_value());
}

//----------------------------------------------------------------------------
// report plumbing
//----------------------------------------------------------------------------

TEST_CASE("reports serialize with a witness only on violation") {
  const LemmaReport clean = verify_sphere_cut(1.0, 2, 3, 5, kSeed);
  const auto j = lemma_report_to_json(clean);
  CHECK(j["id"] == "cut-radius");
  CHECK(j["trials"] == 5);
  CHECK(j["violations"] == 0);
  CHECK(j["equality_cases"] == 0);
  CHECK(j["worst_margin"].get<double>() > 0.0);
  CHECK(!j.contains("witness"));

  LemmaReport fake;
  fake.id = "x";
  fake.trials = 1;
  fake.violations = 1;
  fake.worst_margin = -0.5;
  fake.witness = nlohmann::ordered_json{{"p", 1.0}};
  const auto jf = lemma_report_to_json(fake);
  CHECK(jf.contains("witness"));
  CHECK(jf["witness"]["p"] == 1.0);
}

TEST_CASE("reports are identical across seeds, reruns, and thread counts") {
  const LemmaReport a = verify_half_body_diameter(3, 500, 99);
  const LemmaReport b = verify_half_body_diameter(3, 500, 99);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.violations == b.violations);
  CHECK(a.equality_cases == b.equality_cases);

  setenv("SCHURLAB_THREADS", "3", 1);
  const LemmaReport three = verify_half_body_diameter(3, 500, 99);
  setenv("SCHURLAB_THREADS", "1", 1);
  const LemmaReport one = verify_half_body_diameter(3, 500, 99);
  unsetenv("SCHURLAB_THREADS");
  CHECK(three.worst_margin == one.worst_margin);
  CHECK(three.worst_margin == a.worst_margin);

  const LemmaReport r1 = verify_rotation(3, 20, 5);
  const LemmaReport r2 = verify_rotation(3, 20, 5);
  CHECK(r1.worst_margin == r2.worst_margin);

  // different seeds explore different samples
  const LemmaReport c = verify_half_body_diameter(3, 500, 100);
  CHECK(c.worst_margin != a.worst_margin);
}

TEST_CASE("thread cap respects the environment override") {
  // the override is clamped to the hardware, so only its ceiling is portable
  setenv("SCHURLAB_THREADS", "2", 1);
  CHECK(thread_cap() >= 1);
  CHECK(thread_cap() <= 2);
  setenv("SCHURLAB_THREADS", "1", 1);
  CHECK(thread_cap() == 1);
  setenv("SCHURLAB_THREADS", "0", 1);
  CHECK(thread_cap() >= 1);
  setenv("SCHURLAB_THREADS", "garbage", 1);
  CHECK(thread_cap() >= 1);
  unsetenv("SCHURLAB_THREADS");
  CHECK(thread_cap() >= 1);
}

TEST_CASE("trial mapping preserves order and propagates exceptions") {
  const auto squares = map_trials<long>(100, [](long t) { return t * t; });
  REQUIRE(squares.size() == 100);
  for (long t = 0; t < 100; ++t)
    CHECK(squares[static_cast<size_t>(t)] == t * t);

  CHECK_THROWS_AS(map_trials<int>(50,
                                  [](long t) -> int {
                                    if (t == 31)
                                      throw DomainError("trial 31 failed");
                                    return 0;
                                  }),
                  DomainError);
}
