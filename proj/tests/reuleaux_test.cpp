#include "schurlab/reuleaux.hpp"

#include "schurlab/rand.hpp"
#include "schurlab/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace schurlab;

namespace {

constexpr uint64_t kSeed = 42;

// distance between midpoints of opposite arcs of the d = 3 body, derived by
// hand: both midpoints sit on the common perpendicular of the two opposite
// edges, at heights sqrt(3)/2 and 1/sqrt(2) - sqrt(3)/2 above them
const double kOppositeArcDist = std::sqrt(3.0) - std::sqrt(2.0) / 2.0;

ReuleauxBody unit_simplex_body(int d) {
  return ReuleauxBody::simplex(regular_unit_simplex(d, d + 1));
}

// independent construction of the arc midpoint in d = 3: parametrize the
// circle at unit distance from v_k and v_l directly and bisect on the
// signed distance difference to v_i and v_j
Vec arc_midpoint_by_bisection(const ReuleauxBody& body, int i, int j, int k,
                              int l) {
  const Vec& vk = body.vertices.points[k];
  const Vec& vl = body.vertices.points[l];
  const Vec c = 0.5 * (vk + vl);
  const double radius = std::sqrt(1.0 - 0.25 * (vl - vk).squaredNorm());
  Mat axis(3, 1);
  axis.col(0) = vl - vk;
  Eigen::FullPivHouseholderQR<Mat> qr(axis);
  Mat q = qr.matrixQ();
  const Vec e1 = q.col(1), e2 = q.col(2);
  auto point = [&](double t) -> Vec {
    return c + radius * (std::cos(t) * e1 + std::sin(t) * e2);
  };
  auto f = [&](double t) {
    const Vec p = point(t);
    return dist(p, body.vertices.points[i]) - dist(p, body.vertices.points[j]);
  };
  const int steps = 720;
  for (int s = 0; s < steps; ++s) {
    double a = 2.0 * M_PI * s / steps;
    double b = 2.0 * M_PI * (s + 1) / steps;
    if (f(a) == 0.0 && body.margin(point(a)) > -1e-9) return point(a);
    if (f(a) * f(b) > 0) continue;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      (f(a) * f(m) <= 0 ? b : a) = m;
    }
    const Vec p = point(0.5 * (a + b));
    if (body.margin(p) > -1e-9) return p;
  }
  FAIL("no in-body equidistant point on the carrier circle");
  return Vec();
}

}  // namespace

TEST_CASE("body construction validates shape and sides") {
  CHECK_NOTHROW(unit_simplex_body(3));
  CHECK_NOTHROW(ReuleauxBody::rugby_ball(regular_unit_simplex(3, 3)));

  // wrong vertex count for the kind
  CHECK_THROWS_AS(ReuleauxBody::simplex(regular_unit_simplex(3, 3)),
                  ArgumentError);
  CHECK_THROWS_AS(ReuleauxBody::rugby_ball(regular_unit_simplex(3, 4)),
                  ArgumentError);

  // a perturbed side is rejected with the offending pair
  PointConfig bad = regular_unit_simplex(3, 4);
  bad.points[2](0) += 1e-4;
  CHECK_THROWS_AS(ReuleauxBody::simplex(bad), DomainError);

  CHECK_THROWS_AS(ReuleauxBody::simplex(regular_unit_simplex(1, 2)),
                  ArgumentError);
}

TEST_CASE("spherical bodies need radius above 1/sqrt(2)") {
  SphericalFrame f = SphericalFrame::create(2, 0.7);
  PointConfig cfg;
  cfg.space = Space::sphere(2, 0.7);
  for (Vec& v : unit_simplex_on_sphere(f, 3, Mat::Identity(3, 3)))
    cfg.points.push_back(std::move(v));
  CHECK_THROWS_AS(ReuleauxBody::simplex(cfg), DomainError);

  SphericalFrame g = SphericalFrame::create(2, 1.0);
  PointConfig ok;
  ok.space = Space::sphere(2, 1.0);
  for (Vec& v : unit_simplex_on_sphere(g, 3, Mat::Identity(3, 3)))
    ok.points.push_back(std::move(v));
  CHECK_NOTHROW(ReuleauxBody::simplex(ok));
}

TEST_CASE("margin and containment at landmark points") {
  ReuleauxBody body = unit_simplex_body(3);
  const Vec c = centroid(body.vertices.points);
  // vertices are boundary points, the centroid is deep inside
  for (const Vec& v : body.vertices.points) {
    CHECK(std::abs(body.margin(v)) < 1e-12);
    CHECK(body.contains(v));
  }
  CHECK(body.margin(c) > 0.3);
  CHECK(!body.contains(c + Vec::Unit(3, 0) * 2.0));
  CHECK_THROWS_AS(body.margin(Vec::Zero(4)), DimensionError);
}

TEST_CASE("face carriers match the closed forms") {
  ReuleauxBody body = unit_simplex_body(3);

  // complement of size 1: the carrier is that vertex's own unit sphere
  Ball facet = face_carrier(body, {0, 1, 2});
  CHECK(facet.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist(facet.center, body.vertices.points[3]) < 1e-12);

  // complement of size 2: radius sqrt(3)/2 about the opposite edge midpoint
  Ball arc = face_carrier(body, {0, 1});
  CHECK(arc.radius == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  const Vec mid =
      0.5 * (body.vertices.points[2] + body.vertices.points[3]);
  CHECK(dist(arc.center, mid) < 1e-12);

  CHECK_THROWS_AS(face_carrier(body, {}), ArgumentError);
  CHECK_THROWS_AS(face_carrier(body, {0, 1, 2, 3}), ArgumentError);
  CHECK_THROWS_AS(face_carrier(body, {0, 0}), ArgumentError);
  CHECK_THROWS_AS(face_carrier(body, {7}), ArgumentError);
}

TEST_CASE("boundary points classify by their strict vertex set") {
  ReuleauxBody body = unit_simplex_body(3);

  Face at_vertex = face_of_boundary_point(body, body.vertices.points[0]);
  CHECK(at_vertex.vertex_subset == std::vector<int>{0});
  // complement size 3: carrier radius sqrt((3+1)/(2*3)), and the vertex
  // itself lies on that carrier
  CHECK(at_vertex.carrier.radius ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(dist(at_vertex.carrier.center, body.vertices.points[0]) -
                 at_vertex.carrier.radius) < 1e-12);

  Face at_arc = face_of_boundary_point(body, arc_midpoint(body, 1, 2));
  CHECK(at_arc.vertex_subset == std::vector<int>{1, 2});
  CHECK(at_arc.carrier.radius ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(face_of_boundary_point(body, centroid(body.vertices.points)),
                  DomainError);
}

TEST_CASE("arc midpoints agree with an independent bisection construction") {
  ReuleauxBody body = unit_simplex_body(3);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      std::vector<int> comp;
      for (int k = 0; k < 4; ++k)
        if (k != i && k != j) comp.push_back(k);
      const Vec lib = arc_midpoint(body, i, j);
      const Vec ref = arc_midpoint_by_bisection(body, i, j, comp[0], comp[1]);
      CHECK(dist(lib, ref) < 1e-10);
      // midpoint invariants: equidistant from its arc pair, unit distance
      // from the complement, on the boundary
      CHECK(std::abs(dist(lib, body.vertices.points[i]) -
                     dist(lib, body.vertices.points[j])) < 1e-12);
      for (int k : comp)
        CHECK(std::abs(dist(lib, body.vertices.points[k]) - 1.0) < 1e-12);
      CHECK(std::abs(body.margin(lib)) < 1e-12);
    }
  CHECK_THROWS_AS(arc_midpoint(body, 2, 2), ArgumentError);
}

TEST_CASE("opposite arc midpoints of the d=3 body sit sqrt(3)-sqrt(2)/2 apart") {
  ReuleauxBody body = unit_simplex_body(3);
  const Vec m01 = arc_midpoint(body, 0, 1);
  const Vec m23 = arc_midpoint(body, 2, 3);
  CHECK(dist(m01, m23) ==
        doctest::Approx(kOppositeArcDist).epsilon(1e-12));
  CHECK(dist(m01, m23) ==
        doctest::Approx(1.0249440263823297).epsilon(1e-12));
}

TEST_CASE("central projection classifies every hull face consistently") {
  ReuleauxBody body = unit_simplex_body(3);
  const std::vector<std::vector<int>> subsets = {
      {0}, {3}, {0, 1}, {1, 3}, {0, 1, 2}, {1, 2, 3}};
  uint64_t stream = 0;
  for (const auto& s : subsets) {
    ProjectionCheck pc =
        central_projection_check(body, s, 400, mix_seed(kSeed, ++stream));
    CHECK(pc.samples == 400);
    CHECK(pc.agree == pc.samples);
  }
  CHECK_THROWS_AS(central_projection_check(body, {0, 1, 2, 3}, 10, kSeed),
                  ArgumentError);
  CHECK_THROWS_AS(central_projection_check(body, {}, 10, kSeed),
                  ArgumentError);
}

TEST_CASE("cross sections by facet hyperplanes restrict the body exactly") {
  ReuleauxBody body = unit_simplex_body(3);
  CrossSection cs = cross_section(body, {0, 1, 2});
  CHECK(cs.body.dim() == 2);
  CHECK(cs.body.n_vertices() == 3);

  const Vec& apex = body.vertices.points[3];
  Rng rng = make_rng(kSeed);
  const Vec c2 = centroid(cs.body.vertices.points);
  int decisive = 0;
  for (int s = 0; s < 2000; ++s) {
    const Vec u = uniform_in_ball(rng, c2, 0.7);
    const Vec x = cs.frame.to_ambient(u);
    const double m2 = cs.body.margin(u);
    const double m3 = body.margin(x);
    // in the facet plane the full-body margin is the section margin capped
    // by the apex sphere
    CHECK(std::abs(m3 - std::min(m2, 1.0 - dist(x, apex))) < 1e-12);
    if (std::abs(m2) > 1e-9 && std::abs(m3) > 1e-9) {
      ++decisive;
      CHECK(cs.body.contains(u) == body.contains(x));
    }
  }
  CHECK(decisive > 1500);
  CHECK_THROWS_AS(cross_section(body, {0, 1}), ArgumentError);
}

TEST_CASE("simplex and rugby-ball bodies agree above the base hyperplane") {
  for (int d : {3, 4}) {
    SampleCheck hc = halfspace_identity_check(unit_simplex_body(d), 20000,
                                              mix_seed(kSeed, d));
    CHECK(hc.samples == 20000);
    CHECK(hc.violations == 0);
  }
}

TEST_CASE("spherical simplex and rugby-ball bodies agree above the base") {
  SphericalFrame f = SphericalFrame::create(3, 0.8);
  PointConfig cfg;
  cfg.space = Space::sphere(3, 0.8);
  for (Vec& v : unit_simplex_on_sphere(f, 4, Mat::Identity(4, 4)))
    cfg.points.push_back(std::move(v));
  ReuleauxBody body = ReuleauxBody::simplex(cfg);
  SampleCheck hc = halfspace_identity_check(body, 20000, kSeed);
  CHECK(hc.samples == 20000);
  CHECK(hc.violations == 0);
}

TEST_CASE("bodies fit their circumscribed ball, touching only at vertices") {
  for (int d : {3, 4, 5}) {
    SampleCheck cc =
        circumball_check(unit_simplex_body(d), 20000, mix_seed(kSeed, d));
    CHECK(cc.violations == 0);
    CHECK(cc.worst_margin >= -1e-9);
  }

  SphericalFrame f = SphericalFrame::create(2, 1.0);
  PointConfig cfg;
  cfg.space = Space::sphere(2, 1.0);
  for (Vec& v : unit_simplex_on_sphere(f, 3, Mat::Identity(3, 3)))
    cfg.points.push_back(std::move(v));
  SampleCheck sc = circumball_check(ReuleauxBody::simplex(cfg), 20000, kSeed);
  CHECK(sc.violations == 0);
}

TEST_CASE("rugby ball: apex margin, classification, bounding ball") {
  ReuleauxBody rb = ReuleauxBody::rugby_ball(regular_unit_simplex(3, 3));
  const Vec c = centroid(rb.vertices.points);

  Mat dirs(3, 2);
  dirs.col(0) = rb.vertices.points[1] - rb.vertices.points[0];
  dirs.col(1) = rb.vertices.points[2] - rb.vertices.points[0];
  Eigen::JacobiSVD<Mat> svd(dirs, Eigen::ComputeFullU);
  const Vec n = svd.matrixU().col(2);
  const double h = std::sqrt((3.0 + 1.0) / (2.0 * 3.0));

  const Vec apex = c + h * n;
  CHECK(std::abs(rb.margin(apex)) < 1e-12);
  CHECK(rb.margin(c + (h + 1e-6) * n) < 0);

  Face f = face_of_boundary_point(rb, apex);
  CHECK(f.vertex_subset.empty());
  CHECK(f.carrier.radius == doctest::Approx(h).epsilon(1e-12));
  CHECK(dist(f.carrier.center, c) < 1e-12);

  // every body point stays within the apex radius of the base centroid
  Rng rng = make_rng(kSeed);
  for (int s = 0; s < 10000; ++s) {
    const Vec p = uniform_in_ball(rng, c, 1.2 * h);
    if (rb.margin(p) >= 0) CHECK(dist(p, c) <= h + 1e-12);
  }
}

TEST_CASE("body sampling is deterministic and stays inside") {
  ReuleauxBody body = unit_simplex_body(4);
  long proposals = 0;
  std::vector<Vec> a = sample_body(body, 500, kSeed, &proposals);
  std::vector<Vec> b = sample_body(body, 500, kSeed);
  std::vector<Vec> other = sample_body(body, 500, kSeed + 1);
  CHECK(proposals >= 500);
  REQUIRE(a.size() == 500);
  double same = 0, diff = 0;
  for (int i = 0; i < 500; ++i) {
    same += dist(a[i], b[i]);
    diff += dist(a[i], other[i]);
    CHECK(body.margin(a[i]) >= 0);
  }
  CHECK(same == 0.0);
  CHECK(diff > 0.0);
}

TEST_CASE("two independent volume estimates of the d=3 body agree") {
  ReuleauxBody body = unit_simplex_body(3);

  long proposals = 0;
  const long n = 100000;
  sample_body(body, n, kSeed, &proposals);
  const Ball ball = circumscribed_ball(body.vertices);
  const double vol_ball = 4.0 / 3.0 * M_PI * std::pow(ball.radius, 3);
  const double p1 = static_cast<double>(n) / proposals;
  const double est1 = vol_ball * p1;
  const double se1 = vol_ball * std::sqrt(p1 * (1 - p1) / proposals);

  Rng rng = make_rng(mix_seed(kSeed, 99));
  const long trials = 200000;
  long hits = 0;
  const double side = 2.0 * ball.radius;
  for (long t = 0; t < trials; ++t) {
    Vec p(3);
    for (int a = 0; a < 3; ++a)
      p(a) = ball.center(a) + uniform_real(rng, -ball.radius, ball.radius);
    if (body.margin(p) >= 0) ++hits;
  }
  const double vol_box = std::pow(side, 3);
  const double p2 = static_cast<double>(hits) / trials;
  const double est2 = vol_box * p2;
  const double se2 = vol_box * std::sqrt(p2 * (1 - p2) / trials);

  CHECK(std::abs(est1 - est2) < 3.0 * std::sqrt(se1 * se1 + se2 * se2));
  CHECK(est1 > 0.35);
  CHECK(est1 < 0.50);
}

TEST_CASE("face samples stay on their face and classify back") {
  ReuleauxBody body = unit_simplex_body(3);
  std::vector<Vec> pts = sample_face(body, {0, 1}, 200, kSeed);
  REQUIRE(pts.size() == 200);
  for (const Vec& p : pts) {
    CHECK(std::abs(dist(p, body.vertices.points[2]) - 1.0) < 1e-9);
    CHECK(std::abs(dist(p, body.vertices.points[3]) - 1.0) < 1e-9);
    CHECK(dist(p, body.vertices.points[0]) < 1.0);
    CHECK(dist(p, body.vertices.points[1]) < 1.0);
    CHECK(face_of_boundary_point(body, p).vertex_subset ==
          std::vector<int>{0, 1});
  }
  std::vector<Vec> facet = sample_face(body, {0, 1, 2}, 50, kSeed);
  for (const Vec& p : facet)
    CHECK(face_of_boundary_point(body, p).vertex_subset ==
          std::vector<int>{0, 1, 2});
}

TEST_CASE("red-blue construction holds its margins across dimensions") {
  for (int d = 3; d <= 8; ++d) {
    RedBlue rb = red_blue_construction(d, 1e-3);
    CHECK(static_cast<int>(rb.blue.points.size()) == (d + 1) / 2);
    CHECK(rb.red.n() == d + 1);
    if (rb.blue.points.size() > 1) CHECK(rb.min_blue_blue > 1.0);
    CHECK(rb.max_red_blue < 1.0);
    CHECK(rb.min_margin > 0.0);
  }
}

TEST_CASE("red-blue rejects degenerate contractions") {
  CHECK_THROWS_AS(red_blue_construction(3, 0.0), ArgumentError);
  CHECK_THROWS_AS(red_blue_construction(3, 1.0), ArgumentError);
  CHECK_THROWS_AS(red_blue_construction(2, 1e-3), ArgumentError);
  // far past the feasible window the blue pair collapses below unit distance
  CHECK_THROWS_AS(red_blue_construction(3, 0.05), DomainError);
}

TEST_CASE("blue-blue distances scale exactly with the contraction") {
  const double delta = 0.01;
  RedBlue rb = red_blue_construction(3, delta);
  CHECK(rb.min_blue_blue ==
        doctest::Approx((1.0 - delta) * kOppositeArcDist).epsilon(1e-12));
}

TEST_CASE("the d=3 contraction window ends where blue pairs hit unit length") {
  const double dmax = red_blue_max_delta(3);
  // binding constraint: (1 - delta) * opposite-arc distance = 1
  CHECK(dmax == doctest::Approx(1.0 - 1.0 / kOppositeArcDist).epsilon(1e-9));
  CHECK(dmax > 0.01);
  CHECK(dmax < 0.03);
  CHECK_NOTHROW(red_blue_construction(3, 0.9 * dmax));
  CHECK_THROWS_AS(red_blue_construction(3, 1.1 * dmax), DomainError);
}
