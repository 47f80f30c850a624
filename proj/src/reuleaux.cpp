#include "schurlab/reuleaux.hpp"

#include "schurlab/rand.hpp"
#include "schurlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace schurlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_unit_sides(const PointConfig& cfg, const Tolerance& tol) {
  for (int i = 0; i < cfg.n(); ++i)
    for (int j = i + 1; j < cfg.n(); ++j) {
      const double d = dist(cfg.points[i], cfg.points[j]);
      if (std::abs(d - 1.0) > tol.eq_tol) {
        std::ostringstream msg;
        msg << "vertices " << i << "," << j << " are " << d
            << " apart, need unit distance";
        throw DomainError(msg.str());
      }
    }
}

ReuleauxBody make_body(BodyKind kind, PointConfig vertices, Tolerance tol,
                       int expected) {
  tol.validate();
  vertices.validate(tol);
  if (vertices.space.dim < 2)
    throw ArgumentError("bodies need intrinsic dimension >= 2");
  if (vertices.n() != expected)
    throw ArgumentError("body needs " + std::to_string(expected) +
                        " vertices in dimension " +
                        std::to_string(vertices.space.dim) + ", got " +
                        std::to_string(vertices.n()));
  if (vertices.space.is_sphere() && vertices.space.radius <= kInvSqrt2)
    throw DomainError("frame sphere radius must exceed 1/sqrt(2)");
  check_unit_sides(vertices, tol);
  return ReuleauxBody{kind, std::move(vertices), tol};
}

// carrier of the face whose complement is `complement` (vertex indices)
Ball carrier_for(const ReuleauxBody& body, const std::vector<int>& complement) {
  std::vector<Vec> pts;
  pts.reserve(complement.size());
  for (int k : complement) pts.push_back(body.vertices.points[k]);
  const double m = static_cast<double>(complement.size());
  return Ball{centroid(pts), std::sqrt((m + 1.0) / (2.0 * m))};
}

std::vector<int> complement_of(const ReuleauxBody& body,
                               const std::vector<int>& subset) {
  std::vector<bool> in(body.n_vertices(), false);
  for (int i : subset) {
    if (i < 0 || i >= body.n_vertices())
      throw ArgumentError("vertex index out of range");
    if (in[i]) throw ArgumentError("duplicate vertex index");
    in[i] = true;
  }
  std::vector<int> out;
  for (int i = 0; i < body.n_vertices(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

// uniform sample from the cap of geodesic radius `angle` around `axis`
Vec sample_cap(Rng& rng, const SphericalFrame& f, const Vec& axis,
               double angle) {
  const Vec a = axis / axis.norm();
  // polar density on [0, angle] is sin^(d-1); angle < pi/2 makes the
  // endpoint the mode, so plain rejection against it is exact
  const double peak = std::pow(std::sin(angle), f.d - 1);
  double theta;
  for (;;) {
    theta = uniform_real(rng, 0.0, angle);
    if (uniform_real(rng, 0.0, peak) <= std::pow(std::sin(theta), f.d - 1))
      break;
  }
  Vec g = gaussian_vec(rng, f.d + 1);
  Vec t = g - g.dot(a) * a;
  while (t.norm() < 1e-12) {
    g = gaussian_vec(rng, f.d + 1);
    t = g - g.dot(a) * a;
  }
  t.normalize();
  return f.r * (std::cos(theta) * a + std::sin(theta) * t);
}

SphericalFrame frame_of(const ReuleauxBody& body) {
  return SphericalFrame::create(body.dim(), body.vertices.space.radius);
}

// circumscribed cap of a spherical body: axis through the vertex centroid
SphericalCap circumscribed_cap(const ReuleauxBody& body) {
  const SphericalFrame f = frame_of(body);
  Vec c = centroid(body.vertices.points);
  if (c.norm() < 1e-9)
    throw DegeneracyError("vertex centroid sits at the sphere center");
  c *= f.r / c.norm();
  double angle = 0;
  for (const Vec& v : body.vertices.points)
    angle = std::max(angle, rho(f, c, v));
  return SphericalCap{c, angle};
}

}  // namespace

ReuleauxBody ReuleauxBody::simplex(PointConfig vertices, Tolerance tol) {
  const int d = vertices.space.dim;
  return make_body(BodyKind::Simplex, std::move(vertices), tol, d + 1);
}

ReuleauxBody ReuleauxBody::rugby_ball(PointConfig vertices, Tolerance tol) {
  const int d = vertices.space.dim;
  return make_body(BodyKind::RugbyBall, std::move(vertices), tol, d);
}

double ReuleauxBody::margin(const Vec& p) const {
  if (p.size() != vertices.space.ambient_dim())
    throw DimensionError("point dimension does not match the body");
  double worst = 1e300;
  for (const Vec& v : vertices.points)
    worst = std::min(worst, 1.0 - (p - v).norm());
  return worst;
}

Ball face_carrier(const ReuleauxBody& body, std::vector<int> subset) {
  if (body.spherical())
    throw DomainError("face carriers are defined for Euclidean bodies");
  if (subset.empty())
    throw ArgumentError("face needs a nonempty vertex subset");
  std::vector<int> complement = complement_of(body, subset);
  if (complement.empty())
    throw ArgumentError("face subset must be proper");
  return carrier_for(body, complement);
}

Face face_of_boundary_point(const ReuleauxBody& body, const Vec& p) {
  if (body.spherical())
    throw DomainError("face classification is defined for Euclidean bodies");
  const double m = body.margin(p);
  if (std::abs(m) > body.tol.eq_tol)
    throw DomainError("point is not on the body boundary (margin " +
                      std::to_string(m) + ")");
  Face face;
  for (int i = 0; i < body.n_vertices(); ++i)
    if (dist(p, body.vertices.points[i]) < 1.0 - body.tol.eq_tol)
      face.vertex_subset.push_back(i);
  if (face.vertex_subset.empty() && body.kind == BodyKind::Simplex)
    throw DomainError(
        "boundary point at unit distance from every vertex of a simplex body");
  face.carrier = carrier_for(body, complement_of(body, face.vertex_subset));
  return face;
}

ProjectionCheck central_projection_check(const ReuleauxBody& body,
                                         const std::vector<int>& subset,
                                         int samples, uint64_t seed) {
  if (body.spherical() || body.kind != BodyKind::Simplex)
    throw DomainError("central projection runs on Euclidean simplex bodies");
  if (subset.empty() ||
      static_cast<int>(subset.size()) >= body.n_vertices())
    throw ArgumentError("subset must be proper and nonempty");
  complement_of(body, subset);  // validates indices
  const Vec hull_center = centroid(body.vertices.points);
  Rng rng = make_rng(seed);
  ProjectionCheck out;
  out.samples = samples;
  std::vector<int> expected = subset;
  std::sort(expected.begin(), expected.end());
  for (int s = 0; s < samples; ++s) {
    std::vector<double> w = uniform_barycentric(rng, subset.size());
    Vec q = Vec::Zero(body.dim());
    for (size_t i = 0; i < subset.size(); ++i)
      q += w[i] * body.vertices.points[subset[i]];
    const Vec u = q - hull_center;
    if (u.norm() < 1e-12) continue;  // hull center itself: no ray
    // exit parameter of each vertex ball along p(t) = center + t u; the hull
    // center is interior, so each quadratic has one positive root
    double t_exit = 1e300;
    for (const Vec& v : body.vertices.points) {
      const Vec co = hull_center - v;
      const double a = u.squaredNorm();
      const double b = 2.0 * u.dot(co);
      const double c = co.squaredNorm() - 1.0;
      const double disc = b * b - 4.0 * a * c;
      const double root = (-b + std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
      t_exit = std::min(t_exit, root);
    }
    Face face = face_of_boundary_point(body, hull_center + t_exit * u);
    if (face.vertex_subset == expected) ++out.agree;
  }
  return out;
}

CrossSection cross_section(const ReuleauxBody& body,
                           const std::vector<int>& facet) {
  if (body.spherical() || body.kind != BodyKind::Simplex)
    throw DomainError("cross sections run on Euclidean simplex bodies");
  if (static_cast<int>(facet.size()) != body.dim())
    throw ArgumentError("facet needs exactly d vertices");
  complement_of(body, facet);  // validates
  std::vector<Vec> chosen;
  for (int i : facet) chosen.push_back(body.vertices.points[i]);
  AffineFrame frame = AffineFrame::of_affine_hull(chosen);
  if (frame.flat_dim() != body.dim() - 1)
    throw DegeneracyError("facet does not span a hyperplane");
  PointConfig local;
  local.space = Space::euclidean(body.dim() - 1);
  for (const Vec& v : chosen) local.points.push_back(frame.to_local(v));
  return CrossSection{ReuleauxBody::simplex(std::move(local), body.tol),
                      frame};
}

SampleCheck halfspace_identity_check(const ReuleauxBody& simplex, long samples,
                                     uint64_t seed) {
  if (simplex.kind != BodyKind::Simplex)
    throw DomainError("halfspace identity needs a simplex body");
  const int d = simplex.dim();
  PointConfig base_cfg;
  base_cfg.space = simplex.vertices.space;
  for (int i = 0; i < d; ++i)
    base_cfg.points.push_back(simplex.vertices.points[i]);
  const Vec& top = simplex.vertices.points[d];
  ReuleauxBody rugby = ReuleauxBody::rugby_ball(base_cfg, simplex.tol);

  Rng rng = make_rng(seed);
  SampleCheck out;
  out.worst_margin = 1e300;

  if (!simplex.spherical()) {
    Hyperplane pi = Hyperplane::through(base_cfg.points);
    if (pi.signed_dist(top) < 0) {
      pi.normal = -pi.normal;
      pi.offset = -pi.offset;
    }
    // every point within unit distance of all base vertices is within one of
    // their centroid, so this ball covers both bodies
    const Vec c = centroid(base_cfg.points);
    for (long s = 0; s < samples; ++s) {
      Vec p = uniform_in_ball(rng, c, 1.0);
      if (pi.signed_dist(p) < 0) p = project_to_hyperplane(p, pi) * 2.0 - p;
      ++out.samples;
      const double ms = simplex.margin(p), mr = rugby.margin(p);
      if (simplex.contains(p) != rugby.contains(p)) {
        ++out.violations;
        out.worst_margin = std::min(out.worst_margin, 0.0);
      }
      out.worst_margin =
          std::min(out.worst_margin, std::max(std::abs(ms), std::abs(mr)));
    }
  } else {
    const SphericalFrame f = frame_of(simplex);
    Mat basis(d + 1, d);
    for (int i = 0; i < d; ++i) basis.col(i) = base_cfg.points[i];
    Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeFullU);
    Vec n = svd.matrixU().col(d);  // normal of the base diametral sphere
    if (n.dot(top) < 0) n = -n;
    for (long s = 0; s < samples; ++s) {
      Vec p = sample_cap(rng, f, base_cfg.points[0], f.phi);
      if (n.dot(p) < 0) p -= 2.0 * n.dot(p) * n;  // fold onto the top side
      ++out.samples;
      const double ms = simplex.margin(p), mr = rugby.margin(p);
      if (simplex.contains(p) != rugby.contains(p)) {
        ++out.violations;
        out.worst_margin = std::min(out.worst_margin, 0.0);
      }
      out.worst_margin =
          std::min(out.worst_margin, std::max(std::abs(ms), std::abs(mr)));
    }
  }
  return out;
}

Vec arc_midpoint(const ReuleauxBody& body, int i, int j) {
  if (body.spherical() || body.kind != BodyKind::Simplex)
    throw DomainError("arc midpoints run on Euclidean simplex bodies");
  if (i == j) throw ArgumentError("arc needs two distinct vertices");
  std::vector<int> complement = complement_of(body, {i, j});
  Ball carrier = carrier_for(body, complement);
  const Vec mid =
      0.5 * (body.vertices.points[i] + body.vertices.points[j]);
  Vec u = mid - carrier.center;
  if (u.norm() < 1e-12) throw DegeneracyError("arc direction degenerates");
  u.normalize();
  // walk from the carrier center toward the chord midpoint until the
  // complement spheres are hit: |C + s u - v_k| = 1
  const Vec& vk = body.vertices.points[complement.front()];
  const Vec co = carrier.center - vk;
  const double b = 2.0 * u.dot(co);
  const double c = co.squaredNorm() - 1.0;
  const double disc = b * b - 4.0 * c;
  if (disc < 0) throw DegeneracyError("arc carrier misses the unit sphere");
  Vec best;
  double best_margin = -1e300;
  for (const double s :
       {(-b + std::sqrt(disc)) / 2.0, (-b - std::sqrt(disc)) / 2.0}) {
    const Vec p = carrier.center + s * u;
    const double m = body.margin(p);
    if (m > best_margin) {
      best_margin = m;
      best = p;
    }
  }
  if (best_margin < -body.tol.eq_tol)
    throw DegeneracyError("midpoint candidate left the body");
  return best;
}

namespace {

struct RedBlueMargins {
  double blue_blue;  // min pairwise blue distance - 1
  double red_blue;   // 1 - max red-blue distance
  RedBlue result;
};

RedBlueMargins red_blue_margins(int d, double delta) {
  PointConfig red = regular_unit_simplex(d, d + 1);
  ReuleauxBody body = ReuleauxBody::simplex(red);
  const Vec center = centroid(red.points);  // origin by construction
  const int pairs = (d + 1) / 2;
  PointConfig blue;
  blue.space = red.space;
  for (int p = 0; p < pairs; ++p) {
    Vec y = arc_midpoint(body, 2 * p, 2 * p + 1);
    blue.points.push_back(center + (1.0 - delta) * (y - center));
  }
  RedBlueMargins m;
  m.result.red = std::move(red);
  m.result.delta = delta;
  double min_bb = 1e300, max_rb = 0, min_margin = 1e300;
  for (size_t a = 0; a < blue.points.size(); ++a) {
    for (size_t b = a + 1; b < blue.points.size(); ++b)
      min_bb = std::min(min_bb, dist(blue.points[a], blue.points[b]));
    for (const Vec& v : m.result.red.points)
      max_rb = std::max(max_rb, dist(blue.points[a], v));
    min_margin = std::min(min_margin, body.margin(blue.points[a]));
  }
  m.result.blue = std::move(blue);
  m.result.min_blue_blue = (pairs > 1) ? min_bb : 1e300;
  m.result.max_red_blue = max_rb;
  m.result.min_margin = min_margin;
  m.blue_blue = (pairs > 1) ? min_bb - 1.0 : 1e300;
  m.red_blue = 1.0 - max_rb;
  return m;
}

}  // namespace

RedBlue red_blue_construction(int d, double delta) {
  if (d < 3) throw ArgumentError("construction needs d >= 3");
  if (!(delta > 0) || delta >= 1)
    throw ArgumentError("delta must lie in (0, 1)");
  RedBlueMargins m = red_blue_margins(d, delta);
  std::ostringstream msg;
  if (m.blue_blue <= 0) {
    msg << "blue pair margin " << m.blue_blue << " at delta " << delta;
    throw DomainError(msg.str());
  }
  if (m.red_blue <= 0) {
    msg << "red-blue margin " << m.red_blue << " at delta " << delta;
    throw DomainError(msg.str());
  }
  if (m.result.min_margin <= 0) {
    msg << "interior margin " << m.result.min_margin << " at delta " << delta;
    throw DomainError(msg.str());
  }
  return m.result;
}

double red_blue_max_delta(int d) {
  if (d < 3) throw ArgumentError("construction needs d >= 3");
  auto feasible = [&](double delta) {
    RedBlueMargins m = red_blue_margins(d, delta);
    return m.blue_blue > 0 && m.red_blue > 0 && m.result.min_margin > 0;
  };
  double lo = 1e-9, hi = 0.9;
  if (!feasible(lo)) return 0.0;
  while (feasible(hi)) hi = 0.5 * (hi + 1.0);  // defensive; contraction caps it
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<Vec> sample_body(const ReuleauxBody& body, long n, uint64_t seed,
                             long* proposals) {
  Rng rng = make_rng(seed);
  std::vector<Vec> out;
  out.reserve(n);
  long tried = 0;
  const long cap = std::max<long>(1000000, n * 100000);
  if (!body.spherical()) {
    Ball bound;
    if (body.kind == BodyKind::Simplex) {
      bound = circumscribed_ball(body.vertices, body.tol);
    } else {
      // the farthest body point from the base centroid is the apex
      const double d = body.dim();
      bound = Ball{centroid(body.vertices.points),
                   std::sqrt((d + 1.0) / (2.0 * d))};
    }
    while (static_cast<long>(out.size()) < n) {
      if (++tried > cap) throw DomainError("body sampling stalled");
      Vec p = uniform_in_ball(rng, bound.center, bound.radius);
      if (body.margin(p) >= 0) out.push_back(std::move(p));
    }
  } else {
    const SphericalFrame f = frame_of(body);
    const Vec& axis = body.vertices.points[0];
    while (static_cast<long>(out.size()) < n) {
      if (++tried > cap) throw DomainError("body sampling stalled");
      Vec p = sample_cap(rng, f, axis, f.phi);
      if (body.margin(p) >= 0) out.push_back(std::move(p));
    }
  }
  if (proposals) *proposals = tried;
  return out;
}

std::vector<Vec> sample_face(const ReuleauxBody& body,
                             const std::vector<int>& subset, long n,
                             uint64_t seed) {
  if (body.spherical() || body.kind != BodyKind::Simplex)
    throw DomainError("face sampling runs on Euclidean simplex bodies");
  if (subset.empty()) throw ArgumentError("face needs a nonempty subset");
  std::vector<int> complement = complement_of(body, subset);
  if (complement.empty()) throw ArgumentError("face subset must be proper");
  Ball carrier = carrier_for(body, complement);
  const int d = body.dim();
  // the carrier sphere of the face lives in the flat orthogonal to the
  // complement directions through the carrier center
  Mat dirs(d, complement.size());
  for (size_t k = 0; k < complement.size(); ++k)
    dirs.col(k) = body.vertices.points[complement[k]] - carrier.center;
  Eigen::JacobiSVD<Mat> svd(dirs, Eigen::ComputeFullU);
  const int span_dim = static_cast<int>(complement.size()) - 1;
  Mat flat = svd.matrixU().rightCols(d - span_dim);

  Rng rng = make_rng(seed);
  std::vector<Vec> out;
  out.reserve(n);
  long tried = 0;
  const long cap = std::max<long>(1000000, n * 100000);
  while (static_cast<long>(out.size()) < n) {
    if (++tried > cap) throw DomainError("face sampling stalled");
    Vec u = uniform_on_sphere(rng, static_cast<int>(flat.cols()));
    Vec p = carrier.center + carrier.radius * (flat * u);
    bool strict = true;
    for (int s : subset)
      if (dist(p, body.vertices.points[s]) >= 1.0 - body.tol.eq_tol) {
        strict = false;
        break;
      }
    if (strict) out.push_back(std::move(p));
  }
  return out;
}

SampleCheck circumball_check(const ReuleauxBody& body, long samples,
                             uint64_t seed) {
  if (body.kind != BodyKind::Simplex)
    throw DomainError("circumscribed-ball check needs a simplex body");
  SampleCheck out;
  out.worst_margin = 1e300;
  Rng rng = make_rng(mix_seed(seed, 1));
  const long surface_samples = std::max<long>(samples / 10, 100);
  const double near_vertex = 1e-3;  // margin decays linearly away from them

  if (!body.spherical()) {
    Ball ball = circumscribed_ball(body.vertices, body.tol);
    // body points drawn independently of the ball under test: rejection from
    // the box intersection of the per-vertex boxes [v - 1, v + 1]
    Vec lo = Vec::Constant(body.dim(), -1e300);
    Vec hi = Vec::Constant(body.dim(), 1e300);
    for (const Vec& v : body.vertices.points) {
      lo = lo.cwiseMax((v.array() - 1.0).matrix());
      hi = hi.cwiseMin((v.array() + 1.0).matrix());
    }
    Rng box_rng = make_rng(mix_seed(seed, 2));
    long kept = 0, tried = 0;
    const long cap = std::max<long>(1000000, samples * 100000);
    while (kept < samples) {
      if (++tried > cap) throw DomainError("box sampling stalled");
      Vec p(body.dim());
      for (int a = 0; a < body.dim(); ++a)
        p(a) = uniform_real(box_rng, lo(a), hi(a));
      if (body.margin(p) < 0) continue;
      ++kept;
      ++out.samples;
      const double slack = ball.radius - (p - ball.center).norm();
      out.worst_margin = std::min(out.worst_margin, slack);
      if (slack < -body.tol.geom_tol) ++out.violations;
    }
    for (long s = 0; s < surface_samples; ++s) {
      Vec p = ball.center +
              ball.radius * uniform_on_sphere(rng, body.dim());
      ++out.samples;
      if (body.margin(p) >= -body.tol.geom_tol) {
        double to_vertex = 1e300;
        for (const Vec& v : body.vertices.points)
          to_vertex = std::min(to_vertex, dist(p, v));
        if (to_vertex > near_vertex) ++out.violations;
      }
    }
  } else {
    const SphericalFrame f = frame_of(body);
    SphericalCap cap = circumscribed_cap(body);
    const double cap_chord = f.chord(cap.angle);
    for (const Vec& p : sample_body(body, samples, mix_seed(seed, 2))) {
      ++out.samples;
      const double slack = cap_chord - f.chord(rho(f, cap.center, p));
      out.worst_margin = std::min(out.worst_margin, slack);
      if (slack < -body.tol.geom_tol) ++out.violations;
    }
    // ring of the cap: the body may only touch it at vertices
    Mat basis(f.d + 1, 1);
    basis.col(0) = cap.center / f.r;
    Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeFullU);
    Mat tangent = svd.matrixU().rightCols(f.d);
    for (long s = 0; s < surface_samples; ++s) {
      Vec t = tangent * uniform_on_sphere(rng, f.d);
      Vec p = std::cos(cap.angle) * cap.center + std::sin(cap.angle) * f.r * t;
      ++out.samples;
      if (body.margin(p) >= -body.tol.geom_tol) {
        double to_vertex = 1e300;
        for (const Vec& v : body.vertices.points)
          to_vertex = std::min(to_vertex, dist(p, v));
        if (to_vertex > near_vertex) ++out.violations;
      }
    }
  }
  return out;
}

}  // namespace schurlab
