#include "schurlab/lemma_lab.hpp"

#include "schurlab/parallel.hpp"
#include "schurlab/pointset_io.hpp"
#include "schurlab/reuleaux.hpp"
#include "schurlab/sphere.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace schurlab {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
// samples this deep inside an open set must satisfy the strict inequality
constexpr double kStrictZone = 1e-6;
constexpr long kSampleGuard = 1000000;

ordered_json vec_json(const Vec& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

//----------------------------------------------------------------------------
// trial plumbing
//----------------------------------------------------------------------------

struct TrialOutcome {
  double margin = std::numeric_limits<double>::infinity();
  bool violation = false;
  bool equality = false;
  ordered_json witness;
};

LemmaReport aggregate(std::string id, long trials, uint64_t seed,
                      const std::function<TrialOutcome(long, Rng&)>& trial_fn) {
  if (trials < 1)
    throw ArgumentError("trials must be positive, got " +
                        std::to_string(trials));
  auto results = map_trials<TrialOutcome>(trials, [&](long t) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(t)));
    return trial_fn(t, rng);
  });
  LemmaReport report;
  report.id = std::move(id);
  report.trials = trials;
  for (const auto& r : results) {
    report.worst_margin = std::min(report.worst_margin, r.margin);
    if (r.violation) {
      ++report.violations;
      if (!report.witness) report.witness = r.witness;
    }
    if (r.equality) ++report.equality_cases;
  }
  return report;
}

Vec sample_where(Rng& rng, const Ball& bound,
                 const std::function<bool(const Vec&)>& accept,
                 const char* what) {
  for (long attempt = 0; attempt < kSampleGuard; ++attempt) {
    Vec p = uniform_in_ball(rng, bound.center, bound.radius);
    if (accept(p)) return p;
  }
  throw DomainError(std::string("sampling stalled: ") + what);
}

Vec sample_sphere_where(Rng& rng, int ambient, double r,
                        const std::function<bool(const Vec&)>& accept,
                        const char* what) {
  for (long attempt = 0; attempt < kSampleGuard; ++attempt) {
    Vec p = uniform_on_sphere(rng, ambient, r);
    if (accept(p)) return p;
  }
  throw DomainError(std::string("sampling stalled: ") + what);
}

// unit vector orthogonal to an orthonormal set
Vec random_unit_orthogonal(Rng& rng, const std::vector<Vec>& basis, int dim) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec g = gaussian_vec(rng, dim);
    for (const Vec& b : basis) g -= g.dot(b) * b;
    const double norm = g.norm();
    if (norm > 1e-9) return g / norm;
  }
  throw DegeneracyError("could not draw a direction orthogonal to the basis");
}

// barycentric coordinates over m+1 affinely independent vertices whose
// affine hull is the span of the first m coordinates; evaluating a point of
// higher ambient dimension uses its first-m-coordinate projection
class HullChart {
 public:
  HullChart(std::vector<Vec> verts, int m) : verts_(std::move(verts)), m_(m) {
    Mat mat(m, m);
    for (int i = 0; i < m; ++i)
      mat.col(i) = (verts_[static_cast<size_t>(i)] -
                    verts_[static_cast<size_t>(m)])
                       .head(m);
    lu_.compute(mat);
  }

  Vec barycentric(const Vec& p) const {
    Vec rhs = (p - verts_[static_cast<size_t>(m_)]).head(m_);
    Vec mu = lu_.solve(rhs);
    Vec lambda(m_ + 1);
    lambda.head(m_) = mu;
    lambda[m_] = 1.0 - mu.sum();
    return lambda;
  }

  double min_coordinate(const Vec& p) const {
    return barycentric(p).minCoeff();
  }

 private:
  std::vector<Vec> verts_;
  int m_;
  Eigen::FullPivLU<Mat> lu_;
};

double apex_height(int d) { return std::sqrt((d + 1) / (2.0 * d)); }

}  // namespace

nlohmann::ordered_json lemma_report_to_json(const LemmaReport& report) {
  ordered_json j;
  j["id"] = report.id;
  j["trials"] = report.trials;
  j["violations"] = report.violations;
  j["equality_cases"] = report.equality_cases;
  j["worst_margin"] = report.worst_margin;
  if (report.witness) j["witness"] = *report.witness;
  return j;
}

//============================================================================
// half-body diameter bound
//============================================================================

LemmaReport verify_half_body_diameter(int d, long trials, uint64_t seed) {
  if (d < 3)
    throw ArgumentError("half-body-diameter needs d >= 3, got " +
                        std::to_string(d));
  const Tolerance tol{};

  // base-aligned construction: unit d-simplex in {x_d = 0} plus the apex on
  // the positive axis, all pairwise distances 1
  PointConfig base = regular_unit_simplex(d, d);
  Vec apex = Vec::Zero(d);
  apex[d - 1] = apex_height(d);
  PointConfig vertices = base;
  vertices.points.push_back(apex);
  const ReuleauxBody body = ReuleauxBody::simplex(vertices, tol);
  const Ball bound = circumscribed_ball(vertices, tol);
  const HullChart chart(base.points, d - 1);

  auto in_upper_body = [&](const Vec& p) {
    return p[d - 1] >= 0.0 && body.margin(p) >= 0.0;
  };

  auto trial_fn = [&](long, Rng& rng) {
    const Vec v = sample_where(
        rng, bound,
        [&](const Vec& p) {
          return in_upper_body(p) && chart.min_coordinate(p) >= 0.0;
        },
        "upper body point projecting into the base hull");
    const Vec w = sample_where(rng, bound, in_upper_body, "upper body point");

    const double margin = 1.0 - dist(v, w);
    double vertex_gap = std::numeric_limits<double>::infinity();
    for (const Vec& u : base.points)
      vertex_gap = std::min({vertex_gap, dist(v, u), dist(w, u)});
    const bool strict_zone =
        chart.min_coordinate(v) > kStrictZone && vertex_gap > kStrictZone;

    TrialOutcome out;
    out.margin = margin;
    out.violation =
        margin < -tol.eq_tol || (strict_zone && margin <= 0.0);
    // near-equality in an admissible configuration: measure-zero for random
    // pairs, classified but never counted as a violation
    out.equality = !out.violation && margin <= tol.eq_tol;
    if (out.violation) {
      out.witness = ordered_json{{"v", vec_json(v)},
                                 {"w", vec_json(w)},
                                 {"dist", dist(v, w)},
                                 {"margin", margin}};
    }
    return out;
  };
  return aggregate("half-body-diameter", trials, seed, trial_fn);
}

//============================================================================
// farthest-vertex bound
//============================================================================

LemmaReport verify_vertex_farthest(int d, long trials, uint64_t seed) {
  if (d < 3)
    throw ArgumentError("vertex-farthest needs d >= 3, got " +
                        std::to_string(d));
  const Tolerance tol{};

  // body over d unit-simplex vertices in R^{d-1}
  const PointConfig verts = regular_unit_simplex(d - 1, d);
  const ReuleauxBody body = ReuleauxBody::simplex(verts, tol);
  const Ball bound = circumscribed_ball(verts, tol);

  auto trial_fn = [&](long, Rng& rng) {
    const std::vector<double> lambda = uniform_barycentric(rng, d);
    Vec hull_point = Vec::Zero(d - 1);
    double lambda_min = 1.0;
    for (int i = 0; i < d; ++i) {
      hull_point += lambda[static_cast<size_t>(i)] *
                    verts.points[static_cast<size_t>(i)];
      lambda_min = std::min(lambda_min, lambda[static_cast<size_t>(i)]);
    }
    const Vec w = sample_where(
        rng, bound, [&](const Vec& p) { return body.margin(p) >= 0.0; },
        "body point");

    double farthest_vertex = 0.0;
    for (const Vec& u : verts.points)
      farthest_vertex = std::max(farthest_vertex, dist(u, hull_point));
    const double margin = farthest_vertex - dist(w, hull_point);

    TrialOutcome out;
    out.margin = margin;
    out.violation =
        margin < -tol.eq_tol || (lambda_min > kStrictZone && margin <= 0.0);
    out.equality = !out.violation && margin <= tol.eq_tol;
    if (out.violation) {
      out.witness = ordered_json{{"hull_point", vec_json(hull_point)},
                                 {"w", vec_json(w)},
                                 {"margin", margin}};
    }
    return out;
  };
  return aggregate("vertex-farthest", trials, seed, trial_fn);
}

//============================================================================
// farthest-boundary-point bound
//============================================================================

namespace {

TrialOutcome boundary_farthest_euclidean(long t, Rng& rng) {
  const Tolerance tol{};
  const int d = 2 + static_cast<int>(t % 3);
  const Vec center = gaussian_vec(rng, d);
  const Vec n = uniform_on_sphere(rng, d, 1.0);
  const double cap_radius = uniform_real(rng, 0.3, 2.0);
  // cap height above the hyperplane: 0 puts the rim exactly on it
  const double alpha = t % 5 == 0 ? 0.0 : uniform_real(rng, 0.05, 0.9);

  Vec offset = gaussian_vec(rng, d, 1.5);
  const double side = offset.dot(n);
  if (side < 0) offset -= 2.0 * side * n;
  const Vec x = center + offset;

  const double beta = uniform_real(rng, alpha + 1e-3, 0.999);
  const Vec tangent = random_unit_orthogonal(rng, {n}, d);
  const Vec y = center + cap_radius * (beta * n +
                                       std::sqrt(1.0 - beta * beta) * tangent);

  // farthest rim point: the rim is an affine circle, so the distance to x is
  // maximized against the tangential component of x - rim_center
  Vec rel = x - center - cap_radius * alpha * n;
  Vec rel_perp = rel - rel.dot(n) * n;
  const Vec tstar =
      rel_perp.norm() > 1e-12 ? Vec(-rel_perp.normalized()) : tangent;
  const Vec y_boundary =
      center +
      cap_radius * (alpha * n + std::sqrt(1.0 - alpha * alpha) * tstar);

  const double margin = dist(x, y_boundary) - dist(x, y);
  const bool strict = dist(x, center) > kStrictZone;

  TrialOutcome out;
  out.margin = margin;
  out.violation = margin < -1e-12 || (strict && margin <= 0.0);
  out.equality = !out.violation && std::abs(margin) <= tol.eq_tol;
  if (out.violation) {
    out.witness = ordered_json{{"center", vec_json(center)},
                               {"normal", vec_json(n)},
                               {"cap_radius", cap_radius},
                               {"alpha", alpha},
                               {"x", vec_json(x)},
                               {"y", vec_json(y)},
                               {"y_boundary", vec_json(y_boundary)},
                               {"margin", margin}};
  }
  return out;
}

TrialOutcome boundary_farthest_spherical(long t, Rng& rng) {
  const Tolerance tol{};
  const int d = 2 + static_cast<int>(t % 2);
  const double r = uniform_real(rng, 0.75, 1.5);
  const SphericalFrame frame = SphericalFrame::create(d, r);
  const int ambient = d + 1;

  const Vec c_hat = uniform_on_sphere(rng, ambient, 1.0);
  const Vec n_hat = random_unit_orthogonal(rng, {c_hat}, ambient);
  const double theta0 = uniform_real(rng, 0.2, 1.3);
  const double alpha = t % 5 == 0 ? 0.0 : uniform_real(rng, 0.05, 0.9);

  Vec x = uniform_on_sphere(rng, ambient, r);
  if (x.dot(n_hat) < 0) x -= 2.0 * x.dot(n_hat) * n_hat;

  const double beta = uniform_real(rng, alpha + 1e-3, 0.999);
  const Vec s_dir = random_unit_orthogonal(rng, {c_hat, n_hat}, ambient);
  const Vec y =
      r * (std::cos(theta0) * c_hat +
           std::sin(theta0) * (beta * n_hat +
                               std::sqrt(1.0 - beta * beta) * s_dir));

  // geodesic distance grows with the chord, so the farthest rim point
  // minimizes x . y(s): take s against the residual component of x
  Vec x_perp = x - x.dot(c_hat) * c_hat - x.dot(n_hat) * n_hat;
  const Vec sstar =
      x_perp.norm() > 1e-12 ? Vec(-x_perp.normalized()) : s_dir;
  const Vec y_boundary =
      r * (std::cos(theta0) * c_hat +
           std::sin(theta0) * (alpha * n_hat +
                               std::sqrt(1.0 - alpha * alpha) * sstar));

  const double margin = rho(frame, x, y_boundary) - rho(frame, x, y);
  const Vec region_center = r * c_hat;
  // the strict form degenerates at the antipode of the region center, where
  // the whole carrier subsphere is geodesically equidistant from x
  const bool strict = rho(frame, x, region_center) > kStrictZone &&
                      rho(frame, x, Vec(-region_center)) > kStrictZone;

  TrialOutcome out;
  out.margin = margin;
  out.violation = margin < -1e-12 || (strict && margin <= 0.0);
  out.equality = !out.violation && std::abs(margin) <= tol.eq_tol;
  if (out.violation) {
    out.witness = ordered_json{{"frame_radius", r},
                               {"center_axis", vec_json(c_hat)},
                               {"normal_axis", vec_json(n_hat)},
                               {"theta0", theta0},
                               {"alpha", alpha},
                               {"x", vec_json(x)},
                               {"y", vec_json(y)},
                               {"y_boundary", vec_json(y_boundary)},
                               {"margin", margin}};
  }
  return out;
}

}  // namespace

LemmaReport verify_boundary_farthest(bool euclidean, long trials,
                                     uint64_t seed) {
  auto trial_fn = [&](long t, Rng& rng) {
    return euclidean ? boundary_farthest_euclidean(t, rng)
                     : boundary_farthest_spherical(t, rng);
  };
  return aggregate(
      euclidean ? "boundary-farthest" : "boundary-farthest-spherical", trials,
      seed, trial_fn);
}

//============================================================================
// cut radius
//============================================================================

SphereCut sphere_cut_closed_form(double r, int k) {
  if (k < 2)
    throw ArgumentError("cut-radius needs k >= 2, got " + std::to_string(k));
  if (!(r > kInvSqrt2))
    throw DomainError(
        "frame sphere radius must exceed 1/sqrt(2) for a proper cut, got " +
        std::to_string(r));
  SphereCut cut;
  cut.axis_offset = std::sqrt(r * r - (k - 1) / (2.0 * k));
  cut.cut_offset = 1.0 / (2.0 * k * cut.axis_offset);
  const double rad2 = (k + 1) / (2.0 * k) - cut.cut_offset * cut.cut_offset;
  // rad2 > 1/2 is algebraically equivalent to r > 1/sqrt(2)
  if (!(rad2 > 0))
    throw DomainError("degenerate cut radius for r = " + std::to_string(r));
  cut.radius = std::sqrt(rad2);
  return cut;
}

LemmaReport verify_sphere_cut(double r, int k, int d, long trials,
                              uint64_t seed) {
  const SphereCut closed = sphere_cut_closed_form(r, k);
  if (d < 2 || k > d)
    throw ArgumentError("cut-radius geometric check needs 2 <= k <= d, got k=" +
                        std::to_string(k) + " d=" + std::to_string(d));
  const SphericalFrame frame = SphericalFrame::create(d, r);
  const int ambient = d + 1;
  const double target = r * r - 0.5;

  auto trial_fn = [&](long, Rng& rng) {
    const Mat q = random_orthogonal(rng, ambient);
    const std::vector<SpherePoint> verts =
        unit_simplex_on_sphere(frame, k, q.leftCols(k));

    Mat v(k, ambient);
    for (int i = 0; i < k; ++i) v.row(i) = verts[static_cast<size_t>(i)];
    const Vec rhs = Vec::Constant(k, target);
    // the cut lives in the flat {y : y . v_i = r^2 - 1/2}; its closest point
    // to the sphere center is the minimum-norm solution
    const Vec w = v.completeOrthogonalDecomposition().solve(rhs);

    const double measured_axis = centroid(verts).norm();
    const double flat_offset = w.norm();
    const double measured_cut = measured_axis - flat_offset;
    const double measured_radius =
        std::sqrt(std::max(0.0, r * r - flat_offset * flat_offset));

    double mismatch =
        std::max({std::abs(measured_axis - closed.axis_offset),
                  std::abs(measured_cut - closed.cut_offset),
                  std::abs(measured_radius - closed.radius)});

    // points of the recovered subsphere must sit on the frame sphere at unit
    // distance from every simplex vertex
    Eigen::JacobiSVD<Mat> svd(v, Eigen::ComputeFullV);
    const Mat nullspace = svd.matrixV().rightCols(ambient - k);
    double point_error = 0.0;
    for (int s = 0; s < 8; ++s) {
      const Vec u = uniform_on_sphere(rng, ambient - k, 1.0);
      const Vec y = w + closed.radius * (nullspace * u);
      point_error = std::max(point_error, std::abs(y.norm() - r));
      for (const Vec& vert : verts)
        point_error = std::max(point_error, std::abs(dist(y, vert) - 1.0));
    }

    TrialOutcome out;
    out.margin = measured_radius - kInvSqrt2;
    out.violation = std::max(mismatch, point_error) > 1e-9;
    if (out.violation) {
      out.witness = ordered_json{
          {"mismatch", mismatch},
          {"point_error", point_error},
          {"measured",
           ordered_json{{"axis_offset", measured_axis},
                        {"cut_offset", measured_cut},
                        {"radius", measured_radius}}},
          {"closed_form",
           ordered_json{{"axis_offset", closed.axis_offset},
                        {"cut_offset", closed.cut_offset},
                        {"radius", closed.radius}}}};
    }
    return out;
  };
  return aggregate("cut-radius", trials, seed, trial_fn);
}

//============================================================================
// rotation procedure
//============================================================================

RotationOutcome rotation_procedure(const PointConfig& clique,
                                   const std::vector<Vec>& witnesses,
                                   uint64_t seed) {
  const Tolerance tol{};
  clique.validate(tol);
  if (clique.space.is_sphere())
    throw DomainError("rotation runs in Euclidean space");
  const int d = clique.space.dim;
  if (d < 3)
    throw ArgumentError("rotation needs dimension >= 3, got " +
                        std::to_string(d));
  if (clique.n() != d)
    throw ArgumentError("rotation needs exactly d = " + std::to_string(d) +
                        " clique vertices, got " + std::to_string(clique.n()));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(dist(clique.points[static_cast<size_t>(i)],
                        clique.points[static_cast<size_t>(j)]) -
                   1.0) > tol.eq_tol)
        throw DomainError("rotation needs a unit regular simplex; side (" +
                          std::to_string(i) + "," + std::to_string(j) +
                          ") is off");
  if (witnesses.size() != static_cast<size_t>(d))
    throw ArgumentError("expected " + std::to_string(d) +
                        " witness points, got " +
                        std::to_string(witnesses.size()));
  for (const Vec& w : witnesses)
    if (w.size() != d)
      throw DimensionError("witness dimension mismatch");

  Hyperplane base = Hyperplane::through(clique.points);
  const double top_side = base.signed_dist(witnesses[0]);
  if (std::abs(top_side) <= tol.eq_tol)
    throw DomainError("witness 0 must sit strictly off the clique hyperplane");
  if (top_side < 0) {
    base.normal = -base.normal;
    base.offset = -base.offset;
  }
  for (int i = 1; i < d; ++i)
    if (base.signed_dist(witnesses[static_cast<size_t>(i)]) >= -tol.eq_tol)
      throw DomainError("witness " + std::to_string(i) +
                        " must lie strictly below the clique hyperplane");

  const ReuleauxBody hull_body = ReuleauxBody::rugby_ball(clique, tol);
  if (hull_body.margin(witnesses[0]) < -tol.geom_tol)
    throw DomainError(
        "witness 0 must lie in the unit-ball intersection body over the "
        "clique");
  const Ball circ = circumscribed_ball(clique, tol);
  if (dist(witnesses[0], circ.center) < circ.radius - tol.eq_tol)
    throw DomainError(
        "witness 0 must not lie inside the circumscribed ball of the clique");
  if (dist(clique.points[0], witnesses[0]) >= 1.0 - tol.eq_tol)
    throw DomainError(
        "vertex 0 must start strictly closer than 1 to witness 0");

  // chart of the rotation circle: vertex 0 moves in the plane spanned by its
  // radial direction and the downward base normal, around the centroid of
  // the fixed vertices
  std::vector<Vec> fixed(clique.points.begin() + 1, clique.points.end());
  const Vec pivot = centroid(fixed);
  const Vec radial = clique.points[0] - pivot;
  const double radius = radial.norm();
  const Vec e1 = radial / radius;
  const Vec e2 = -base.normal;
  if (std::abs(e1.dot(e2)) > 1e-9)
    throw DegeneracyError("rotation chart is skewed");

  auto moved = [&](double t) -> Vec {
    return pivot + radius * (std::cos(t) * e1 + std::sin(t) * e2);
  };
  auto dist_slack = [&](double t) {
    return dist(moved(t), witnesses[0]) - 1.0;
  };
  // signed height of witness i against the moved hyperplane, with the normal
  // oriented continuously from the starting base normal
  std::vector<double> in_plane(static_cast<size_t>(d), 0.0);
  std::vector<double> height(static_cast<size_t>(d), 0.0);
  for (int i = 1; i < d; ++i) {
    const Vec rel = witnesses[static_cast<size_t>(i)] - pivot;
    in_plane[static_cast<size_t>(i)] = e1.dot(rel);
    height[static_cast<size_t>(i)] = base.normal.dot(rel);
  }
  auto plane_height = [&](int i, double t) {
    return std::sin(t) * in_plane[static_cast<size_t>(i)] +
           std::cos(t) * height[static_cast<size_t>(i)];
  };

  auto bisect = [](const std::function<double(double)>& fn, double lo,
                   double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (fn(mid) < 0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // bracket the first root of any event function on a pi/180 grid; all event
  // functions start negative
  const double step = kPi / 180.0;
  double best_angle = std::numeric_limits<double>::infinity();
  int best_fn = -1;  // 0: distance event, i >= 1: witness i plane event
  std::vector<double> prev(static_cast<size_t>(d), 0.0);
  prev[0] = dist_slack(0.0);
  for (int i = 1; i < d; ++i) prev[static_cast<size_t>(i)] = plane_height(i, 0.0);
  for (int j = 1; j <= 90 && best_fn < 0; ++j) {
    const double t_lo = (j - 1) * step;
    const double t_hi = j * step;
    for (int fn_idx = 0; fn_idx < d; ++fn_idx) {
      const double cur = fn_idx == 0 ? dist_slack(t_hi)
                                     : plane_height(fn_idx, t_hi);
      if (prev[static_cast<size_t>(fn_idx)] < 0 && cur >= 0) {
        std::function<double(double)> fn =
            fn_idx == 0
                ? std::function<double(double)>(dist_slack)
                : std::function<double(double)>(
                      [&, fn_idx](double t) { return plane_height(fn_idx, t); });
        const double root = bisect(fn, t_lo, t_hi);
        if (root < best_angle) {
          best_angle = root;
          best_fn = fn_idx;
        }
      }
      prev[static_cast<size_t>(fn_idx)] = cur;
    }
  }
  if (best_fn < 0) {
    std::ostringstream msg;
    msg << "no stopping event before a quarter turn: distance slack "
        << dist_slack(kPi / 2) << ", plane heights";
    for (int i = 1; i < d; ++i) msg << ' ' << plane_height(i, kPi / 2);
    throw DomainError(msg.str());
  }

  RotationOutcome out;
  out.event = best_fn == 0 ? RotationEvent::UnitDistance
                           : RotationEvent::HyperplaneHit;
  out.angle = best_angle;
  out.moved_vertex = moved(best_angle);
  out.plane_hit_index = best_fn == 0 ? -1 : best_fn;
  out.event_residual = std::abs(best_fn == 0 ? dist_slack(best_angle)
                                             : plane_height(best_fn, best_angle));

  // invariant log: before the stop, witness 0 stays inside the moved body
  // and outside the moved circumscribed ball, and the lower witnesses stay
  // strictly below the moved hyperplane
  Rng rng(seed);
  const long samples = 100;
  for (long s = 0; s < samples; ++s) {
    const double t = uniform_real(rng, 0.0, out.angle);
    const Vec vt = moved(t);
    double farthest = dist(witnesses[0], vt);
    Vec center_sum = vt;
    for (const Vec& f : fixed) {
      farthest = std::max(farthest, dist(witnesses[0], f));
      center_sum += f;
    }
    const double containment = 1.0 - farthest;
    const Vec moved_center = center_sum / d;
    const double exclusion =
        dist(witnesses[0], moved_center) - circ.radius;
    double top_height = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < d; ++i)
      top_height = std::max(top_height, plane_height(i, t));
    const double plane = -top_height;

    out.containment_margin = std::min(out.containment_margin, containment);
    out.exclusion_margin = std::min(out.exclusion_margin, exclusion);
    out.plane_margin = std::min(out.plane_margin, plane);
    if (containment < -tol.eq_tol) ++out.invariant_violations;
    if (exclusion < -tol.eq_tol) ++out.invariant_violations;
    if (plane < -tol.eq_tol) ++out.invariant_violations;
  }
  out.invariant_samples = samples;
  return out;
}

RotationInstance make_rotation_instance(int d, uint64_t seed,
                                        RotationEvent bias) {
  if (d < 3)
    throw ArgumentError("rotation instances need d >= 3, got " +
                        std::to_string(d));
  Rng rng(mix_seed(seed, bias == RotationEvent::UnitDistance ? 1 : 2));

  RotationInstance inst;
  inst.clique = regular_unit_simplex(d, d);
  const std::vector<Vec>& pts = inst.clique.points;
  const Vec& v1 = pts[0];
  std::vector<Vec> fixed(pts.begin() + 1, pts.end());
  const Vec pivot = centroid(fixed);
  const Vec e1 = (v1 - pivot).normalized();
  Vec n = Vec::Zero(d);
  n[d - 1] = 1.0;
  const Ball circ = circumscribed_ball(inst.clique);
  const ReuleauxBody hull_body = ReuleauxBody::rugby_ball(inst.clique);
  Vec apex = Vec::Zero(d);
  apex[d - 1] = apex_height(d);

  // top witness: slide from the apex toward vertex 0 (distance to vertex 0
  // is exactly 1 - slide on the skeleton), then jitter within windows that
  // keep the designed event first
  const double slide_lo = bias == RotationEvent::UnitDistance ? 0.04 : 0.14;
  const double slide_hi = bias == RotationEvent::UnitDistance ? 0.08 : 0.18;
  const double dist_lo = 1.0 - slide_hi - 0.015;
  const double dist_hi = 1.0 - slide_lo - 0.005;
  const double slide = uniform_real(rng, slide_lo + 0.01, slide_hi - 0.01);
  const Vec skeleton_top = (1.0 - slide) * apex + slide * v1;
  Vec top = skeleton_top;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Vec candidate = skeleton_top + gaussian_vec(rng, d, 0.01);
    const double vertex_gap = dist(candidate, v1);
    if (candidate[d - 1] >= 0.02 && hull_body.margin(candidate) >= 1e-4 &&
        dist(candidate, circ.center) >= circ.radius + 1e-3 &&
        vertex_gap >= dist_lo && vertex_gap <= dist_hi) {
      top = candidate;
      break;
    }
  }

  inst.witnesses.assign(static_cast<size_t>(d), Vec());
  inst.witnesses[0] = top;
  for (int i = 1; i < d; ++i) {
    if (i == 1 && bias == RotationEvent::HyperplaneHit) {
      // just below the base plane, offset toward vertex 0 so the moved
      // hyperplane reaches it at a small angle
      for (int attempt = 0; attempt < 200; ++attempt) {
        Vec candidate = pivot + 0.3 * (v1 - pivot);
        candidate[d - 1] = -uniform_real(rng, 0.006, 0.014);
        candidate += gaussian_vec(rng, d, 0.004);
        const double in_plane = e1.dot(candidate - pivot);
        const double height = candidate[d - 1];
        if (in_plane >= 0.15 && height <= -0.005 && height >= -0.016) {
          inst.witnesses[1] = candidate;
          break;
        }
      }
      if (inst.witnesses[1].size() == 0) {
        Vec candidate = pivot + 0.3 * (v1 - pivot);
        candidate[d - 1] = -0.01;
        inst.witnesses[1] = candidate;
      }
      continue;
    }
    // deep below the plane with the in-plane component pushed away from
    // vertex 0, so the moved hyperplane never reaches these witnesses
    Vec base_point = pts[static_cast<size_t>(i)] - 0.3 * n - 0.05 * e1;
    Vec candidate = base_point;
    for (int attempt = 0; attempt < 200; ++attempt) {
      Vec jittered = base_point + gaussian_vec(rng, d, 0.005);
      if (e1.dot(jittered - pivot) <= -0.01 && jittered[d - 1] <= -0.2) {
        candidate = jittered;
        break;
      }
    }
    inst.witnesses[static_cast<size_t>(i)] = candidate;
  }
  return inst;
}

LemmaReport verify_rotation(int d, long trials, uint64_t seed) {
  if (d < 3)
    throw ArgumentError("rotation needs d >= 3, got " + std::to_string(d));
  auto trial_fn = [&](long t, Rng&) {
    const RotationEvent bias = t % 2 == 0 ? RotationEvent::UnitDistance
                                          : RotationEvent::HyperplaneHit;
    const RotationInstance inst =
        make_rotation_instance(d, mix_seed(seed, static_cast<uint64_t>(t)),
                               bias);
    TrialOutcome out;
    try {
      const RotationOutcome result = rotation_procedure(
          inst.clique, inst.witnesses,
          mix_seed(seed, static_cast<uint64_t>(t) + 0x9e3779b9u));
      std::string failure;
      if (result.event != bias) failure = "unexpected stopping event";
      if (failure.empty() && !(result.angle > 0 && result.angle < kPi / 2))
        failure = "stop angle out of range";
      if (failure.empty() && result.event_residual > 1e-9)
        failure = "event residual too large";
      if (failure.empty() && result.invariant_violations > 0)
        failure = "invariant log violated";
      if (failure.empty() &&
          result.event == RotationEvent::HyperplaneHit &&
          result.plane_hit_index < 1)
        failure = "missing plane hit index";
      out.margin = result.exclusion_margin;
      out.violation = !failure.empty();
      if (out.violation) {
        out.witness = ordered_json{
            {"failure", failure},
            {"clique", config_to_json(inst.clique)},
            {"angle", result.angle},
            {"event",
             result.event == RotationEvent::UnitDistance ? "unit-distance"
                                                         : "hyperplane-hit"},
            {"invariant_violations", result.invariant_violations}};
      }
    } catch (const Error& e) {
      out.margin = 0.0;
      out.violation = true;
      out.witness = ordered_json{{"failure", std::string("exception: ") +
                                                 e.what()},
                                 {"clique", config_to_json(inst.clique)}};
    }
    return out;
  };
  return aggregate("rotation", trials, seed, trial_fn);
}

//============================================================================
// observations
//============================================================================

NestedBallInstance make_nested_instance(Ball outer, Ball inner,
                                        const Tolerance& tol) {
  tol.validate();
  if (outer.center.size() != inner.center.size())
    throw DimensionError("nested-ball centers have mismatched dimensions");
  if (!(outer.radius > 0) || !(inner.radius > 0))
    throw ArgumentError("nested-ball radii must be positive");
  if (!(outer.radius > inner.radius + tol.eq_tol))
    throw ArgumentError(
        "outer radius must strictly exceed inner radius, got " +
        std::to_string(outer.radius) + " vs " + std::to_string(inner.radius));
  const double gap = dist(outer.center, inner.center);
  if (gap <= tol.eq_tol)
    throw DomainError("concentric balls have no cutting hyperplane");
  if (gap >= outer.radius + inner.radius - tol.eq_tol ||
      gap <= outer.radius - inner.radius + tol.eq_tol)
    throw DomainError(
        "boundary spheres must properly intersect; center gap " +
        std::to_string(gap));

  // the hyperplane through the sphere-sphere intersection is the radical
  // hyperplane; measured from the outer center along the axis it sits at
  // (gap^2 + R^2 - r^2) / (2 gap)
  const Vec axis = (inner.center - outer.center) / gap;
  const double along = (gap * gap + outer.radius * outer.radius -
                        inner.radius * inner.radius) /
                       (2.0 * gap);
  Hyperplane sigma{axis, axis.dot(outer.center) + along};
  if (sigma.signed_dist(inner.center) >= -tol.eq_tol)
    throw DomainError(
        "cutting hyperplane separates the centers; the nesting direction is "
        "undefined");
  // orient the plus side toward the centers
  sigma.normal = -sigma.normal;
  sigma.offset = -sigma.offset;
  return NestedBallInstance{std::move(outer), std::move(inner), sigma};
}

namespace {

LemmaReport check_nested_balls(long trials, uint64_t seed) {
  const Tolerance tol{};
  auto trial_fn = [&](long t, Rng& rng) {
    const int d = 2 + static_cast<int>(t % 3);
    NestedBallInstance inst{Ball{}, Ball{}, Hyperplane{}};
    for (int attempt = 0;; ++attempt) {
      // keep the radii comparable and the gap near its upper end: the slab
      // of the outer ball beyond the cut thins out like r_in^2 / r_out as
      // the radii separate, which would starve the rejection sampler below
      const double r_out = uniform_real(rng, 0.6, 1.6);
      const double r_in = r_out * uniform_real(rng, 0.45, 0.8);
      const Vec o = gaussian_vec(rng, d);
      const Vec dir = uniform_on_sphere(rng, d, 1.0);
      const double lo = r_out - r_in;
      const double hi = std::sqrt(r_out * r_out - r_in * r_in);
      const double gap =
          uniform_real(rng, lo + 0.4 * (hi - lo), lo + 0.9 * (hi - lo));
      try {
        inst = make_nested_instance(Ball{o, r_out}, Ball{o + gap * dir, r_in},
                                    tol);
        break;
      } catch (const Error&) {
        if (attempt > 200)
          throw DomainError("nested-ball instance generation stalled");
      }
    }

    // plus side of the cut: the outer ball contains the inner one
    const Vec z_plus = sample_where(
        rng, inst.inner,
        [&](const Vec& p) { return inst.sigma.signed_dist(p) >= 0.0; },
        "inner-ball point on the plus side");
    const double margin_plus =
        inst.outer.radius - dist(z_plus, inst.outer.center);
    const bool strict_plus =
        inst.inner.radius - dist(z_plus, inst.inner.center) > kStrictZone &&
        inst.sigma.signed_dist(z_plus) > kStrictZone;

    // minus side: the containment reverses
    const Vec z_minus = sample_where(
        rng, inst.outer,
        [&](const Vec& p) { return inst.sigma.signed_dist(p) <= 0.0; },
        "outer-ball point on the minus side");
    const double margin_minus =
        inst.inner.radius - dist(z_minus, inst.inner.center);
    const bool strict_minus =
        inst.outer.radius - dist(z_minus, inst.outer.center) > kStrictZone &&
        inst.sigma.signed_dist(z_minus) < -kStrictZone;

    TrialOutcome out;
    out.margin = std::min(margin_plus, margin_minus);
    out.violation = margin_plus < -tol.eq_tol || margin_minus < -tol.eq_tol ||
                    (strict_plus && margin_plus <= 0.0) ||
                    (strict_minus && margin_minus <= 0.0);
    if (out.violation) {
      out.witness = ordered_json{{"outer_center", vec_json(inst.outer.center)},
                                 {"outer_radius", inst.outer.radius},
                                 {"inner_center", vec_json(inst.inner.center)},
                                 {"inner_radius", inst.inner.radius},
                                 {"z_plus", vec_json(z_plus)},
                                 {"z_minus", vec_json(z_minus)},
                                 {"margin_plus", margin_plus},
                                 {"margin_minus", margin_minus}};
    }
    return out;
  };
  return aggregate("nested-balls", trials, seed, trial_fn);
}

struct ProjectionSetup {
  ReuleauxBody body;
  Ball bound;
  double circ_radius;
  HullChart chart;
};

LemmaReport check_projection_inside_base(long trials, uint64_t seed) {
  const Tolerance tol{};
  std::vector<ProjectionSetup> setups;
  for (int d : {3, 4}) {
    PointConfig base = regular_unit_simplex(d, d);
    ReuleauxBody body = ReuleauxBody::rugby_ball(base, tol);
    Ball bound{Vec::Zero(d), apex_height(d)};
    const double circ_radius = circumscribed_ball(base, tol).radius;
    setups.push_back(ProjectionSetup{std::move(body), std::move(bound),
                                     circ_radius,
                                     HullChart(base.points, d - 1)});
  }

  auto trial_fn = [&](long t, Rng& rng) {
    const ProjectionSetup& setup = setups[static_cast<size_t>(t % 2)];
    const Vec p = sample_where(
        rng, setup.bound,
        [&](const Vec& q) {
          return setup.body.margin(q) >= 0.0 &&
                 q.norm() >= setup.circ_radius;
        },
        "body point outside the open circumscribed ball");
    const double lambda_min = setup.chart.min_coordinate(p);
    const bool strictly_outside = p.norm() > setup.circ_radius + kStrictZone;

    TrialOutcome out;
    out.margin = lambda_min;
    out.violation =
        lambda_min < -tol.eq_tol || (strictly_outside && lambda_min <= 0.0);
    if (out.violation) {
      out.witness = ordered_json{{"p", vec_json(p)},
                                 {"lambda_min", lambda_min},
                                 {"norm", p.norm()},
                                 {"circ_radius", setup.circ_radius}};
    }
    return out;
  };
  return aggregate("projection-inside-base", trials, seed, trial_fn);
}

LemmaReport check_bisector_halfspace(long trials, uint64_t seed) {
  const Tolerance tol{};
  auto trial_fn = [&](long t, Rng& rng) {
    const int d = 2 + static_cast<int>(t % 3);
    Vec x = gaussian_vec(rng, d);
    Vec y = gaussian_vec(rng, d);
    while (dist(x, y) < 1e-6) y = gaussian_vec(rng, d);
    const Vec mid = 0.5 * (x + y);
    const Vec axis = (x - y).normalized();
    Vec z = mid + gaussian_vec(rng, d, 1.5);
    const double side = (z - mid).dot(axis);
    if (side < 0) z -= 2.0 * side * axis;

    const double margin = dist(z, y) - dist(z, x);
    TrialOutcome out;
    out.margin = margin;
    out.violation = margin < -tol.eq_tol;
    if (out.violation) {
      out.witness = ordered_json{{"x", vec_json(x)},
                                 {"y", vec_json(y)},
                                 {"z", vec_json(z)},
                                 {"margin", margin}};
    }
    return out;
  };
  return aggregate("bisector-halfspace", trials, seed, trial_fn);
}

struct NestingSetup {
  PointConfig clique;
  ReuleauxBody body;
  Vec pivot;
  Vec e1;
  double radius;
  double circ_radius;
  double bound_radius;
};

LemmaReport check_rotation_nesting(long trials, uint64_t seed) {
  const Tolerance tol{};
  std::vector<NestingSetup> setups;
  for (int d : {3, 4}) {
    PointConfig clique = regular_unit_simplex(d, d);
    ReuleauxBody body = ReuleauxBody::rugby_ball(clique, tol);
    const double circ_radius = circumscribed_ball(clique, tol).radius;
    std::vector<Vec> fixed(clique.points.begin() + 1, clique.points.end());
    Vec pivot = centroid(fixed);
    Vec radial = clique.points[0] - pivot;
    const double radius = radial.norm();
    setups.push_back(NestingSetup{std::move(clique), std::move(body),
                                  std::move(pivot), radial / radius, radius,
                                  circ_radius, apex_height(d)});
  }

  auto trial_fn = [&](long t, Rng& rng) {
    const NestingSetup& setup = setups[static_cast<size_t>(t % 2)];
    const int d = setup.clique.space.dim;
    Vec down = Vec::Zero(d);
    down[d - 1] = -1.0;
    const double theta = uniform_real(rng, 0.05, kPi / 2 - 0.05);
    const Vec moved_vertex =
        setup.pivot +
        setup.radius * (std::cos(theta) * setup.e1 + std::sin(theta) * down);
    const Vec& old_vertex = setup.clique.points[0];

    // hyperplane of points equidistant from the old and moved vertex,
    // oriented toward the old one; the fixed vertices lie on it
    const Vec g = (old_vertex - moved_vertex).normalized();
    const Hyperplane gamma{g, g.dot(0.5 * (old_vertex + moved_vertex))};
    // the moved clique keeps the centroid formula: only vertex 0 moved
    const Vec moved_center = (moved_vertex - old_vertex) / d;

    // old circumscribed ball contains the moved one on the old vertex's side
    const Vec z = sample_where(
        rng, Ball{moved_center, setup.circ_radius},
        [&](const Vec& p) { return gamma.signed_dist(p) >= 0.0; },
        "moved-ball point on the old side");
    const double margin_ball = setup.circ_radius - z.norm();

    // the moved body contains the old one on the moved vertex's side
    const Vec z2 = sample_where(
        rng, Ball{Vec::Zero(d), setup.bound_radius},
        [&](const Vec& p) {
          return setup.body.margin(p) >= 0.0 && gamma.signed_dist(p) <= 0.0;
        },
        "old-body point on the moved side");
    double farthest = dist(z2, moved_vertex);
    for (size_t i = 1; i < setup.clique.points.size(); ++i)
      farthest = std::max(farthest, dist(z2, setup.clique.points[i]));
    const double margin_body = 1.0 - farthest;

    TrialOutcome out;
    out.margin = std::min(margin_ball, margin_body);
    out.violation = out.margin < -tol.eq_tol;
    if (out.violation) {
      out.witness = ordered_json{{"theta", theta},
                                 {"moved_vertex", vec_json(moved_vertex)},
                                 {"z_ball", vec_json(z)},
                                 {"z_body", vec_json(z2)},
                                 {"margin_ball", margin_ball},
                                 {"margin_body", margin_body}};
    }
    return out;
  };
  return aggregate("rotation-nesting", trials, seed, trial_fn);
}

LemmaReport check_acute_hull(long trials, uint64_t seed) {
  const Tolerance tol{};
  auto trial_fn = [&](long t, Rng& rng) {
    const int d = 2 + static_cast<int>(t % 2);
    const double r = uniform_real(rng, 0.72, 1.5);
    const SphericalFrame frame = SphericalFrame::create(d, r);
    const Mat q = random_orthogonal(rng, d + 1);
    const std::vector<SpherePoint> verts =
        unit_simplex_on_sphere(frame, d + 1, q);
    PointConfig config{Space::sphere(d, r), verts, {}};
    const ReuleauxBody body = ReuleauxBody::simplex(config, tol);

    const std::vector<double> lambda = uniform_barycentric(rng, d + 1);
    Vec hull_dir = Vec::Zero(d + 1);
    for (int i = 0; i <= d; ++i)
      hull_dir += lambda[static_cast<size_t>(i)] *
                  verts[static_cast<size_t>(i)];
    const Vec x = r * hull_dir.normalized();
    const Vec y = sample_sphere_where(
        rng, d + 1, r, [&](const Vec& p) { return body.margin(p) >= 0.0; },
        "spherical body point");

    const double margin = kPi / 2 - rho(frame, x, y);
    TrialOutcome out;
    out.margin = margin;
    out.violation = margin <= 0.0;
    if (out.violation) {
      out.witness = ordered_json{{"frame_radius", r},
                                 {"x", vec_json(x)},
                                 {"y", vec_json(y)},
                                 {"angle", rho(frame, x, y)}};
    }
    return out;
  };
  return aggregate("acute-hull", trials, seed, trial_fn);
}

}  // namespace

std::vector<LemmaReport> observation_reports(long trials, uint64_t seed) {
  std::vector<LemmaReport> reports;
  reports.push_back(check_nested_balls(trials, mix_seed(seed, 101)));
  reports.push_back(check_projection_inside_base(trials, mix_seed(seed, 102)));
  reports.push_back(check_bisector_halfspace(trials, mix_seed(seed, 103)));
  reports.push_back(check_rotation_nesting(trials, mix_seed(seed, 104)));
  reports.push_back(check_acute_hull(trials, mix_seed(seed, 105)));
  return reports;
}

LemmaReport verify_observations(long trials, uint64_t seed) {
  LemmaReport merged;
  merged.id = "observations";
  for (const LemmaReport& part : observation_reports(trials, seed)) {
    merged.trials += part.trials;
    merged.violations += part.violations;
    merged.equality_cases += part.equality_cases;
    merged.worst_margin = std::min(merged.worst_margin, part.worst_margin);
    if (!merged.witness && part.witness)
      merged.witness = ordered_json{{"check", part.id},
                                    {"witness", *part.witness}};
  }
  return merged;
}

}  // namespace schurlab
