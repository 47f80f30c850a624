#include "schurlab/extremal_search.hpp"

#include "schurlab/parallel.hpp"
#include "schurlab/pointset_io.hpp"
#include "schurlab/rand.hpp"
#include "schurlab/reuleaux.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace schurlab {

namespace {

constexpr double kMinSeparation = 1e-6;

double binomial(int n, int k) {
  double value = 1.0;
  for (int i = 1; i <= k; ++i) value *= double(n - k + i) / i;
  return value;
}

std::vector<std::vector<int>> combinations(int n, int l) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<size_t>(l));
  for (int i = 0; i < l; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = l - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - l + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < l; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

//----------------------------------------------------------------------------
// smooth objective
//----------------------------------------------------------------------------

// soft count of size-l cliques: each pair contributes a sigmoid indicator of
// its distance relative to the diameter, multiplied over the pairs of every
// candidate subset. Scale-free, so the walk never rescales coordinates.
struct Surrogate {
  int n = 0;
  int l = 2;
  std::vector<std::vector<int>> subsets;
  double width = 0.01;
  double tau = 0.003;

  Surrogate(int n_, int l_) : n(n_), l(l_), subsets(combinations(n_, l_)) {}

  double eval(const Mat& dist_matrix, double diam) const {
    Mat soft(n, n);
    for (int i = 0; i < n; ++i) {
      soft(i, i) = 1.0;
      for (int j = i + 1; j < n; ++j) {
        const double x = (dist_matrix(i, j) / diam - (1.0 - width)) / tau;
        const double e = 1.0 / (1.0 + std::exp(-x));
        soft(i, j) = e;
        soft(j, i) = e;
      }
    }
    double score = 0.0;
    for (const auto& subset : subsets) {
      double product = 1.0;
      for (size_t a = 0; a + 1 < subset.size(); ++a)
        for (size_t b = a + 1; b < subset.size(); ++b)
          product *= soft(subset[a], subset[b]);
      score += product;
    }
    if (l > 2) {
      // a faint pairwise term keeps a gradient alive before cliques form
      double pairs = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs += soft(i, j);
      score += 0.01 * pairs;
    }
    return score;
  }
};

struct WalkState {
  std::vector<Vec> pts;
  Mat dist_matrix;
  double diam = 0.0;
};

void recompute(WalkState& state) {
  const int n = static_cast<int>(state.pts.size());
  state.dist_matrix.resize(n, n);
  state.diam = 0.0;
  for (int i = 0; i < n; ++i) {
    state.dist_matrix(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = dist(state.pts[static_cast<size_t>(i)],
                            state.pts[static_cast<size_t>(j)]);
      state.dist_matrix(i, j) = d;
      state.dist_matrix(j, i) = d;
      state.diam = std::max(state.diam, d);
    }
  }
}

//----------------------------------------------------------------------------
// exact scoring
//----------------------------------------------------------------------------

double min_edge_slack(const DiameterGraph& g) {
  double slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (g.edge(i, j))
        slack = std::min(slack,
                         dist(g.config.points[static_cast<size_t>(i)],
                              g.config.points[static_cast<size_t>(j)]) -
                             (1.0 - g.tol.eq_tol));
  return std::isfinite(slack) ? slack : 0.0;
}

struct ExactScore {
  long count = 0;
  double slack = 0.0;
};

ExactScore exact_score(const std::vector<Vec>& pts, const Space& space, int l,
                       const Tolerance& tol) {
  PointConfig cfg{space, pts, {}};
  const DiameterGraph g = build_diameter_graph(std::move(cfg), tol);
  ExactScore score;
  score.count = count_cliques(g, l).count;
  score.slack = min_edge_slack(g);
  return score;
}

bool is_tolerance_artifact(const SearchProblem& p, long count) {
  return !p.space.is_sphere() && p.l == p.space.dim && count > p.n;
}

std::string artifact_message(const SearchProblem& p, long count) {
  std::ostringstream msg;
  msg << "tolerance artifact: a candidate produced " << count
      << " cliques of size " << p.l << " on " << p.n
      << " points, above the proven ceiling of " << p.n
      << "; the candidate was rejected, not reported as a discovery "
         "(near-coincident points under eq_tol are the usual cause)";
  return msg.str();
}

//----------------------------------------------------------------------------
// structured starts
//----------------------------------------------------------------------------

bool separated(const std::vector<Vec>& pts, const Vec& candidate,
               double floor_dist) {
  for (const Vec& p : pts)
    if (dist(p, candidate) < floor_dist) return false;
  return true;
}

// position at unit distance from every anchor point, chosen among sampled
// locus directions to maximize the exact clique count without stretching the
// diameter past 1
Vec attach_point(const std::vector<Vec>& pts, int d, int l,
                 const Tolerance& tol, Rng& rng) {
  PointConfig cfg{Space::euclidean(d), pts, {}};
  const DiameterGraph g = build_diameter_graph(cfg, tol);
  std::vector<std::vector<int>> anchors;
  if (l == 2) {
    for (int i = 0; i < g.n(); ++i) anchors.push_back({i});
  } else {
    anchors = count_cliques(g, l - 1).cliques;
  }
  if (anchors.size() > 24) {
    // deterministic thinning: keep a seeded sample
    std::vector<std::vector<int>> kept;
    for (int i = 0; i < 24; ++i)
      kept.push_back(
          anchors[static_cast<size_t>(uniform_int(
              rng, 0, static_cast<int>(anchors.size()) - 1))]);
    anchors = std::move(kept);
  }

  Vec best_point;
  ExactScore best_score{-1, 0.0};
  for (const auto& anchor : anchors) {
    std::vector<Vec> support;
    for (int idx : anchor) support.push_back(pts[static_cast<size_t>(idx)]);
    Ball cs;
    try {
      cs = circumsphere(support);
    } catch (const Error&) {
      continue;
    }
    const double rho2 = 1.0 - cs.radius * cs.radius;
    if (rho2 <= 1e-12) continue;
    const double rho = std::sqrt(rho2);

    // orthogonal complement of the anchor's affine hull
    Mat normals;
    const int s = static_cast<int>(support.size());
    if (s == 1) {
      normals = Mat::Identity(d, d);
    } else {
      Mat span(d, s - 1);
      for (int i = 1; i < s; ++i)
        span.col(i - 1) = support[static_cast<size_t>(i)] - support[0];
      Eigen::JacobiSVD<Mat> svd(span, Eigen::ComputeFullU);
      normals = svd.matrixU().rightCols(d - (s - 1));
    }
    const int m = static_cast<int>(normals.cols());

    // directions to try: toward the rest of the configuration first, then
    // seeded random ones
    std::vector<Vec> dirs;
    Vec rest = Vec::Zero(d);
    for (const Vec& p : pts) rest += p;
    rest = rest / static_cast<double>(pts.size()) - cs.center;
    Vec toward = normals.transpose() * rest;
    if (toward.norm() > 1e-9) dirs.push_back(toward.normalized());
    for (int k = 0; k < 16; ++k)
      dirs.push_back(uniform_on_sphere(rng, m, 1.0));

    for (const Vec& u : dirs) {
      const Vec candidate = cs.center + rho * (normals * u);
      if (!separated(pts, candidate, 1e-4)) continue;
      double far = 0.0;
      for (const Vec& p : pts) far = std::max(far, dist(p, candidate));
      if (far > 1.0 + 1e-12) continue;
      std::vector<Vec> extended = pts;
      extended.push_back(candidate);
      const ExactScore score =
          exact_score(extended, Space::euclidean(d), l, tol);
      if (score.count > best_score.count ||
          (score.count == best_score.count && score.slack > best_score.slack)) {
        best_score = score;
        best_point = candidate;
      }
    }
  }
  if (best_point.size() == d) return best_point;

  // fallback: a jittered interior point keeps the diameter at 1
  Vec center = Vec::Zero(d);
  for (const Vec& p : pts) center += p;
  center /= static_cast<double>(pts.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Vec candidate = center + gaussian_vec(rng, d, 0.05);
    double far = 0.0;
    for (const Vec& p : pts) far = std::max(far, dist(p, candidate));
    if (far <= 1.0 && separated(pts, candidate, 1e-4)) return candidate;
  }
  throw DegeneracyError("could not place an interior fallback point");
}

std::vector<Vec> random_start(const SearchProblem& p, Rng& rng) {
  std::vector<Vec> pts;
  const int ambient = p.space.ambient_dim();
  while (static_cast<int>(pts.size()) < p.n) {
    Vec candidate =
        p.space.is_sphere()
            ? Vec(uniform_on_sphere(rng, ambient, p.space.radius))
            : Vec(gaussian_vec(rng, ambient, 0.5));
    if (separated(pts, candidate, 1e-3)) pts.push_back(candidate);
  }
  return pts;
}

std::vector<Vec> initial_points(const SearchProblem& p, int variant,
                                Rng& rng) {
  if (p.space.is_sphere() || variant >= 2) return random_start(p, rng);

  const int d = p.space.dim;
  std::vector<Vec> pts;
  if (d == 2 && p.l == 2 && p.n >= 3) {
    const int odd = p.n % 2 == 1 ? p.n : p.n - 1;
    pts = reuleaux_polygon(odd).points;
  } else {
    const int base = std::min(p.n, d + 1);
    if (base < 2) return random_start(p, rng);
    pts = regular_unit_simplex(d, base).points;
  }
  while (static_cast<int>(pts.size()) < p.n)
    pts.push_back(attach_point(pts, d, p.l, p.tol, rng));
  return pts;
}

//----------------------------------------------------------------------------
// annealing
//----------------------------------------------------------------------------

struct RestartOutcome {
  std::vector<Vec> best_pts;
  long count = -1;
  double slack = 0.0;
  std::vector<TraceEntry> trace;
  std::string diagnostic;
};

RestartOutcome run_restart(const SearchProblem& p, const Surrogate& surrogate,
                           long iters, int variant, uint64_t restart_seed) {
  Rng rng(restart_seed);
  const int ambient = p.space.ambient_dim();

  RestartOutcome out;
  WalkState cur;
  cur.pts = initial_points(p, variant, rng);
  recompute(cur);
  double cur_energy = -surrogate.eval(cur.dist_matrix, cur.diam);

  const ExactScore init = exact_score(cur.pts, p.space, p.l, p.tol);
  if (is_tolerance_artifact(p, init.count)) {
    out.diagnostic = artifact_message(p, init.count);
    out.best_pts = cur.pts;
    out.count = 0;
  } else {
    out.best_pts = cur.pts;
    out.count = init.count;
    out.slack = init.slack;
  }
  out.trace.push_back(TraceEntry{0, out.count, out.slack});

  for (long it = 1; it <= iters; ++it) {
    const double frac = static_cast<double>(it) / static_cast<double>(iters);
    const double sigma =
        p.sigma_hi * std::pow(p.sigma_lo / p.sigma_hi, frac);
    const double temperature = 0.5 * std::pow(2e-4, frac);

    const int idx = uniform_int(rng, 0, p.n - 1);
    Vec moved =
        cur.pts[static_cast<size_t>(idx)] + gaussian_vec(rng, ambient, sigma);
    if (p.space.is_sphere()) {
      const double norm = moved.norm();
      if (norm < 1e-9) continue;
      moved *= p.space.radius / norm;
    }
    bool clash = false;
    for (int j = 0; j < p.n && !clash; ++j)
      if (j != idx &&
          dist(moved, cur.pts[static_cast<size_t>(j)]) < kMinSeparation)
        clash = true;
    if (clash) continue;

    WalkState trial = cur;
    trial.pts[static_cast<size_t>(idx)] = moved;
    recompute(trial);
    const double trial_energy =
        -surrogate.eval(trial.dist_matrix, trial.diam);
    const double delta = trial_energy - cur_energy;
    if (delta > 0 &&
        uniform_real(rng, 0.0, 1.0) >= std::exp(-delta / temperature))
      continue;
    cur = std::move(trial);
    cur_energy = trial_energy;

    const ExactScore score = exact_score(cur.pts, p.space, p.l, p.tol);
    if (is_tolerance_artifact(p, score.count)) {
      if (out.diagnostic.empty())
        out.diagnostic = artifact_message(p, score.count);
      continue;
    }
    if (score.count > out.count ||
        (score.count == out.count && score.slack > out.slack)) {
      out.best_pts = cur.pts;
      out.count = score.count;
      out.slack = score.slack;
      out.trace.push_back(TraceEntry{it, out.count, out.slack});
    }
  }
  return out;
}

}  // namespace

void SearchProblem::validate() const {
  tol.validate();
  if (space.dim < 1) throw ArgumentError("search needs dimension >= 1");
  if (n < 2) throw ArgumentError("search needs n >= 2 points");
  if (l < 2 || l > n)
    throw ArgumentError("clique size must satisfy 2 <= l <= n, got l=" +
                        std::to_string(l) + " n=" + std::to_string(n));
  if (budget < 1) throw ArgumentError("budget must be positive");
  if (restarts < 1) throw ArgumentError("restarts must be positive");
  if (!(sigma_lo > 0) || !(sigma_hi >= sigma_lo))
    throw ArgumentError("move scales must satisfy 0 < sigma_lo <= sigma_hi");
  if (binomial(n, l) > 200000)
    throw ArgumentError("subset count C(n, l) too large to enumerate");
}

SearchResult search(const SearchProblem& problem) {
  problem.validate();
  const Surrogate surrogate(problem.n, problem.l);
  const long per_restart =
      std::max<long>(1, problem.budget / problem.restarts);

  const auto outcomes =
      map_trials<RestartOutcome>(problem.restarts, [&](long r) {
        return run_restart(problem, surrogate, per_restart,
                           static_cast<int>(r),
                           mix_seed(problem.seed, static_cast<uint64_t>(r)));
      });

  int best_idx = 0;
  for (int r = 1; r < problem.restarts; ++r) {
    const auto& cand = outcomes[static_cast<size_t>(r)];
    const auto& best = outcomes[static_cast<size_t>(best_idx)];
    if (cand.count > best.count ||
        (cand.count == best.count && cand.slack > best.slack))
      best_idx = r;
  }

  SearchResult result;
  for (const auto& o : outcomes) {
    result.trace.push_back(o.trace);
    if (!o.diagnostic.empty() && result.diagnostic.empty())
      result.diagnostic = o.diagnostic;
  }

  // emit the normalized config and re-verify the count on exactly what is
  // emitted
  PointConfig raw{problem.space,
                  outcomes[static_cast<size_t>(best_idx)].best_pts,
                  {}};
  const DiameterGraph g = build_diameter_graph(std::move(raw), problem.tol);
  result.best = g.config;
  result.count = count_cliques(g, problem.l).count;
  result.best_slack = min_edge_slack(g);
  if (is_tolerance_artifact(problem, result.count) &&
      result.diagnostic.empty())
    result.diagnostic = artifact_message(problem, result.count);
  return result;
}

PointConfig reuleaux_polygon(int n) {
  if (n < 3 || n % 2 == 0)
    throw ArgumentError(
        "diameter-cycle polygons need an odd vertex count >= 3, got " +
        std::to_string(n));
  // regular n-gon whose (n-1)/2-step chords have length exactly 1
  const double pi = 3.14159265358979323846;
  const double radius = 1.0 / (2.0 * std::sin(pi * (n - 1) / (2.0 * n)));
  PointConfig cfg;
  cfg.space = Space::euclidean(2);
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * pi * k / n;
    Vec v(2);
    v << radius * std::cos(angle), radius * std::sin(angle);
    cfg.points.push_back(v);
  }
  return cfg;
}

//----------------------------------------------------------------------------
// counterexample hunt
//----------------------------------------------------------------------------

namespace {

struct Pose {
  Mat rot;
  Vec shift;
};

std::vector<Vec> apply_pose(const std::vector<Vec>& shape, const Pose& pose) {
  std::vector<Vec> out;
  out.reserve(shape.size());
  for (const Vec& u : shape) out.push_back(pose.rot * u + pose.shift);
  return out;
}

double cross_max(const std::vector<Vec>& fixed,
                 const std::vector<Vec>& moved) {
  double worst = 0.0;
  for (const Vec& a : fixed)
    for (const Vec& b : moved) worst = std::max(worst, dist(a, b));
  return worst;
}

Mat cayley_rotation(Rng& rng, int d, double scale) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i) g.row(i) = gaussian_vec(rng, d).transpose();
  const Mat skew = 0.5 * scale * (g - g.transpose());
  const Mat eye = Mat::Identity(d, d);
  return (eye - 0.5 * skew).lu().solve(eye + 0.5 * skew);
}

// least-squares rigid fit of a centered shape onto target points
Pose fit_pose(const std::vector<Vec>& shape, const std::vector<Vec>& target) {
  const int d = static_cast<int>(shape[0].size());
  const Vec target_center = centroid(target);
  Mat h = Mat::Zero(d, d);
  for (size_t i = 0; i < shape.size(); ++i)
    h += shape[i] * (target[i] - target_center).transpose();
  Eigen::JacobiSVD<Mat> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec signs = Vec::Ones(d);
  signs[d - 1] =
      (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0
                                                                    : 1.0;
  Pose pose;
  pose.rot = svd.matrixV() * signs.asDiagonal() * svd.matrixU().transpose();
  pose.shift = target_center;
  return pose;
}

struct HuntOutcome {
  Pose best_pose;
  double best_cross = std::numeric_limits<double>::infinity();
  std::vector<TraceEntry> trace;
};

}  // namespace

SearchResult counterexample_hunt(int d, long budget, uint64_t seed,
                                 int second_size) {
  if (d < 3)
    throw ArgumentError("the hunt needs d >= 3, got " + std::to_string(d));
  if (budget < 1) throw ArgumentError("budget must be positive");
  const int size2 = second_size == 0 ? (d + 1) / 2 + 1 : second_size;
  if (size2 < 2 || size2 > d + 1)
    throw ArgumentError("second simplex size must lie in [2, d+1], got " +
                        std::to_string(size2));
  const Tolerance tol{};
  const std::vector<Vec> fixed = regular_unit_simplex(d, d + 1).points;
  const std::vector<Vec> shape =
      regular_unit_simplex(d, size2).points;  // centered at the origin
  const Vec fixed_center = centroid(fixed);
  const int restarts = 4;
  const long iters = std::max<long>(1, budget / restarts);

  auto union_count = [&](const Pose& pose) {
    std::vector<Vec> pts = fixed;
    for (const Vec& q : apply_pose(shape, pose)) pts.push_back(q);
    PointConfig cfg{Space::euclidean(d), std::move(pts), {}};
    return count_cliques(build_diameter_graph(std::move(cfg), tol), d + 1)
        .count;
  };

  const auto outcomes = map_trials<HuntOutcome>(restarts, [&](long r) {
    Rng rng(mix_seed(seed, 7000 + static_cast<uint64_t>(r)));
    Pose pose;
    if (r == 0 && size2 == (d + 1) / 2) {
      // the arc-midpoint construction realizes this size at unit diameter;
      // fit the exact simplex onto its point cloud at a tiny contraction
      const RedBlue rb = red_blue_construction(d, 1e-6);
      pose = fit_pose(shape, rb.blue.points);
    } else if (r == 0) {
      pose = Pose{Mat::Identity(d, d), fixed_center};
    } else {
      pose = Pose{random_orthogonal(rng, d),
                  Vec(fixed_center + gaussian_vec(rng, d, 0.3))};
    }

    HuntOutcome out;
    double cur = cross_max(fixed, apply_pose(shape, pose));
    out.best_pose = pose;
    out.best_cross = cur;
    double last_traced = std::numeric_limits<double>::infinity();
    auto record = [&](long iteration) {
      if (last_traced - out.best_cross < 1e-3) return;
      last_traced = out.best_cross;
      out.trace.push_back(TraceEntry{
          iteration, union_count(out.best_pose),
          1.0 - std::max(1.0, out.best_cross)});
    };
    record(0);

    auto propose = [&](double rot_scale, double shift_scale) {
      Pose next = pose;
      if (uniform_int(rng, 0, 1) == 0)
        next.rot = cayley_rotation(rng, d, rot_scale) * pose.rot;
      else
        next.shift = pose.shift + gaussian_vec(rng, d, shift_scale);
      return next;
    };

    for (long it = 1; it <= iters; ++it) {
      const double frac =
          static_cast<double>(it) / static_cast<double>(iters);
      const double scale = 0.15 * std::pow(1e-5 / 0.15, frac);
      const double temperature = 0.05 * std::pow(2e-6, frac);
      const Pose next = propose(scale, scale);
      const double next_cross = cross_max(fixed, apply_pose(shape, next));
      const double delta = next_cross - cur;
      if (delta > 0 &&
          uniform_real(rng, 0.0, 1.0) >= std::exp(-delta / temperature))
        continue;
      pose = next;
      cur = next_cross;
      if (cur < out.best_cross) {
        out.best_pose = pose;
        out.best_cross = cur;
        record(it);
      }
    }

    // deterministic descent polish from the best pose found
    pose = out.best_pose;
    cur = out.best_cross;
    for (int k = 0; k < 400; ++k) {
      const double scale =
          1e-3 * std::pow(1e-5, static_cast<double>(k) / 400.0);
      const Pose next = propose(scale, scale);
      const double next_cross = cross_max(fixed, apply_pose(shape, next));
      if (next_cross < cur) {
        pose = next;
        cur = next_cross;
      }
    }
    if (cur < out.best_cross) {
      out.best_pose = pose;
      out.best_cross = cur;
    }
    last_traced = std::numeric_limits<double>::infinity();
    record(iters);
    return out;
  });

  int best_idx = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[static_cast<size_t>(r)].best_cross <
        outcomes[static_cast<size_t>(best_idx)].best_cross)
      best_idx = r;
  const HuntOutcome& winner = outcomes[static_cast<size_t>(best_idx)];

  SearchResult result;
  for (const auto& o : outcomes) result.trace.push_back(o.trace);

  std::vector<Vec> union_pts = fixed;
  for (const Vec& q : apply_pose(shape, winner.best_pose))
    union_pts.push_back(q);
  result.best_slack = 1.0 - diameter(union_pts);
  PointConfig raw{Space::euclidean(d), std::move(union_pts), {}};
  const DiameterGraph g = build_diameter_graph(std::move(raw), tol);
  result.best = g.config;
  result.count = count_cliques(g, d + 1).count;
  return result;
}

nlohmann::ordered_json search_result_to_json(const SearchResult& result) {
  nlohmann::ordered_json j;
  j["count"] = result.count;
  j["best_slack"] = result.best_slack;
  j["diagnostic"] = result.diagnostic;
  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const auto& restart : result.trace) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : restart)
      entries.push_back(nlohmann::ordered_json{{"iteration", e.iteration},
                                               {"count", e.count},
                                               {"slack", e.slack}});
    traces.push_back(entries);
  }
  j["trace"] = traces;
  j["config"] = config_to_json(result.best);
  return j;
}

}  // namespace schurlab
