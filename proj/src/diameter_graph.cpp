#include "schurlab/diameter_graph.hpp"

#include <algorithm>
#include <cmath>

namespace schurlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr long kPairwiseScanCap = 5000;

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int out = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      ++out, ++ia, ++ib;
  }
  return out;
}

int min_pairwise_intersection(const std::vector<std::vector<int>>& cliques) {
  if (cliques.size() < 2 ||
      static_cast<long>(cliques.size()) > kPairwiseScanCap)
    return -1;
  int best = static_cast<int>(cliques.front().size());
  for (size_t a = 0; a < cliques.size(); ++a)
    for (size_t b = a + 1; b < cliques.size(); ++b)
      best = std::min(best, intersection_size(cliques[a], cliques[b]));
  return best;
}

void extend_clique(const DiameterGraph& g, std::vector<int>& current,
                   const std::vector<int>& candidates, int l,
                   CliqueReport& out) {
  if (static_cast<int>(current.size()) == l) {
    ++out.count;
    out.cliques.push_back(current);
    return;
  }
  const size_t need = static_cast<size_t>(l) - current.size();
  if (candidates.size() < need) return;
  for (size_t idx = 0; idx + need <= candidates.size(); ++idx) {
    const int v = candidates[idx];
    std::vector<int> next;
    next.reserve(candidates.size() - idx);
    for (size_t j = idx + 1; j < candidates.size(); ++j)
      if (g.edge(v, candidates[j])) next.push_back(candidates[j]);
    current.push_back(v);
    extend_clique(g, current, next, l, out);
    current.pop_back();
  }
}

}  // namespace

long DiameterGraph::edge_count() const {
  long out = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (adjacency[i][j]) ++out;
  return out;
}

DiameterGraph build_diameter_graph(PointConfig config, Tolerance tol) {
  tol.validate();
  config.validate(tol);
  if (config.n() < 2)
    throw ArgumentError("diameter graph needs at least two points");
  const double diam = diameter(config.points);
  if (diam < 1e-12)
    throw DegeneracyError("all points coincide, no diameter to normalize");
  for (Vec& p : config.points) p /= diam;
  if (config.space.is_sphere()) config.space.radius /= diam;

  DiameterGraph g;
  g.tol = tol;
  const int n = config.n();
  g.adjacency.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool e = dist(config.points[i], config.points[j]) >= 1.0 - tol.eq_tol;
      g.adjacency[i][j] = e;
      g.adjacency[j][i] = e;
    }
  g.config = std::move(config);
  return g;
}

GeodesicRescale geodesic_rescale(const PointConfig& config, double factor) {
  if (!config.space.is_sphere())
    throw DomainError("geodesic rescaling needs a spherical configuration");
  if (!(factor > 0)) throw ArgumentError("factor must be positive");
  const double r = config.space.radius;
  Vec c = centroid(config.points);
  if (c.norm() < 1e-9 * r)
    throw DegeneracyError("spherical centroid degenerates to the center");
  c *= r / c.norm();
  const Vec chat = c / r;

  GeodesicRescale out;
  out.factor = factor;
  out.config.space = config.space;
  out.config.labels = config.labels;
  for (const Vec& p : config.points) {
    const double along = std::clamp(p.dot(chat) / r, -1.0, 1.0);
    const double theta = std::acos(along);
    Vec t = p - p.dot(chat) * chat;
    if (t.norm() < 1e-12 * r) {
      // at the centroid axis the direction is immaterial: the angle is 0
      out.config.points.push_back(c);
      continue;
    }
    t /= t.norm();
    const double scaled = factor * theta;
    if (scaled >= M_PI)
      throw DomainError("scaled geodesic distance leaves the hemisphere span");
    out.config.points.push_back(r * (std::cos(scaled) * chat +
                                     std::sin(scaled) * t));
  }
  for (int i = 0; i < config.n(); ++i)
    for (int j = i + 1; j < config.n(); ++j)
      out.residual = std::max(
          out.residual,
          std::abs(dist(out.config.points[i], out.config.points[j]) -
                   factor * dist(config.points[i], config.points[j])));
  return out;
}

GeodesicRescale geodesic_normalize(const PointConfig& config, double tol) {
  const double diam = diameter(config.points);
  if (diam < 1e-12)
    throw DegeneracyError("all points coincide, no diameter to normalize");
  double lo = 0.5 / diam, hi = 2.0 / diam;
  auto diam_at = [&](double f) {
    return diameter(geodesic_rescale(config, f).config.points);
  };
  // chord diameter grows with the geodesic factor; widen until bracketed
  for (int it = 0; it < 60 && diam_at(lo) > 1.0; ++it) lo *= 0.5;
  for (int it = 0; it < 60 && diam_at(hi) < 1.0; ++it) hi *= 1.5;
  if (diam_at(lo) > 1.0 || diam_at(hi) < 1.0)
    throw DomainError("geodesic normalization cannot reach chord diameter 1");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (diam_at(mid) < 1.0 ? lo : hi) = mid;
    if (hi - lo < tol * hi) break;
  }
  return geodesic_rescale(config, 0.5 * (lo + hi));
}

CliqueReport count_cliques(const DiameterGraph& g, int l) {
  if (l < 1 || l > g.n())
    throw ArgumentError("clique size must lie in [1, n]");
  CliqueReport out;
  out.l = l;
  std::vector<int> current;
  std::vector<int> candidates(g.n());
  for (int i = 0; i < g.n(); ++i) candidates[i] = i;
  extend_clique(g, current, candidates, l, out);
  out.pairwise_shared = min_pairwise_intersection(out.cliques);
  return out;
}

CliqueReport brute_force_cliques(const DiameterGraph& g, int l) {
  if (g.n() > 20)
    throw ArgumentError("brute-force enumeration refused beyond 20 points");
  if (l < 1 || l > g.n())
    throw ArgumentError("clique size must lie in [1, n]");
  CliqueReport out;
  out.l = l;
  std::vector<int> pick(l);
  for (int i = 0; i < l; ++i) pick[i] = i;
  for (;;) {
    bool complete = true;
    for (int a = 0; a < l && complete; ++a)
      for (int b = a + 1; b < l; ++b)
        if (!g.edge(pick[a], pick[b])) {
          complete = false;
          break;
        }
    if (complete) {
      ++out.count;
      out.cliques.push_back(pick);
    }
    int i = l - 1;
    while (i >= 0 && pick[i] == g.n() - l + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < l; ++j) pick[j] = pick[j - 1] + 1;
  }
  out.pairwise_shared = min_pairwise_intersection(out.cliques);
  return out;
}

AuditReport schur_audit(PointConfig config, Tolerance tol) {
  tol.validate();
  config.validate(tol);
  AuditReport out;
  out.dim = config.space.dim;
  out.n = config.n();

  if (config.space.is_sphere()) {
    // keep the sphere fixed: off-scale input is renormalized along geodesics
    const double diam = diameter(config.points);
    if (std::abs(diam - 1.0) > tol.eq_tol) {
      GeodesicRescale fixed = geodesic_normalize(config);
      out.geodesic_residual = fixed.residual;
      config = std::move(fixed.config);
    }
    if (config.space.radius <= kInvSqrt2) out.out_of_scope = true;
  }

  DiameterGraph g = build_diameter_graph(std::move(config), tol);
  out.min_edge_dist = 2.0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) {
      const double d = dist(g.config.points[i], g.config.points[j]);
      if (g.edge(i, j))
        out.min_edge_dist = std::min(out.min_edge_dist, d);
      else
        out.max_nonedge_dist = std::max(out.max_nonedge_dist, d);
    }

  if (out.dim <= g.n()) {
    CliqueReport cliques = count_cliques(g, out.dim);
    out.clique_count = cliques.count;
    out.count_bound_holds = cliques.count <= g.n();
    out.min_pairwise_intersection = cliques.pairwise_shared;
    if (cliques.pairwise_shared >= 0)
      out.intersection_bound_holds = cliques.pairwise_shared >= out.dim - 2;
  }
  out.violation = !out.out_of_scope &&
                  (!out.count_bound_holds || !out.intersection_bound_holds);
  return out;
}

SharedVertexReport shared_vertex_check(const DiameterGraph& g, int d) {
  if (d < 3)
    throw ArgumentError("shared-vertex audit needs dimension at least 3");
  SharedVertexReport out;
  if (d > g.n()) return out;
  CliqueReport cliques = count_cliques(g, d);
  out.clique_pairs = cliques.count * (cliques.count - 1) / 2;
  out.min_intersection = cliques.pairwise_shared;
  out.vacuous = cliques.pairwise_shared < 0;
  if (!out.vacuous) {
    out.share_vertex = cliques.pairwise_shared >= 1;
    out.strong_bound = cliques.pairwise_shared >= d - 2;
  }
  return out;
}

}  // namespace schurlab
