#include "schurlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace schurlab {

void Tolerance::validate() const {
  if (!(eq_tol > 0) || !(eq_tol <= 1e-6))
    throw ArgumentError("eq_tol must lie in (0, 1e-6]");
  if (!(geom_tol > 0) || !(geom_tol <= 1e-6))
    throw ArgumentError("geom_tol must lie in (0, 1e-6]");
}

Space Space::euclidean(int d) {
  if (d < 1) throw ArgumentError("euclidean space needs dim >= 1");
  return Space{Kind::Euclidean, d, 0.0};
}

Space Space::sphere(int d, double r) {
  if (d < 1) throw ArgumentError("sphere needs dim >= 1");
  if (!(r > 0)) throw ArgumentError("sphere needs radius > 0");
  return Space{Kind::Sphere, d, r};
}

void PointConfig::validate(const Tolerance& tol) const {
  tol.validate();
  const int ad = space.ambient_dim();
  for (const Vec& p : points) {
    if (p.size() != ad)
      throw DimensionError("point has " + std::to_string(p.size()) +
                           " coordinates, expected " + std::to_string(ad));
    if (space.is_sphere()) {
      const double off = std::abs(p.norm() - space.radius);
      if (off > tol.geom_tol * std::max(1.0, space.radius))
        throw DomainError("point lies off the sphere by " + std::to_string(off));
    }
  }
  if (!labels.empty() && labels.size() != points.size())
    throw ArgumentError("labels must be empty or match the point count");
}

bool Ball::contains(const Vec& p, double slack) const {
  return (p - center).norm() <= radius + slack;
}

double dist(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("distance of mismatched dims");
  return (a - b).norm();
}

Vec centroid(const std::vector<Vec>& pts) {
  if (pts.empty()) throw ArgumentError("centroid of empty set");
  Vec c = Vec::Zero(pts[0].size());
  for (const Vec& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

double diameter(const std::vector<Vec>& pts) {
  double best = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

double diameter(const PointConfig& config) { return diameter(config.points); }

//============================================================================
// Frames and hyperplanes
//============================================================================

double AffineFrame::residual(const Vec& p) const {
  const Vec d = p - origin;
  return (d - basis * (basis.transpose() * d)).norm();
}

AffineFrame AffineFrame::of_affine_hull(const std::vector<Vec>& pts,
                                        double rank_tol) {
  if (pts.empty()) throw ArgumentError("affine hull of empty set");
  const Vec o = centroid(pts);
  Mat m(o.size(), pts.size());
  for (size_t i = 0; i < pts.size(); ++i) m.col(i) = pts[i] - o;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = rank_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return AffineFrame{o, svd.matrixU().leftCols(rank)};
}

Hyperplane Hyperplane::through(const std::vector<Vec>& pts) {
  if (pts.empty()) throw ArgumentError("hyperplane through no points");
  const int d = static_cast<int>(pts[0].size());
  AffineFrame frame = AffineFrame::of_affine_hull(pts);
  if (frame.flat_dim() != d - 1)
    throw DegeneracyError("affine hull is not a hyperplane (rank " +
                          std::to_string(frame.flat_dim()) + " in dim " +
                          std::to_string(d) + ")");
  // unit normal = orthogonal complement of the basis columns
  Eigen::FullPivHouseholderQR<Mat> qr(frame.basis);
  Vec n = qr.matrixQ().col(d - 1);
  n.normalize();
  return Hyperplane{n, n.dot(frame.origin)};
}

Vec project_to_hyperplane(const Vec& p, const Hyperplane& h) {
  if (p.size() != h.normal.size())
    throw DimensionError("projection of mismatched dims");
  return p - h.signed_dist(p) * h.normal;
}

//============================================================================
// Regular unit simplex
//============================================================================

PointConfig regular_unit_simplex(int d, int k) {
  if (k < 2) throw ArgumentError("simplex needs k >= 2 vertices");
  if (k > d + 1)
    throw ArgumentError("k vertices need dimension >= k-1, got d=" +
                        std::to_string(d));
  // e_i / sqrt(2) in R^k are pairwise at distance 1; recentre, then rotate
  // the hyperplane {sum x = 0} onto the first k-1 coordinates
  Mat q(k, k);
  for (int i = 0; i < k; ++i) {
    Vec p = Vec::Zero(k);
    p(i) = 1.0 / std::sqrt(2.0);
    q.col(i) = p;
  }
  const Vec c = q.rowwise().mean();
  q.colwise() -= c;

  Mat ones(k, 1);
  ones.setOnes();
  Eigen::FullPivHouseholderQR<Mat> qr(ones);
  Mat full = qr.matrixQ();     // col 0 ~ ones/sqrt(k), rest spans {sum x = 0}
  Mat basis = full.rightCols(k - 1);

  PointConfig out;
  out.space = Space::euclidean(d);
  out.points.reserve(k);
  for (int i = 0; i < k; ++i) {
    Vec local = basis.transpose() * q.col(i);  // k-1 coords
    Vec p = Vec::Zero(d);
    p.head(k - 1) = local;
    out.points.push_back(std::move(p));
  }
  return out;
}

//============================================================================
// Enclosing balls
//============================================================================

Ball circumsphere(const std::vector<Vec>& support) {
  if (support.empty()) throw ArgumentError("circumsphere of empty set");
  const Vec& q0 = support[0];
  const int m = static_cast<int>(support.size()) - 1;
  if (m == 0) return Ball{q0, 0.0};
  Mat a(m, q0.size());
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    const Vec d = support[i + 1] - q0;
    a.row(i) = d.transpose();
    b(i) = 0.5 * d.squaredNorm();
  }
  // center = q0 + a^T lambda with (a a^T) lambda = b keeps the center inside
  // the affine hull of the support
  Mat gram = a * a.transpose();
  Eigen::LDLT<Mat> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw DegeneracyError("circumsphere support is affinely dependent");
  Vec lambda = ldlt.solve(b);
  if ((gram * lambda - b).norm() > 1e-8 * std::max(1.0, b.norm()))
    throw DegeneracyError("circumsphere support is affinely dependent");
  Vec center = q0 + a.transpose() * lambda;
  return Ball{center, (center - q0).norm()};
}

namespace {

Ball ball_of_support(const std::vector<Vec>& support, int dim) {
  if (support.empty()) return Ball{Vec::Zero(dim), -1.0};  // radius<0: empty
  return circumsphere(support);
}

Ball welzl(std::vector<const Vec*>& pts, size_t n, std::vector<Vec>& support,
           int dim) {
  Ball ball = ball_of_support(support, dim);
  if (support.size() == static_cast<size_t>(dim) + 1) return ball;
  for (size_t i = 0; i < n; ++i) {
    const Vec& p = *pts[i];
    const double slack = 1e-12 * (1.0 + std::abs(ball.radius));
    if (ball.radius < 0 || !ball.contains(p, slack)) {
      support.push_back(p);
      ball = welzl(pts, i, support, dim);
      support.pop_back();
      // move-to-front keeps hard points early and the recursion shallow
      auto* hit = pts[i];
      for (size_t j = i; j > 0; --j) pts[j] = pts[j - 1];
      pts[0] = hit;
    }
  }
  return ball;
}

}  // namespace

Ball min_enclosing_ball(const std::vector<Vec>& pts) {
  if (pts.empty()) throw ArgumentError("enclosing ball of empty set");
  const int dim = static_cast<int>(pts[0].size());
  for (const Vec& p : pts)
    if (p.size() != dim) throw DimensionError("mixed dimensions in point set");
  std::vector<const Vec*> work(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) work[i] = &pts[i];
  // fixed shuffle: randomized running time, deterministic result
  std::mt19937_64 rng(0x5eed5eedULL ^ (pts.size() * 0x9e3779b97f4a7c15ULL));
  std::shuffle(work.begin(), work.end(), rng);
  std::vector<Vec> support;
  support.reserve(dim + 1);
  Ball ball = welzl(work, work.size(), support, dim);
  if (ball.radius < 0) ball = Ball{pts[0], 0.0};
  return ball;
}

Ball circumscribed_ball(const PointConfig& simplex, const Tolerance& tol) {
  tol.validate();
  if (simplex.space.is_sphere())
    throw DomainError("circumscribed_ball expects a Euclidean simplex");
  simplex.validate(tol);
  const int k = simplex.n();
  if (k < 2) throw ArgumentError("simplex needs at least 2 vertices");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double d = dist(simplex.points[i], simplex.points[j]);
      if (std::abs(d - 1.0) > tol.eq_tol) {
        std::ostringstream msg;
        msg << "side |v" << i << " - v" << j << "| = " << d
            << " is not unit within eq_tol";
        throw DomainError(msg.str());
      }
    }
  AffineFrame frame = AffineFrame::of_affine_hull(simplex.points);
  if (frame.flat_dim() != k - 1)
    throw DegeneracyError("unit simplex has affine rank " +
                          std::to_string(frame.flat_dim()) + ", expected " +
                          std::to_string(k - 1));
  const double kk = static_cast<double>(k);
  return Ball{centroid(simplex.points), std::sqrt((kk - 1.0) / (2.0 * kk))};
}

}  // namespace schurlab
