#include "schurlab/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace schurlab {

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

SphericalFrame SphericalFrame::create(int d, double r) {
  if (d < 1) throw ArgumentError("sphere frame needs d >= 1");
  if (!(r >= 0.5))
    throw DomainError("no unit chord fits on a sphere of radius " +
                      std::to_string(r));
  return SphericalFrame{d, r, 2.0 * std::asin(clamp1(1.0 / (2.0 * r)))};
}

double SphericalFrame::chord(double angle) const {
  return 2.0 * r * std::sin(0.5 * angle);
}

void SphericalFrame::check_point(const SpherePoint& p, double tol) const {
  if (p.size() != d + 1)
    throw DimensionError("sphere point needs " + std::to_string(d + 1) +
                         " coordinates");
  if (std::abs(p.norm() - r) > tol * std::max(1.0, r))
    throw DomainError("point is off the frame sphere");
}

DiametralSphere DiametralSphere::with_normal(Vec n) {
  const double len = n.norm();
  if (len < 1e-12) throw ArgumentError("diametral sphere needs a normal");
  return DiametralSphere{n / len};
}

double rho(const SphericalFrame& f, const SpherePoint& u1,
           const SpherePoint& u2) {
  f.check_point(u1);
  f.check_point(u2);
  // chord form is stable near 0 and exact on [0, pi]
  return 2.0 * std::asin(clamp1((u1 - u2).norm() / (2.0 * f.r)));
}

double angle_at(const SphericalFrame& f, const SpherePoint& u1,
                const SpherePoint& u2, const SpherePoint& u3) {
  f.check_point(u1);
  f.check_point(u2);
  f.check_point(u3);
  const Vec radial = u2 / f.r;
  Vec t1 = u1 - u1.dot(radial) * radial;
  Vec t3 = u3 - u3.dot(radial) * radial;
  const double n1 = t1.norm(), n3 = t3.norm();
  if (n1 < 1e-9 * f.r || n3 < 1e-9 * f.r)
    throw DomainError("angle undefined: endpoint coincides with or opposes the vertex");
  return std::acos(clamp1(t1.dot(t3) / (n1 * n3)));
}

double cosine_law(double rho12, double rho23, double angle) {
  const double pi = std::acos(-1.0);
  if (rho12 < 0 || rho12 > pi || rho23 < 0 || rho23 > pi)
    throw ArgumentError("sides must lie in [0, pi]");
  if (angle < 0 || angle > pi) throw ArgumentError("angle must lie in [0, pi]");
  const double c = std::cos(rho12) * std::cos(rho23) +
                   std::sin(rho12) * std::sin(rho23) * std::cos(angle);
  return std::acos(clamp1(c));
}

SpherePoint project_to_diametral(const SphericalFrame& f, const SpherePoint& p,
                                 const DiametralSphere& gamma) {
  f.check_point(p);
  Vec tangential = p - gamma.normal.dot(p) * gamma.normal;
  const double len = tangential.norm();
  if (len < 1e-9 * f.r)
    throw DomainError("projection undefined at the poles");
  return tangential * (f.r / len);
}

SpherePoint reflect(const SphericalFrame& f, const SpherePoint& p,
                    const DiametralSphere& gamma) {
  f.check_point(p);
  return p - 2.0 * gamma.normal.dot(p) * gamma.normal;
}

bool is_orthogonal(const SphericalFrame& f, const Mat& span,
                   const DiametralSphere& gamma, double tol) {
  if (span.rows() != f.d + 1)
    throw DimensionError("subsphere span must live in the embedding space");
  if (span.cols() == 0) throw ArgumentError("subsphere span is empty");
  Eigen::HouseholderQR<Mat> qr(span);
  Mat q = qr.householderQ() * Mat::Identity(span.rows(), span.cols());
  for (int j = 0; j < q.cols(); ++j) {
    const Vec r = q.col(j) - 2.0 * gamma.normal.dot(q.col(j)) * gamma.normal;
    if ((r - q * (q.transpose() * r)).norm() > tol) return false;
  }
  return true;
}

Vec nnls(const Mat& a, const Vec& b, double tol) {
  const int n = static_cast<int>(a.cols());
  Vec x = Vec::Zero(n);
  std::vector<bool> active(n, false);  // active = allowed positive
  const int max_outer = 3 * n + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    const Vec w = a.transpose() * (b - a * x);
    int best = -1;
    double best_w = tol * std::max(1.0, b.norm());
    for (int i = 0; i < n; ++i)
      if (!active[i] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    if (best < 0) break;
    active[best] = true;

    for (;;) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (active[i]) idx.push_back(i);
      Mat sub(a.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
      Vec z = sub.colPivHouseholderQr().solve(b);
      if ([&] {
            for (int i = 0; i < z.size(); ++i)
              if (z(i) <= 0) return false;
            return true;
          }()) {
        x.setZero();
        for (size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(k);
        break;
      }
      double alpha = 1.0;
      for (size_t k = 0; k < idx.size(); ++k)
        if (z(k) <= 0) {
          const double xi = x(idx[k]);
          alpha = std::min(alpha, xi / (xi - z(k)));
        }
      for (size_t k = 0; k < idx.size(); ++k) {
        x(idx[k]) += alpha * (z(k) - x(idx[k]));
        if (x(idx[k]) <= tol) {
          x(idx[k]) = 0;
          active[idx[k]] = false;
        }
      }
    }
  }
  return x;
}

bool in_spherical_hull(const SphericalFrame& f, const SpherePoint& x,
                       const std::vector<SpherePoint>& generators,
                       double tol) {
  f.check_point(x);
  if (generators.empty()) throw ArgumentError("hull needs generators");
  Mat a(f.d + 1, generators.size());
  for (size_t i = 0; i < generators.size(); ++i) {
    f.check_point(generators[i]);
    a.col(i) = generators[i] / f.r;
  }
  const Vec target = x / f.r;
  const Vec lambda = nnls(a, target);
  return (a * lambda - target).norm() <= tol;
}

std::vector<SpherePoint> unit_simplex_on_sphere(const SphericalFrame& f, int k,
                                                const Mat& frame_cols) {
  if (k < 2) throw ArgumentError("simplex needs k >= 2 vertices");
  if (frame_cols.rows() != f.d + 1 || frame_cols.cols() < k)
    throw DimensionError("need k orthonormal columns in the embedding space");
  if ((frame_cols.leftCols(k).transpose() * frame_cols.leftCols(k) -
       Mat::Identity(k, k))
          .norm() > 1e-9)
    throw ArgumentError("frame columns must be orthonormal");
  const double circumradius = std::sqrt((k - 1.0) / (2.0 * k));
  if (f.r <= circumradius)
    throw DomainError("unit simplex on " + std::to_string(k) +
                      " vertices does not fit on radius " + std::to_string(f.r));
  const double b = std::sqrt(f.r * f.r - circumradius * circumradius);
  PointConfig flat = regular_unit_simplex(k - 1, k);
  std::vector<SpherePoint> out;
  out.reserve(k);
  for (const Vec& q : flat.points) {
    Vec p = b * frame_cols.col(0);
    for (int j = 0; j < k - 1; ++j) p += q(j) * frame_cols.col(j + 1);
    out.push_back(std::move(p));
  }
  return out;
}

SphericalCap min_spherical_ball(const SphericalFrame& f,
                                const std::vector<SpherePoint>& pts) {
  if (pts.empty()) throw ArgumentError("cap of empty set");
  for (const SpherePoint& p : pts) f.check_point(p);
  // For on-sphere points, |y - m|^2 = r^2 + |m|^2 - 2 y.m, so the enclosing
  // ball cost at direction c and norm s is r^2 + s^2 - 2 s min_i y_i.c; the
  // optimum over s makes the center direction maximize the worst inner
  // product, which is exactly the smallest-cap axis. A center at the origin
  // means no open hemisphere contains the points.
  Ball meb = min_enclosing_ball(pts);
  const double len = meb.center.norm();
  if (len <= 1e-9 * f.r)
    throw DomainError("no open hemisphere contains the points");
  SphericalCap cap;
  cap.center = meb.center * (f.r / len);
  cap.angle = 0;
  for (const SpherePoint& p : pts)
    cap.angle = std::max(cap.angle, rho(f, cap.center, p));
  return cap;
}

}  // namespace schurlab
