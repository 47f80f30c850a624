#pragma once

#include "schurlab/geom.hpp"

#include <vector>

namespace schurlab {

// point on a frame sphere, stored as its embedding vector in R^{d+1}
using SpherePoint = Vec;

// working frame on the sphere S^d_r centered at the origin of R^{d+1};
// phi is the geodesic angle subtended by a unit chord
struct SphericalFrame {
  int d = 0;
  double r = 0;
  double phi = 0;

  // requires r >= 1/2 so a unit chord exists; phi = 2 asin(1/(2r))
  static SphericalFrame create(int d, double r);

  double chord(double angle) const;  // 2 r sin(angle/2)

  // throws DomainError when p is not on the sphere within tol
  void check_point(const SpherePoint& p, double tol = 1e-6) const;
};

// hypersphere cut by a hyperplane through the center; poles are +-r*normal
struct DiametralSphere {
  Vec normal;  // unit

  static DiametralSphere with_normal(Vec n);
};

struct SphericalCap {
  SpherePoint center;
  double angle = 0;  // geodesic radius
};

// geodesic angle between u1 and u2, in [0, pi]
double rho(const SphericalFrame& f, const SpherePoint& u1,
           const SpherePoint& u2);

// angle of the spherical triangle u1 u2 u3 at u2
double angle_at(const SphericalFrame& f, const SpherePoint& u1,
                const SpherePoint& u2, const SpherePoint& u3);

// side rho13 from sides rho12, rho23 and the included angle at u2
double cosine_law(double rho12, double rho23, double angle);

// nearest intersection with gamma of the great circle through p and the
// poles of gamma; undefined at the poles themselves
SpherePoint project_to_diametral(const SphericalFrame& f, const SpherePoint& p,
                                 const DiametralSphere& gamma);

SpherePoint reflect(const SphericalFrame& f, const SpherePoint& p,
                    const DiametralSphere& gamma);

// subsphere spanned by the columns of `span` is orthogonal to gamma exactly
// when reflecting it across gamma maps it onto itself
bool is_orthogonal(const SphericalFrame& f, const Mat& span,
                   const DiametralSphere& gamma, double tol = 1e-9);

// x lies in the spherical hull of `generators`: a nonnegative combination
// of their embedding vectors reaches x up to normalization
bool in_spherical_hull(const SphericalFrame& f, const SpherePoint& x,
                       const std::vector<SpherePoint>& generators,
                       double tol = 1e-9);

// smallest cap containing the points; requires an open hemisphere around them
SphericalCap min_spherical_ball(const SphericalFrame& f,
                                const std::vector<SpherePoint>& pts);

// min |a x - b| subject to x >= 0 (active-set); returns x
Vec nnls(const Mat& a, const Vec& b, double tol = 1e-12);

// k vertices of a regular unit simplex lying on the frame sphere. `frame_cols`
// holds k orthonormal columns in R^{d+1}: the first is the axis through the
// simplex circumcenter (at distance sqrt(r^2 - (k-1)/(2k)) from the origin),
// the rest carry the simplex coordinates. Requires the circumradius to fit.
std::vector<SpherePoint> unit_simplex_on_sphere(const SphericalFrame& f, int k,
                                                const Mat& frame_cols);

}  // namespace schurlab
