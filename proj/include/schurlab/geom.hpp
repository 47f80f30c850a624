#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace schurlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

//============================================================================
// Errors
//============================================================================

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad argument values: counts, ranges, unknown names
struct ArgumentError : Error {
  using Error::Error;
};

// mismatched ambient dimensions between operands
struct DimensionError : Error {
  using Error::Error;
};

// geometric precondition unmet (off-sphere point, no containing hemisphere, ...)
struct DomainError : Error {
  using Error::Error;
};

// rank-deficient or otherwise degenerate input
struct DegeneracyError : Error {
  using Error::Error;
};

//============================================================================
// Tolerances
//============================================================================

// eq_tol decides distance equalities (adjacency, boundary membership,
// equality-case classification); geom_tol is the slack for containment
// tests. Both must lie in (0, 1e-6].
struct Tolerance {
  double eq_tol = 1e-9;
  double geom_tol = 1e-6;

  void validate() const;
};

//============================================================================
// Spaces and point configurations
//============================================================================

struct Space {
  enum class Kind { Euclidean, Sphere };

  Kind kind = Kind::Euclidean;
  int dim = 0;        // intrinsic dimension d
  double radius = 0;  // sphere radius; unused for Euclidean

  static Space euclidean(int d);
  static Space sphere(int d, double r);

  bool is_sphere() const { return kind == Kind::Sphere; }

  // coordinate length of a point: d, or d+1 for sphere embeddings
  int ambient_dim() const { return is_sphere() ? dim + 1 : dim; }

  bool operator==(const Space&) const = default;
};

struct PointConfig {
  Space space;
  std::vector<Vec> points;
  std::vector<std::string> labels;  // empty, or one label per point

  int n() const { return static_cast<int>(points.size()); }

  // checks coordinate lengths, label count, and (spheres) that every point
  // lies on the sphere within geom_tol * max(1, r)
  void validate(const Tolerance& tol = {}) const;
};

struct Ball {
  Vec center;
  double radius = 0;

  bool contains(const Vec& p, double slack = 0) const;
};

// {x : normal.dot(x) == offset} with unit normal
struct Hyperplane {
  Vec normal;
  double offset = 0;

  // affine hull of pts must have codimension 1
  static Hyperplane through(const std::vector<Vec>& pts);

  double signed_dist(const Vec& p) const { return normal.dot(p) - offset; }
};

// orthonormal chart of an affine flat; maps between ambient and flat coords
struct AffineFrame {
  Vec origin;
  Mat basis;  // ambient_dim x flat_dim, orthonormal columns

  int flat_dim() const { return static_cast<int>(basis.cols()); }

  Vec to_local(const Vec& p) const { return basis.transpose() * (p - origin); }
  Vec to_ambient(const Vec& q) const { return origin + basis * q; }

  // distance from p to the flat
  double residual(const Vec& p) const;

  static AffineFrame of_affine_hull(const std::vector<Vec>& pts,
                                    double rank_tol = 1e-10);
};

//============================================================================
// Operations
//============================================================================

// k vertices of a regular simplex with unit side in R^d, centroid at the
// origin, spanning the first k-1 coordinates. Requires 2 <= k <= d+1.
PointConfig regular_unit_simplex(int d, int k);

// smallest ball containing the points (randomized incremental, exact support
// solve). Deterministic for a fixed input.
Ball min_enclosing_ball(const std::vector<Vec>& pts);

// ball through the vertices of a unit simplex: center at the centroid,
// radius sqrt((k-1)/(2k)). Rejects non-unit or degenerate input.
Ball circumscribed_ball(const PointConfig& simplex, const Tolerance& tol = {});

Vec project_to_hyperplane(const Vec& p, const Hyperplane& h);

// max pairwise distance of the stored coordinates (chord distance on spheres)
double diameter(const PointConfig& config);
double diameter(const std::vector<Vec>& pts);

double dist(const Vec& a, const Vec& b);
Vec centroid(const std::vector<Vec>& pts);

// smallest ball with all of `support` on its boundary: circumcenter within
// the affine hull. Requires affine independence.
Ball circumsphere(const std::vector<Vec>& support);

}  // namespace schurlab
