#include "schurlab/rand.hpp"

#include <cmath>

namespace schurlab {

uint64_t mix_seed(uint64_t master, uint64_t stream) {
  uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_real(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Vec gaussian_vec(Rng& rng, int dim, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

Vec uniform_on_sphere(Rng& rng, int ambient_dim, double r) {
  for (;;) {
    Vec v = gaussian_vec(rng, ambient_dim);
    const double n = v.norm();
    if (n > 1e-12) return v * (r / n);
  }
}

Vec uniform_in_ball(Rng& rng, const Vec& center, double radius) {
  const int d = static_cast<int>(center.size());
  Vec dir = uniform_on_sphere(rng, d);
  const double u = uniform_real(rng, 0.0, 1.0);
  return center + dir * (radius * std::pow(u, 1.0 / d));
}

std::vector<double> uniform_barycentric(Rng& rng, int k) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  double total = 0;
  for (int i = 0; i < k; ++i) {
    w[i] = expo(rng);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

Mat random_orthogonal(Rng& rng, int d) {
  Mat g(d, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the sign gauge so the distribution is uniform
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace schurlab
