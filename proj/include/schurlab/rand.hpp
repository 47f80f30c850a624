#pragma once

#include "schurlab/geom.hpp"

#include <cstdint>
#include <random>

namespace schurlab {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent per-trial streams from one
// master seed so threaded and serial runs see identical draws
uint64_t mix_seed(uint64_t master, uint64_t stream);

inline Rng make_rng(uint64_t seed) { return Rng(seed); }

double uniform_real(Rng& rng, double a, double b);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive bounds

Vec gaussian_vec(Rng& rng, int dim, double sigma = 1.0);

// uniform direction times r
Vec uniform_on_sphere(Rng& rng, int ambient_dim, double r = 1.0);

Vec uniform_in_ball(Rng& rng, const Vec& center, double radius);

// uniform barycentric weights (flat Dirichlet) over k vertices
std::vector<double> uniform_barycentric(Rng& rng, int k);

// Haar-ish random orthogonal matrix via QR of a Gaussian matrix
Mat random_orthogonal(Rng& rng, int d);

}  // namespace schurlab
