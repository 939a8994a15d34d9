#include "gcl/random.hpp"

namespace gcl {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Point uniform_in(const Window& w, Rng& rng) {
  Point p(w.dim());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < w.dim(); ++i) p[i] = w.lower()[i] + u(rng) * w.side(i);
  return p;
}

Point gaussian_point(int dim, double sd, Rng& rng) {
  Point p(dim);
  std::normal_distribution<double> n(0.0, sd);
  for (int i = 0; i < dim; ++i) p[i] = n(rng);
  return p;
}

}  // namespace gcl
