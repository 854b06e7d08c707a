#include "irl/random.hpp"

#include <numeric>
#include <stdexcept>

namespace irl {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t sample_categorical(Rng& rng, std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("sample_categorical: no positive mass");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

std::vector<double> sample_dirichlet(Rng& rng, std::size_t dim, double alpha) {
  if (dim == 0) throw std::invalid_argument("sample_dirichlet: zero dimension");
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_dirichlet: alpha must be positive");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> out(dim);
  double total = 0.0;
  // Tiny alphas can underflow every draw; retry rather than divide by zero.
  while (!(total > 0.0)) {
    total = 0.0;
    for (auto& v : out) {
      v = gamma(rng);
      total += v;
    }
  }
  for (auto& v : out) v /= total;
  return out;
}

}  // namespace irl
