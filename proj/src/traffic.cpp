#include "ntn/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace ntn {

namespace {

constexpr double kChunk = 256.0;

std::int64_t poisson_small(Rng& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

}  // namespace

std::int64_t sample_poisson(Rng& rng, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("sample_poisson: lambda must be nonnegative");
  if (lambda == 0.0) return 0;
  std::int64_t total = 0;
  while (lambda > kChunk) {
    total += poisson_small(rng, kChunk);
    lambda -= kChunk;
  }
  return total + poisson_small(rng, lambda);
}

WorldState generate_arrivals(WorldState world, double lambda, std::int64_t packet_bits) {
  for (const auto& ue : world.ues) {
    const std::int64_t count = sample_poisson(world.traffic_rng, lambda);
    enqueue_packets(world.queues[ue.id], count, packet_bits, world.slot);
  }
  return world;
}

}  // namespace ntn
