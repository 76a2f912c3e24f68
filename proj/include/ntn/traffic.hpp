#pragma once

#include <cstdint>

#include "ntn/packet_queue.hpp"
#include "ntn/rng.hpp"
#include "ntn/scenario.hpp"

namespace ntn {

// Exact Poisson sampler (multiplicative method). Large means are split into
// chunks so that exp(-lambda) never underflows.
std::int64_t sample_poisson(Rng& rng, double lambda);

// Appends Poisson(lambda) packets of packet_bits to every UE queue, stamped
// with the current slot.
WorldState generate_arrivals(WorldState world, double lambda, std::int64_t packet_bits);

}  // namespace ntn
