#pragma once

// Network checkpoint file, all integers and floats little-endian:
//
//   offset  size  field
//   0       8     magic "NTNMLP\0\0"
//   8       4     u32 format version (1)
//   12      4     u32 output activation (0 linear, 1 tanh)
//   16      8     u64 number of layer sizes n (= layers + 1)
//   24      8n    u64 layer sizes, input first
//   ...           per layer: weights row-major (out x in) as f64, then biases as f64

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ntn/nn/mlp.hpp"

namespace ntn::nn {

inline constexpr char kCheckpointMagic[8] = {'N', 'T', 'N', 'M', 'L', 'P', '\0', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<unsigned char> encode_checkpoint(const Mlp<double>& net);
Mlp<double> decode_checkpoint(const std::vector<unsigned char>& bytes);

// Throw std::runtime_error naming the path on I/O or format failure.
void save_checkpoint(const std::filesystem::path& path, const Mlp<double>& net);
Mlp<double> load_checkpoint(const std::filesystem::path& path);

}  // namespace ntn::nn
