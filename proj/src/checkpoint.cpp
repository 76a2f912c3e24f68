#include "ntn/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace ntn::nn {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& b) : bytes_(b) {}

  std::uint64_t u(int width) {
    if (pos_ + width > bytes_.size()) throw std::runtime_error("checkpoint: truncated data");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  double f64() { return std::bit_cast<double>(u(8)); }
  const unsigned char* raw(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint: truncated header");
    const unsigned char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Mlp<double>& net) {
  std::vector<unsigned char> out(std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(net.output));
  const auto sizes = net.layer_sizes();
  put_u64(out, sizes.size());
  for (int s : sizes) put_u64(out, static_cast<std::uint64_t>(s));
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) put_f64(out, w(r, c));
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) put_f64(out, net.biases[l](r));
  }
  return out;
}

Mlp<double> decode_checkpoint(const std::vector<unsigned char>& bytes) {
  Reader in(bytes);
  if (std::memcmp(in.raw(8), kCheckpointMagic, 8) != 0) throw std::runtime_error("checkpoint: bad magic");
  const auto version = in.u(4);
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const auto act = in.u(4);
  if (act > 1) throw std::runtime_error("checkpoint: unknown output activation " + std::to_string(act));
  const auto n = in.u(8);
  if (n < 2 || n > 1024) throw std::runtime_error("checkpoint: implausible layer count");
  std::vector<Eigen::Index> sizes;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = in.u(8);
    if (s == 0 || s > (1u << 24)) throw std::runtime_error("checkpoint: implausible layer size");
    sizes.push_back(static_cast<Eigen::Index>(s));
  }
  Mlp<double> net;
  net.output = static_cast<OutputActivation>(act);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    MatX w(sizes[l + 1], sizes[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = in.f64();
    VecX b(sizes[l + 1]);
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = in.f64();
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  if (!in.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return net;
}

void save_checkpoint(const std::filesystem::path& path, const Mlp<double>& net) {
  const auto bytes = encode_checkpoint(net);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

Mlp<double> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_checkpoint(bytes);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(e.what()) + " (" + path.string() + ")");
  }
}

}  // namespace ntn::nn
