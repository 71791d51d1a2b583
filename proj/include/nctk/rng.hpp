#pragma once

#include <array>
#include <cstdint>

namespace nctk {

// Philox4x32-10 (Salmon et al. 2011). Counter-based: the output is a pure
// function of (counter, key), so every particle owns an independent stream.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    }
    return ctr;
  }
};

// Stream `id` under `seed`. Draw k of the stream lives at counter (k/2, id).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t id)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, id_(id) {}

  // Uniform double in the open interval (0, 1), 53 random bits.
  double uniform() {
    if (pos_ == 2) refill();
    const std::uint64_t bits = buf_[pos_++];
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t draws() const { return 2 * block_ - (2 - pos_); }

 private:
  void refill() {
    Philox4x32::Counter c{std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(id_),
                          std::uint32_t(id_ >> 32)};
    auto out = Philox4x32::block(c, key_);
    buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
    buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
    ++block_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t id_;
  std::uint64_t block_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int pos_ = 2;
};

}  // namespace nctk
