#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace hestonld {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// (key = seed, counter word 2..3 = stream id, counter word 0..1 = draw
// index), so any (seed, stream id) pair addresses an independent stream
// without shared state; results cannot depend on scheduling.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Purpose tags keep the draws that feed different estimator parts
// independent even for the same path index.
enum class StreamPurpose : std::uint64_t {
  PathNoise = 1,
  Exponential = 2,
  Auxiliary = 3,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {
    const std::uint64_t id = (static_cast<std::uint64_t>(purpose) << 56) | index;
    id_lo_ = static_cast<std::uint32_t>(id);
    id_hi_ = static_cast<std::uint32_t>(id >> 32);
  }

  std::uint64_t next_u64() {
    if (have_ == 0) refill();
    --have_;
    const std::uint32_t lo = buf_[2 * have_];
    const std::uint32_t hi = buf_[2 * have_ + 1];
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double next_open_unit() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> next_normal_pair() {
    const double u1 = next_open_unit();
    const double u2 = next_open_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    auto [z0, z1] = next_normal_pair();
    spare_ = z1;
    has_spare_ = true;
    return z0;
  }

  // Standard exponential (rate 1).
  double next_std_exponential() { return -std::log(next_open_unit()); }

 private:
  void refill() {
    buf_ = Philox4x32::block(
        {static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
         id_lo_, id_hi_},
        key_);
    ++draw_;
    have_ = 2;
  }

  std::array<std::uint32_t, 2> key_{};
  std::uint32_t id_lo_ = 0;
  std::uint32_t id_hi_ = 0;
  std::uint64_t draw_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hestonld
