#pragma once

#include <cstdint>

namespace gowers {

// Counter-based RNG: every draw is a pure function of (key, counter), so
// Monte-Carlo loops can be parallelized or re-ordered without changing the
// stream.  The mixer is the splitmix64 finalizer applied twice with the
// golden-ratio increment folded in.
namespace rngdetail {
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}
}  // namespace rngdetail

struct RngStream {
  std::uint64_t key = 0;

  // Substream derivation: hash the tag into a fresh key.
  RngStream sub(std::uint64_t tag) const {
    return RngStream{rngdetail::mix64(key + 0x9e3779b97f4a7c15ull * (tag + 1))};
  }

  std::uint64_t u64(std::uint64_t counter) const {
    return rngdetail::mix64(
        rngdetail::mix64(key ^ (counter + 0x9e3779b97f4a7c15ull)) +
        0x632be59bd9b4e019ull);
  }

  // Uniform in [0, n); multiply-shift reduction (bias < n / 2^64, far below
  // any statistical resolution used here, and exactly reproducible).
  std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(u64(counter)) * n) >> 64);
  }

  double unit(std::uint64_t counter) const {
    return static_cast<double>(u64(counter) >> 11) * 0x1.0p-53;
  }

  // ±1 with equal probability.
  double sign(std::uint64_t counter) const {
    return (u64(counter) & 1) ? 1.0 : -1.0;
  }
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t purpose) {
  return RngStream{rngdetail::mix64(seed)}.sub(purpose);
}

}  // namespace gowers
