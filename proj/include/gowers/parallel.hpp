#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace gowers {

// Worker cap shared by all parallel loops.  The chunk decomposition below is
// a function of the problem size only, so results are bit-identical for any
// cap value (fixed-order reduction over fixed-size chunks).
inline unsigned& thread_cap_ref() {
  static unsigned cap = std::thread::hardware_concurrency() > 0
                            ? std::thread::hardware_concurrency()
                            : 1;
  return cap;
}

inline void set_thread_cap(unsigned n) { thread_cap_ref() = n == 0 ? 1 : n; }
inline unsigned thread_cap() { return thread_cap_ref(); }

inline constexpr std::uint64_t kDefaultChunk = 1 << 14;

// Evaluates f(begin, end) on consecutive chunks [k*chunk, ...) of [0, n) and
// returns the per-chunk results indexed by chunk number.  Workers race for
// chunk indices but each result lands in its own slot; callers combine the
// vector sequentially.
template <class T, class F>
std::vector<T> chunked_map(std::uint64_t n, std::uint64_t chunk, F&& f) {
  if (chunk == 0) chunk = kDefaultChunk;
  std::uint64_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  std::vector<T> out(nchunks);
  unsigned workers = thread_cap();
  if (workers <= 1 || nchunks <= 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c) {
      std::uint64_t b = c * chunk;
      out[c] = f(b, std::min(n, b + chunk));
    }
    return out;
  }
  if (workers > nchunks) workers = static_cast<unsigned>(nchunks);
  std::atomic<std::uint64_t> next{0};
  auto body = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      std::uint64_t b = c * chunk;
      out[c] = f(b, std::min(n, b + chunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gowers
