#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/function_table.hpp"
#include "gowers/group.hpp"

namespace gowers {

// Spectrum of a function table: coefficients indexed by characters xi with
// the same mixed-radix layout as the group itself.  Normalization is
// fhat(xi) = E_x f(x) conj(chi_xi(x)), so sum_xi |fhat|^2 = E_x |f|^2.
struct Spectrum {
  GroupSpec group;
  std::vector<cd> coeffs;
};

namespace dftdetail {

inline bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr double kTau = 6.283185307179586476925286766559;

// In-place iterative radix-2 FFT, unnormalized.  sign = -1 forward.
inline void fft_pow2(std::vector<cd>& a, int sign) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * kTau / static_cast<double>(len);
    cd wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      cd w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        cd u = a[i + k];
        cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Unnormalized DFT of arbitrary length via Bluestein's chirp-z transform.
// Never zero-pads the semantic length: the output is exactly length n.
inline void dft_any(std::vector<cd>& a, int sign) {
  std::uint64_t n = a.size();
  if (n <= 1) return;
  if (is_pow2(n)) {
    fft_pow2(a, sign);
    return;
  }
  // chirp(x) = e(sign * pi * x^2 / n); x^2 reduced mod 2n in exact integers.
  std::uint64_t two_n = 2 * n;
  auto chirp = [&](std::uint64_t x) {
    std::uint64_t q = (static_cast<unsigned __int128>(x) * x) % two_n;
    return std::polar(1.0, sign * kTau / 2.0 * static_cast<double>(q) / static_cast<double>(n));
  };
  std::size_t l = 1;
  while (l < 2 * n - 1) l <<= 1;
  std::vector<cd> b(l, cd{0.0, 0.0}), c(l, cd{0.0, 0.0});
  for (std::uint64_t x = 0; x < n; ++x) b[x] = a[x] * chirp(x);
  for (std::uint64_t k = 0; k < n; ++k) {
    cd v = std::conj(chirp(k));
    c[k] = v;
    if (k != 0) c[l - k] = v;
  }
  fft_pow2(b, -1);
  fft_pow2(c, -1);
  for (std::size_t i = 0; i < l; ++i) b[i] *= c[i];
  fft_pow2(b, +1);
  double inv_l = 1.0 / static_cast<double>(l);
  for (std::uint64_t k = 0; k < n; ++k) a[k] = b[k] * inv_l * chirp(k);
}

// Applies dft_any along one axis of the mixed-radix layout.
inline void transform_axis(std::vector<cd>& data, const GroupSpec& g, std::size_t axis, int sign) {
  std::uint64_t n = static_cast<std::uint64_t>(g.moduli[axis]);
  if (n == 1) return;
  std::uint64_t stride = 1;
  for (std::size_t i = axis + 1; i < g.arity(); ++i)
    stride *= static_cast<std::uint64_t>(g.moduli[i]);
  std::uint64_t block = stride * n;
  std::vector<cd> line(n);
  for (std::uint64_t base = 0; base < data.size(); base += block) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      for (std::uint64_t k = 0; k < n; ++k) line[k] = data[base + off + k * stride];
      dft_any(line, sign);
      for (std::uint64_t k = 0; k < n; ++k) data[base + off + k * stride] = line[k];
    }
  }
}

}  // namespace dftdetail

inline Spectrum dft(const FunctionTable& f) {
  Spectrum s;
  s.group = f.group;
  s.coeffs = f.values;
  for (std::size_t axis = 0; axis < f.group.arity(); ++axis)
    dftdetail::transform_axis(s.coeffs, f.group, axis, -1);
  double inv = 1.0 / static_cast<double>(f.group.order);
  for (auto& c : s.coeffs) c *= inv;
  return s;
}

inline FunctionTable idft(const Spectrum& s) {
  FunctionTable f;
  f.group = s.group;
  f.values = s.coeffs;
  for (std::size_t axis = 0; axis < s.group.arity(); ++axis)
    dftdetail::transform_axis(f.values, s.group, axis, +1);
  return f;
}

}  // namespace gowers
