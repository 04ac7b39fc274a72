#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gowers {

using cd = std::complex<double>;

// Global comparison tolerances (configurable per call where it matters).
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

// Error taxonomy, mapped onto CLI exit codes: argument -> 2, resource -> 3,
// io -> 4.  Structural errors (mismatched groups, wrong dimensions) are a
// flavor of argument error with their own type so tests can distinguish them.
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct structural_error : argument_error {
  using argument_error::argument_error;
};

struct resource_error : std::runtime_error {
  double estimated_cost;
  explicit resource_error(const std::string& msg, double est = 0.0)
      : std::runtime_error(msg), estimated_cost(est) {}
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Neumaier compensated summation; used for the long fixed-order reductions so
// exact-mode values stay well inside the 1e-9 comparison tolerance.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(cd z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cd value() const { return {re.value(), im.value()}; }
};

inline bool approx_eq(double a, double b, double rel = kRelTol, double abs = kAbsTol) {
  double diff = std::abs(a - b);
  return diff <= abs || diff <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace gowers
