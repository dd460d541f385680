#pragma once

// Independent reference values used by the test suites. Nothing here calls
// into the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace oracle {

/// Sine integral Si(x) for x >= 0: power series below 2, Lentz continued
/// fraction for E1(ix) above.
inline double sine_integral(double x) {
  using ld = long double;
  const ld t = x;
  if (t <= 2.0L) {
    ld term = t, sum = t;
    for (int k = 1; k < 60; ++k) {
      term *= -t * t / ((2.0L * k) * (2.0L * k + 1.0L));
      const ld add = term / (2.0L * k + 1.0L);
      sum += add;
      if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
  }
  using cx = std::complex<ld>;
  const ld tiny = 1e-300L;
  cx b(1.0L, t);
  cx c(1.0L / tiny, 0.0L);
  cx d = 1.0L / b;
  cx h = d;
  for (int i = 2; i < 100000; ++i) {
    const ld a = -static_cast<ld>(i - 1) * static_cast<ld>(i - 1);
    b += 2.0L;
    d = 1.0L / (a * d + b);
    c = b + a / c;
    const cx del = c * d;
    h *= del;
    if (std::fabs(del.real() - 1.0L) + std::fabs(del.imag()) < 1e-19L) break;
  }
  h *= cx(std::cos(t), -std::sin(t));
  return static_cast<double>(std::numbers::pi_v<ld> / 2 + h.imag());
}

/// Halton radical inverse, used by tests that need their own low-discrepancy
/// points.
inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace oracle
