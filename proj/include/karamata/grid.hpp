#pragma once

#include <cstddef>
#include <vector>

namespace karamata {

struct Sample {
  double x;
  double value;
};

/// Sampling schedule for x -> ∞ diagnostics: x_k = start * ratio^k, or the
/// consecutive integers ceil(start), ceil(start) + 1, ... in integer mode.
struct GeometricGrid {
  double start = 10.0;
  double ratio = 10.0;
  std::size_t count = 8;
  bool integer_mode = false;

  static GeometricGrid geometric(double start, double ratio, std::size_t count) {
    return {start, ratio, count, false};
  }
  static GeometricGrid integers(double start, std::size_t count) {
    return {start, 2.0, count, true};
  }

  void validate() const;
  std::vector<double> points() const;
};

}  // namespace karamata
