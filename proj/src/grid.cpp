#include "karamata/grid.hpp"

#include <cmath>
#include <string>

#include "karamata/errors.hpp"

namespace karamata {

void GeometricGrid::validate() const {
  if (!(start > 1.0) || !std::isfinite(start))
    throw PreconditionError("grid start must be finite and > 1");
  if (count == 0) throw PreconditionError("grid count must be positive");
  if (integer_mode) {
    if (std::ceil(start) + static_cast<double>(count) > 9007199254740992.0)
      throw PreconditionError("integer grid exceeds the exactly representable integers");
    return;
  }
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw PreconditionError("grid ratio must be > 1");
  if (!std::isfinite(start * std::pow(ratio, static_cast<double>(count - 1))))
    throw PreconditionError("grid overflows: start * ratio^(count-1) is not finite");
}

std::vector<double> GeometricGrid::points() const {
  validate();
  std::vector<double> xs(count);
  const double first = std::ceil(start);
  for (std::size_t k = 0; k < count; ++k)
    xs[k] = integer_mode ? first + static_cast<double>(k)
                         : start * std::pow(ratio, static_cast<double>(k));
  return xs;
}

}  // namespace karamata
