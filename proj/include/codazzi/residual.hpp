#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace codazzi {

/// A residual in the scale-normalized max norm: the raw max-abs violation of
/// an identity together with raw / (1 + max-abs of the identity's inputs).
struct Residual {
  double raw = 0.0;
  double normalized = 0.0;
};

inline Residual make_residual(double raw, std::initializer_list<double> input_scales) {
  double scale = 0.0;
  for (double s : input_scales) scale = std::max(scale, std::fabs(s));
  return Residual{raw, raw / (1.0 + scale)};
}

constexpr double kDefaultTolerance = 1e-8;

}  // namespace codazzi
