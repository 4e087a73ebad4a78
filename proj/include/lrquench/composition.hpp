#pragma once

#include <vector>

namespace lrq {

/// Step fractions of the symmetric triple-jump composition of a second-order
/// symmetric base method. order must be even and >= 2; order 2 returns {1}.
std::vector<double> composition_weights(int order);

/// Applies base(fraction * h) for every composition weight.
template <class Base>
void composed_step(const std::vector<double>& weights, double h, const Base& base) {
  for (double w : weights) base(w * h);
}

}  // namespace lrq
