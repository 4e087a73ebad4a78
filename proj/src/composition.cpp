#include "lrquench/composition.hpp"

#include <cmath>

#include "lrquench/errors.hpp"

namespace lrq {

std::vector<double> composition_weights(int order) {
  if (order < 2 || order % 2 != 0) throw InvalidArgument("composition order must be even and >= 2");
  if (order == 2) return {1.0};
  const std::vector<double> inner = composition_weights(order - 2);
  const double p = order - 1;
  const double w1 = 1.0 / (2.0 - std::pow(2.0, 1.0 / p));
  const double w0 = 1.0 - 2.0 * w1;
  std::vector<double> out;
  out.reserve(3 * inner.size());
  for (double w : {w1, w0, w1}) {
    for (double x : inner) out.push_back(w * x);
  }
  return out;
}

}  // namespace lrq
