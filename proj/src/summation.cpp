#include "lrquench/summation.hpp"

namespace lrq {

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace lrq
