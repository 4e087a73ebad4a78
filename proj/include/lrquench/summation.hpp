#pragma once

#include <cstddef>
#include <span>

namespace lrq {

/// Pairwise (tree) summation with a fixed split rule.
///
/// The split points depend only on the length, so the result is the same
/// for any caller and any thread count. Error grows as O(eps log n).
double pairwise_sum(std::span<const double> values);

/// Pairwise summation of term(0) + ... + term(n-1) without materialising
/// the terms.
template <class Term>
double pairwise_sum(std::size_t n, const Term& term) {
  constexpr std::size_t kLeaf = 16;
  if (n <= kLeaf) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += term(i);
    return acc;
  }
  struct Rec {
    const Term& term;
    double operator()(std::size_t lo, std::size_t hi) const {
      const std::size_t len = hi - lo;
      if (len <= kLeaf) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        return acc;
      }
      const std::size_t mid = lo + len / 2;
      return (*this)(lo, mid) + (*this)(mid, hi);
    }
  };
  return Rec{term}(0, n);
}

}  // namespace lrq
