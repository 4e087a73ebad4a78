#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lrquench/summation.hpp"

using lrq::pairwise_sum;

TEST_CASE("pairwise sum of integers is exact") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
}

TEST_CASE("empty and short inputs") {
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{2.5}) == 2.5);
}

TEST_CASE("pairwise sum beats naive accumulation on many small terms") {
  const std::size_t n = 1000000;
  const long double exact = static_cast<long double>(n) * 0.1L;
  double naive = 0.0;
  for (std::size_t i = 0; i < n; ++i) naive += 0.1;
  const double tree = pairwise_sum(n, [](std::size_t) { return 0.1; });
  const double err_tree = std::fabs(static_cast<double>(tree - exact));
  const double err_naive = std::fabs(static_cast<double>(naive - exact));
  CHECK(err_tree < 1e-9);
  CHECK(err_tree < err_naive);
}

TEST_CASE("result depends only on the terms, not on the caller") {
  std::vector<double> v(4097);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i)) * 1e3;
  const double a = pairwise_sum(v);
  const double b = pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
  CHECK(a == b);
}
