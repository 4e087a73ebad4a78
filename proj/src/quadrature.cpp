#include "lrquench/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "lrquench/errors.hpp"
#include "lrquench/summation.hpp"

namespace lrq {
namespace {

// Kronrod abscissae (descending) and weights; odd indices are the 7-point
// Gauss abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options) {
  const int pieces = std::max(1, options.initial_pieces);
  std::priority_queue<Piece> heap;
  const double width = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == pieces) ? b : a + (i + 1) * width;
    heap.push(gk15(f, lo, hi));
  }

  auto totals = [&heap]() {
    std::vector<Piece> all;
    auto copy = heap;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    // Fixed order so the sum does not depend on heap internals.
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    const double value = pairwise_sum(all.size(), [&](std::size_t i) { return all[i].value; });
    const double error = pairwise_sum(all.size(), [&](std::size_t i) { return all[i].error; });
    return std::pair{value, error};
  };

  double error_sum = 0.0;
  double value_sum = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      error_sum += copy.top().error;
      value_sum += copy.top().value;
      copy.pop();
    }
  }

  auto converged = [&](double value, double error) {
    return error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
  };

  while (!converged(value_sum, error_sum)) {
    if (static_cast<int>(heap.size()) >= options.max_intervals) {
      const auto [value, error] = totals();
      if (converged(value, error)) return {value, error, static_cast<int>(heap.size())};
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << error
          << " after " << heap.size() << " intervals";
      throw QuadratureError(msg.str(), error);
    }
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left = gk15(f, worst.a, mid);
    const Piece right = gk15(f, mid, worst.b);
    error_sum += left.error + right.error - worst.error;
    value_sum += left.value + right.value - worst.value;
    heap.push(left);
    heap.push(right);
  }
  const auto [value, error] = totals();
  return {value, error, static_cast<int>(heap.size())};
}

}  // namespace lrq
