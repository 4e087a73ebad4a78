#include "lrquench/phase_diagram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"

namespace lrq {
namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("scan: every axis needs at least one point");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

std::string to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::kNonPhysical:
      return "nonphysical";
    case PhaseClass::kClassical:
      return "classical";
    case PhaseClass::kResonantZero:
      return "resonant-zero";
    case PhaseClass::kMultiResonant:
      return "multi-resonant";
    case PhaseClass::kMarginalBoundary:
      return "marginal-boundary";
  }
  return "unknown";
}

PhasePoint classify_point(double r, std::span<const double> omega_sq, double epsilon, double mu0,
                          double mudot0, const PhaseOptions& options) {
  PhasePoint pt;
  pt.epsilon = epsilon;
  pt.mu0 = mu0;
  const ClassicalParams params{r, epsilon};
  if (!(mu0 > r) || !(mu0 * mu0 < 2.0 * epsilon)) return pt;
  if (0.5 * mudot0 * mudot0 + potential(mu0, params) > 0.0) return pt;
  const double b = 4.0 - 2.0 * r;
  if (b * b + 12.0 * (2.0 * epsilon + 4.0 * r) < 0.0) return pt;
  if (mu0 > potential_minimum(params)) return pt;

  OrbitOptions oopt;
  oopt.samples = 64;
  const ClassicalOrbit orbit = make_orbit(params, mu0, mudot0, oopt);
  FloquetOptions fopt;
  fopt.eta = options.eta;
  fopt.steps_per_period =
      std::max(options.min_steps, static_cast<std::size_t>(std::ceil(orbit.period / options.dt)));
  const std::size_t count = std::min<std::size_t>(omega_sq.size(), static_cast<std::size_t>(options.m_max) + 1);
  const ResonanceScan res = count_resonances(orbit, omega_sq.first(count), fopt);
  pt.max_det_deviation = res.max_det_deviation;
  pt.resonant_count = static_cast<int>(res.resonant.size());
  if (!res.resonant.empty()) {
    pt.lowest_resonant = res.resonant.front();
    pt.saturated = res.resonant.back() == static_cast<long>(count) - 1;
  }
  if (!res.marginal.empty()) {
    pt.cls = PhaseClass::kMarginalBoundary;
  } else if (res.resonant.empty()) {
    pt.cls = PhaseClass::kClassical;
  } else if (res.resonant.size() == 1 && res.resonant.front() == 0) {
    pt.cls = PhaseClass::kResonantZero;
  } else {
    pt.cls = PhaseClass::kMultiResonant;
  }
  return pt;
}

PhasePoint classify_point(double r, double alpha, double epsilon, double mu0,
                          const PhaseOptions& options) {
  const std::vector<double> freqs = continuum_frequencies(alpha, options.m_max);
  return classify_point(r, freqs, epsilon, mu0, 0.0, options);
}

PhaseGrid scan(double r, std::span<const double> omega_sq, const ScanAxes& axes,
               const PhaseOptions& options, unsigned threads) {
  PhaseGrid grid;
  grid.r = r;
  grid.options = options;
  grid.epsilons = linspace(axes.eps_lo, axes.eps_hi, axes.eps_points);
  grid.mu0s = linspace(axes.mu0_lo, axes.mu0_hi, axes.mu0_points);
  const std::size_t total = grid.epsilons.size() * grid.mu0s.size();
  grid.cells.resize(total);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total || failed.load()) return;
      try {
        const std::size_t ie = idx / grid.mu0s.size();
        const std::size_t im = idx % grid.mu0s.size();
        grid.cells[idx] = classify_point(r, omega_sq, grid.epsilons[ie], grid.mu0s[im], 0.0, options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

PhaseGrid scan(double r, double alpha, const ScanAxes& axes, const PhaseOptions& options,
               unsigned threads) {
  const std::vector<double> freqs = continuum_frequencies(alpha, options.m_max);
  PhaseGrid grid = scan(r, std::span<const double>(freqs), axes, options, threads);
  grid.alpha = alpha;
  return grid;
}

void write_csv(std::ostream& out, const PhaseGrid& grid) {
  out << "epsilon,mu0,class_code,resonant_count\n";
  for (const auto& c : grid.cells) {
    out << format_double(c.epsilon) << ',' << format_double(c.mu0) << ',' << static_cast<int>(c.cls)
        << ',' << c.resonant_count << '\n';
  }
}

std::string sidecar_json(const PhaseGrid& grid) {
  nlohmann::ordered_json j;
  j["r"] = grid.r;
  j["alpha"] = grid.alpha;
  j["epsilon_range"] = {grid.epsilons.front(), grid.epsilons.back()};
  j["mu0_range"] = {grid.mu0s.front(), grid.mu0s.back()};
  j["epsilon_points"] = grid.epsilons.size();
  j["mu0_points"] = grid.mu0s.size();
  j["m_max"] = grid.options.m_max;
  j["dt"] = grid.options.dt;
  j["eta"] = grid.options.eta;
  j["mudot0"] = 0.0;
  nlohmann::ordered_json classes;
  for (int c = 0; c <= 4; ++c) classes[std::to_string(c)] = to_string(static_cast<PhaseClass>(c));
  j["class_codes"] = classes;
  std::size_t saturated = 0;
  double max_det = 0.0;
  for (const auto& c : grid.cells) {
    saturated += c.saturated ? 1 : 0;
    max_det = std::max(max_det, c.max_det_deviation);
  }
  j["saturated_cells"] = saturated;
  j["max_det_deviation"] = max_det;
  return j.dump(2) + "\n";
}

}  // namespace lrq
