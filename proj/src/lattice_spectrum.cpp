#include "lrquench/lattice_spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"
#include "lrquench/quadrature.hpp"

namespace lrq {
namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct FftwFree {
  void operator()(double* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<double[], FftwFree>;

struct PlanDestroy {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie strictly between 0 and 1, got " << alpha;
    throw InvalidArgument(msg.str());
  }
}

// T(m) = sum_{r=1}^{N/2} w_r cos(2 pi m r / N) for m = 0..N/2 via a DCT-I of
// length N/2 + 1.
std::vector<double> cosine_sums(const std::vector<double>& w, std::size_t N) {
  const std::size_t half = N / 2;
  const std::size_t n = half + 1;
  FftwBuffer in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  FftwBuffer out(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  if (!in || !out) throw NumericalError("fftw_malloc failed");
  Plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.reset(fftw_plan_r2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_REDFT00,
                                FFTW_ESTIMATE));
  }
  if (!plan) throw NumericalError("FFTW planning failed");
  in[0] = 0.0;
  for (std::size_t j = 1; j < half; ++j) in[j] = 0.5 * w[j];
  in[half] = w[half];
  fftw_execute(plan.get());
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace

std::string describe(const CouplingKind& kind) {
  struct Visitor {
    std::string operator()(const StrongLongRange& s) const {
      return "strong-long-range(alpha=" + format_double(s.alpha) + ")";
    }
    std::string operator()(const Flat&) const { return "flat"; }
    std::string operator()(const NearestNeighbor&) const { return "nearest-neighbor"; }
  };
  return std::visit(Visitor{}, kind);
}

double DispersionTable::momentum(std::size_t m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(N);
}

DispersionTable build_dispersion(const CouplingKind& kind, std::size_t N) {
  if (N < 4 || N % 2 != 0) {
    std::ostringstream msg;
    msg << "N must be even and at least 4, got " << N;
    throw InvalidArgument(msg.str());
  }
  const std::size_t half = N / 2;
  DispersionTable table;
  table.kind = kind;
  table.N = N;
  table.omega_sq.assign(half + 1, 0.0);
  table.degeneracy.assign(half + 1, 2);
  table.degeneracy.front() = 1;
  table.degeneracy.back() = 1;

  if (const auto* slr = std::get_if<StrongLongRange>(&kind)) {
    check_alpha(slr->alpha);
    std::vector<double> w(half + 1, 0.0);
    for (std::size_t r = 1; r <= half; ++r) w[r] = std::pow(static_cast<double>(r), -slr->alpha);
    const std::vector<double> t = cosine_sums(w, N);
    table.kac_norm = t[0];
    for (std::size_t m = 1; m <= half; ++m) table.omega_sq[m] = 1.0 - t[m] / t[0];
  } else if (std::holds_alternative<NearestNeighbor>(kind)) {
    table.kac_norm = 1.0;
    for (std::size_t m = 1; m <= half; ++m) table.omega_sq[m] = 1.0 - std::cos(table.momentum(m));
    table.omega_sq[half] = 2.0;
  } else {
    table.kac_norm = static_cast<double>(half);
    for (std::size_t m = 1; m <= half; ++m) table.omega_sq[m] = 1.0;
  }
  table.omega_sq[0] = 0.0;
  return table;
}

double continuum_dispersion(double alpha, long m, double abs_tol) {
  check_alpha(alpha);
  if (m == 0) return 0.0;
  const double mm = static_cast<double>(m < 0 ? -m : m);
  // With u = s^{1-alpha} the weight s^{-alpha} ds becomes du / (1 - alpha), and
  // omega^2 = 1 - <cos(2 pi m u^p)> over u in [0, U].
  const double p = 1.0 / (1.0 - alpha);
  const double upper = std::pow(2.0, -(1.0 - alpha));
  const double w = 2.0 * std::numbers::pi * mm;
  QuadratureOptions options;
  options.abs_tol = abs_tol * upper;
  options.initial_pieces = static_cast<int>(std::min(4.0 * mm + 4.0, 1.0e6));
  options.max_intervals = options.initial_pieces + 20000;
  const QuadratureResult res =
      integrate_gk15([&](double u) { return std::cos(w * std::pow(u, p)); }, 0.0, upper, options);
  return 1.0 - res.value / upper;
}

double spectral_average(std::span<const double> values, const DispersionTable& table) {
  if (values.size() != table.size()) {
    std::ostringstream msg;
    msg << "spectral_average: expected " << table.size() << " values, got " << values.size();
    throw InvalidArgument(msg.str());
  }
  const double total =
      pairwise_sum(values.size(), [&](std::size_t m) { return table.degeneracy[m] * values[m]; });
  return total / static_cast<double>(table.N);
}

double correction_exponent(double alpha) {
  check_alpha(alpha);
  return std::min(1.0, 2.0 - 2.0 * alpha);
}

void write_csv(std::ostream& out, const DispersionTable& table) {
  out << "m,k,omega_sq,degeneracy\n";
  for (std::size_t m = 0; m < table.size(); ++m) {
    out << m << ',' << format_double(table.momentum(m)) << ',' << format_double(table.omega_sq[m])
        << ',' << table.degeneracy[m] << '\n';
  }
}

}  // namespace lrq
