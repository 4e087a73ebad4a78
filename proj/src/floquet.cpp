#include "lrquench/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "lrquench/composition.hpp"
#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"

namespace lrq {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::kStable:
      return "stable";
    case Stability::kResonant:
      return "resonant";
    case Stability::kMarginal:
      return "marginal";
  }
  return "unknown";
}

Monodromy monodromy(const std::function<double(double)>& a, double T, std::size_t steps, int order) {
  if (!(T > 0.0) || steps == 0) throw InvalidArgument("monodromy: need T > 0 and steps > 0");
  const std::vector<double> weights = composition_weights(order);
  const double dt = T / static_cast<double>(steps);
  double x1 = 1.0, v1 = 0.0, x2 = 0.0, v2 = 1.0;
  double t = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    composed_step(weights, dt, [&](double h) {
      double c = a(t);
      v1 -= 0.5 * h * c * x1;
      v2 -= 0.5 * h * c * x2;
      x1 += h * v1;
      x2 += h * v2;
      t += h;
      c = a(t);
      v1 -= 0.5 * h * c * x1;
      v2 -= 0.5 * h * c * x2;
    });
    t = dt * static_cast<double>(k + 1);
  }
  Monodromy out;
  out.C << x1, x2, v1, v2;
  out.period = T;
  return out;
}

double Monodromy::det_deviation() const {
  const double scale = std::abs(C(0, 0) * C(1, 1)) + std::abs(C(0, 1) * C(1, 0));
  return std::abs(det() - 1.0) / std::max(1.0, scale);
}

StabilityClass classify(const Monodromy& mono, double eta) {
  if (!(mono.det_deviation() <= 1e-6)) {
    std::ostringstream msg;
    msg << "monodromy determinant " << mono.det() << " is not 1";
    throw InvalidMonodromy(msg.str());
  }
  StabilityClass out;
  out.trace = mono.trace();
  const double abs_trace = std::abs(out.trace);
  if (abs_trace > 2.0 + eta) {
    out.kind = Stability::kResonant;
    out.rate = std::acosh(0.5 * abs_trace) / mono.period;
  } else if (abs_trace < 2.0 - eta) {
    out.kind = Stability::kStable;
    out.rate = std::acos(0.5 * out.trace) / mono.period;
  } else {
    out.kind = Stability::kMarginal;
    out.rate = 0.0;
  }
  return out;
}

std::vector<ModeStability> mode_stabilities(const ClassicalOrbit& orbit,
                                            std::span<const double> omega_sq,
                                            const FloquetOptions& options) {
  const std::size_t n = omega_sq.size();
  std::vector<ModeStability> out(n);
  const double mu_low = orbit.degenerate ? orbit.mu0 : orbit.mu_minus;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    out[i].m = static_cast<long>(i);
    out[i].omega_sq = omega_sq[i];
    if (options.positivity_filter && mu_low + omega_sq[i] > 0.0) {
      out[i].filtered = true;
      out[i].stability.kind = Stability::kStable;
      out[i].stability.rate = std::nan("");
      out[i].stability.trace = std::nan("");
    } else {
      active.push_back(i);
    }
  }
  if (active.empty()) return out;

  const std::size_t k = active.size();
  std::vector<double> w(k), x1(k, 1.0), v1(k, 0.0), x2(k, 0.0), v2(k, 1.0);
  for (std::size_t j = 0; j < k; ++j) w[j] = omega_sq[active[j]];
  const auto& params = orbit.params;
  double mu = orbit.mu0;
  double p = orbit.mudot0;
  auto force = [&](double m) { return orbit.degenerate ? 0.0 : potential_derivative(m, params); };
  auto kick = [&](double h) {
    p -= h * force(mu);
    for (std::size_t j = 0; j < k; ++j) {
      const double c = h * (mu + w[j]);
      v1[j] -= c * x1[j];
      v2[j] -= c * x2[j];
    }
  };
  const std::vector<double> weights = composition_weights(options.order);
  const double dt = orbit.period / static_cast<double>(options.steps_per_period);
  for (std::size_t s = 0; s < options.steps_per_period; ++s) {
    composed_step(weights, dt, [&](double h) {
      kick(0.5 * h);
      if (!orbit.degenerate) mu += h * p;
      for (std::size_t j = 0; j < k; ++j) {
        x1[j] += h * v1[j];
        x2[j] += h * v2[j];
      }
      kick(0.5 * h);
    });
  }
  for (std::size_t j = 0; j < k; ++j) {
    Monodromy mono;
    mono.C << x1[j], x2[j], v1[j], v2[j];
    mono.period = orbit.period;
    auto& rec = out[active[j]];
    rec.det_deviation = mono.det_deviation();
    rec.stability = classify(mono, options.eta);
  }
  return out;
}

ModeStability mode_stability(const ClassicalOrbit& orbit, double omega_sq,
                             const FloquetOptions& options) {
  const double w[1] = {omega_sq};
  ModeStability out = mode_stabilities(orbit, w, options).front();
  return out;
}

ResonanceScan count_resonances(const ClassicalOrbit& orbit, std::span<const double> omega_sq,
                               const FloquetOptions& options) {
  ResonanceScan scan;
  scan.modes = mode_stabilities(orbit, omega_sq, options);
  for (const auto& rec : scan.modes) {
    scan.max_det_deviation = std::max(scan.max_det_deviation, rec.det_deviation);
    if (rec.stability.kind == Stability::kResonant) scan.resonant.push_back(rec.m);
    if (rec.stability.kind == Stability::kMarginal) scan.marginal.push_back(rec.m);
  }
  return scan;
}

ResonanceScan count_resonances(const ClassicalOrbit& orbit, const DispersionTable& table,
                               long m_max, const FloquetOptions& options) {
  if (m_max < 0) throw InvalidArgument("count_resonances: m_max must be non-negative");
  const auto last = std::min<std::size_t>(static_cast<std::size_t>(m_max), table.size() - 1);
  return count_resonances(orbit, std::span<const double>(table.omega_sq.data(), last + 1), options);
}

std::vector<double> continuum_frequencies(double alpha, long m_max) {
  if (m_max < 0) throw InvalidArgument("continuum_frequencies: m_max must be non-negative");
  std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
  for (long m = 0; m <= m_max; ++m) out[static_cast<std::size_t>(m)] = continuum_dispersion(alpha, m);
  return out;
}

void write_csv(std::ostream& out, const ResonanceScan& scan) {
  out << "m,omega_sq,trace_C,class,kappa_or_quasifreq\n";
  for (const auto& rec : scan.modes) {
    out << rec.m << ',' << format_double(rec.omega_sq) << ',' << format_double(rec.stability.trace)
        << ',' << (rec.filtered ? std::string("filtered") : to_string(rec.stability.kind)) << ','
        << format_double(rec.stability.rate) << '\n';
  }
}

}  // namespace lrq
