#include "lrquench/effective_classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lrquench/composition.hpp"
#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"
#include "lrquench/quadrature.hpp"
#include "lrquench/summation.hpp"

namespace lrq {
namespace {

// Root of h on [lo, hi] with h(lo), h(hi) of opposite sign, bisected until
// the bracket stops shrinking.
template <class H>
double bisect(const H& h, double lo, double hi) {
  const bool lo_negative = h(lo) < 0.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ((h(mid) < 0.0) == lo_negative ? lo : hi) = mid;
  }
  return std::abs(h(lo)) <= std::abs(h(hi)) ? lo : hi;
}

double mode_mass(const ReducedModel& m, const ModeEntry& e) {
  return 4.0 * m.lambda * e.occupation() * (1.0 - e.omega_sq) / static_cast<double>(m.N);
}

}  // namespace

double potential(double mu, const ClassicalParams& p) {
  const double x = mu - p.r;
  return x * (mu * mu - 2.0 * p.epsilon) + 2.0 * x * x;
}

double potential_derivative(double mu, const ClassicalParams& p) {
  return 3.0 * mu * mu - 2.0 * p.r * mu - 2.0 * p.epsilon + 4.0 * (mu - p.r);
}

double potential_second_derivative(double mu, const ClassicalParams& p) {
  return 6.0 * mu - 2.0 * p.r + 4.0;
}

double potential_minimum(const ClassicalParams& p) {
  // 3 mu^2 + (4 - 2r) mu - (2 eps + 4r) = 0
  const double b = 4.0 - 2.0 * p.r;
  const double c = -(2.0 * p.epsilon + 4.0 * p.r);
  const double disc = b * b - 12.0 * c;
  if (disc < 0.0) throw NonPeriodicError("potential has no local minimum");
  return (-b + std::sqrt(disc)) / 6.0;
}

double ClassicalOrbit::mu_at(double time) const {
  if (degenerate || t.size() < 2) return mu.empty() ? mu0 : mu.front();
  double x = std::fmod(time, period);
  if (x < 0.0) x += period;
  const std::size_t n = t.size() - 1;
  const double h = period / static_cast<double>(n);
  auto i = static_cast<std::size_t>(x / h);
  if (i >= n) i = n - 1;
  const double s = (x - t[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * mu[i] + h10 * h * mudot[i] + h01 * mu[i + 1] + h11 * h * mudot[i + 1];
}

ClassicalOrbit make_orbit(const ClassicalParams& params, double mu0, double mudot0,
                          const OrbitOptions& options) {
  if (!(mu0 > params.r)) throw InvalidArgument("make_orbit: mu0 must exceed r");
  ClassicalOrbit orbit;
  orbit.params = params;
  orbit.mu0 = mu0;
  orbit.mudot0 = mudot0;
  orbit.energy = 0.5 * mudot0 * mudot0 + potential(mu0, params);
  if (orbit.energy > 0.0) {
    std::ostringstream msg;
    msg << "classical energy " << orbit.energy << " > 0: the effective-mass motion is unbounded";
    throw NonPeriodicError(msg.str());
  }
  const double E = orbit.energy;
  const double mu_min = potential_minimum(params);
  auto h = [&](double mu) { return potential(mu, params) - E; };
  double hi_edge = std::max(mu0, mu_min) + 1.0;
  while (h(hi_edge) <= 0.0) hi_edge = mu_min + 2.0 * (hi_edge - mu_min);
  const double at_min = h(mu_min);
  if (at_min >= 0.0) {
    orbit.mu_minus = orbit.mu_plus = mu_min;
  } else {
    orbit.mu_minus = h(params.r) > 0.0 ? bisect(h, params.r, mu_min) : params.r;
    orbit.mu_plus = bisect(h, mu_min, hi_edge);
  }

  const double width = orbit.mu_plus - orbit.mu_minus;
  const std::size_t n = std::max<std::size_t>(options.samples, 8);
  if (width < options.degenerate_width) {
    orbit.degenerate = true;
    orbit.period = 2.0 * std::numbers::pi / std::sqrt(potential_second_derivative(mu_min, params));
    orbit.t.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) orbit.t[i] = orbit.period * static_cast<double>(i) / n;
    orbit.mu.assign(n + 1, mu0);
    orbit.mudot.assign(n + 1, 0.0);
    return orbit;
  }

  const double mu3 = params.r - 2.0 - orbit.mu_minus - orbit.mu_plus;
  QuadratureOptions qopt;
  qopt.abs_tol = 1e-14;
  qopt.rel_tol = 1e-14;
  const auto res = integrate_gk15(
      [&](double phi) {
        const double s = std::sin(phi);
        const double mu = orbit.mu_minus + width * s * s;
        return 1.0 / std::sqrt(2.0 * (mu - mu3));
      },
      0.0, 0.5 * std::numbers::pi, qopt);
  orbit.period = 4.0 * res.value;

  const std::vector<double> weights = composition_weights(options.order);
  const double dt = orbit.period / static_cast<double>(n);
  double mu = mu0;
  double p = mudot0;
  orbit.t.resize(n + 1);
  orbit.mu.resize(n + 1);
  orbit.mudot.resize(n + 1);
  orbit.t[0] = 0.0;
  orbit.mu[0] = mu;
  orbit.mudot[0] = p;
  for (std::size_t i = 1; i <= n; ++i) {
    composed_step(weights, dt, [&](double hh) {
      p -= 0.5 * hh * potential_derivative(mu, params);
      mu += hh * p;
      p -= 0.5 * hh * potential_derivative(mu, params);
    });
    orbit.t[i] = dt * static_cast<double>(i);
    orbit.mu[i] = mu;
    orbit.mudot[i] = p;
  }
  orbit.periodicity_error = std::abs(mu - mu0) + std::abs(p - mudot0);
  return orbit;
}

double integrated_return_time(const ClassicalOrbit& orbit, std::size_t steps_per_period) {
  if (orbit.degenerate) return orbit.period;
  const auto& params = orbit.params;
  const std::vector<double> weights = composition_weights(6);
  const double dt = orbit.period / static_cast<double>(steps_per_period);
  double mu = orbit.mu_minus;
  double p = 0.0;
  double t = 0.0;
  int crossings = 0;
  const std::size_t limit = 3 * steps_per_period;
  for (std::size_t i = 0; i < limit; ++i) {
    const double mu_prev = mu;
    const double p_prev = p;
    composed_step(weights, dt, [&](double hh) {
      p -= 0.5 * hh * potential_derivative(mu, params);
      mu += hh * p;
      p -= 0.5 * hh * potential_derivative(mu, params);
    });
    // Sign change of p: first at the upper turning point, then back at the lower one.
    if ((p_prev > 0.0 && p <= 0.0) || (p_prev < 0.0 && p >= 0.0)) {
      ++crossings;
      if (crossings == 2) {
        // Cubic Hermite model of p on the step, slopes from -V'(mu).
        const double a0 = -potential_derivative(mu_prev, params) * dt;
        const double a1 = -potential_derivative(mu, params) * dt;
        auto ph = [&](double s) {
          const double s2 = s * s;
          const double s3 = s2 * s;
          return (2 * s3 - 3 * s2 + 1) * p_prev + (s3 - 2 * s2 + s) * a0 + (-2 * s3 + 3 * s2) * p +
                 (s3 - s2) * a1;
        };
        const double s = bisect(ph, 0.0, 1.0);
        return t + s * dt;
      }
    }
    t += dt;
  }
  throw NumericalError("integrated_return_time: orbit did not close");
}

double reduced_energy(const ReducedModel& model, double mu, double mudot,
                      const std::vector<ModeEntry>& modes) {
  const double modes_part = pairwise_sum(modes.size(), [&](std::size_t i) {
    const auto& e = modes[i];
    return 0.5 * static_cast<double>(e.degeneracy) * mode_mass(model, e) *
           (std::norm(e.fdot) + (mu + e.omega_sq) * std::norm(e.f));
  });
  return 0.5 * mudot * mudot + potential(mu, model.params) - modes_part;
}

ReducedTrajectory evolve_reduced(const ReducedModel& model, double t_end,
                                 const ReducedOptions& options) {
  if (!(options.dt > 0.0)) throw InvalidArgument("evolve_reduced: dt must be positive");
  if (options.sample_every == 0) throw InvalidArgument("evolve_reduced: sample_every must be positive");
  if (t_end < 0.0) throw InvalidArgument("evolve_reduced: t_end must be non-negative");
  const std::vector<double> weights = composition_weights(options.order);
  std::vector<ModeEntry> modes = model.modes;
  std::vector<double> coef(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    coef[i] = 0.5 * static_cast<double>(modes[i].degeneracy) * mode_mass(model, modes[i]);
  }
  double mu = model.mu0;
  double p = model.mudot0;

  ReducedTrajectory out;
  out.energy = reduced_energy(model, mu, p, modes);
  out.mode_norms.resize(modes.size());
  auto sample = [&](double t) {
    out.times.push_back(t);
    out.mu.push_back(mu);
    out.mudot.push_back(p);
    for (std::size_t i = 0; i < modes.size(); ++i) out.mode_norms[i].push_back(std::norm(modes[i].f));
    const double e = reduced_energy(model, mu, p, modes);
    const double drift = std::abs(e - out.energy) / std::max(std::abs(out.energy), 1e-300);
    out.max_rel_energy_drift = std::max(out.max_rel_energy_drift, drift);
  };
  auto kick = [&](double hh) {
    double g = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) g += coef[i] * std::norm(modes[i].f);
    p += hh * (-potential_derivative(mu, model.params) + g);
    for (auto& e : modes) e.fdot -= hh * (mu + e.omega_sq) * e.f;
  };
  auto base = [&](double hh) {
    kick(0.5 * hh);
    mu += hh * p;
    for (auto& e : modes) e.f += hh * e.fdot;
    kick(0.5 * hh);
  };

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / options.dt - 1e-9));
  sample(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    composed_step(weights, options.dt, base);
    if (!std::isfinite(mu)) {
      std::ostringstream msg;
      msg << "reduced model left the representable range at t = " << k * options.dt;
      throw NumericalError(msg.str());
    }
    if (k % options.sample_every == 0 || k == steps) sample(static_cast<double>(k) * options.dt);
  }
  return out;
}

ReducedModel reduce(const SystemState& state, const std::vector<long>& tracked) {
  ReducedModel model;
  model.params = {state.r, energy_per_particle(state)};
  model.lambda = state.lambda;
  model.N = state.N;
  model.mu0 = effective_mass(state);
  model.mudot0 = effective_mass_rate(state);
  for (long m : tracked) {
    const ModeEntry* e = state.find_mode(m);
    if (!e) throw InvalidArgument("reduce: mode " + std::to_string(m) + " is not present");
    model.modes.push_back(*e);
  }
  return model;
}

void write_csv(std::ostream& out, const ClassicalOrbit& orbit) {
  out << "# mu_minus=" << format_double(orbit.mu_minus) << " mu_plus=" << format_double(orbit.mu_plus)
      << " period=" << format_double(orbit.period) << " energy=" << format_double(orbit.energy)
      << '\n';
  out << "t,mu,mudot\n";
  for (std::size_t i = 0; i < orbit.t.size(); ++i) {
    out << format_double(orbit.t[i]) << ',' << format_double(orbit.mu[i]) << ','
        << format_double(orbit.mudot[i]) << '\n';
  }
}

}  // namespace lrq
