#include "lrquench/mode_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"
#include "lrquench/summation.hpp"

namespace lrq {
namespace {

double coupling(const SystemState& s) { return s.lambda / (2.0 * static_cast<double>(s.N)); }

template <class Term>
double mode_sum(const std::vector<ModeEntry>& modes, const Term& term) {
  return pairwise_sum(modes.size(), [&](std::size_t i) { return term(modes[i]); });
}

double weight(const ModeEntry& e) { return static_cast<double>(e.degeneracy) * e.occupation(); }

// Exact flow of x'' = -w x over dt.
struct Flow {
  double c, s_over, minus_ws;  // x' = c x + s_over v;  v' = minus_ws x + c v
};

Flow flow_coefficients(double w, double dt) {
  if (w > 0.0) {
    const double s = std::sqrt(w);
    const double sn = std::sin(s * dt);
    return {std::cos(s * dt), sn / s, -s * sn};
  }
  if (w < 0.0) {
    const double s = std::sqrt(-w);
    const double sh = std::sinh(s * dt);
    return {std::cosh(s * dt), sh / s, s * sh};
  }
  return {1.0, dt, 0.0};
}

void check_finite(const SystemState& s, double mu) {
  if (!std::isfinite(mu)) {
    std::ostringstream msg;
    msg << "mode amplitudes left the representable range at t = " << s.time;
    throw NumericalError(msg.str());
  }
}

void step_exact_rotation(SystemState& s, double dt, const StepOptions& opt) {
  const double c = coupling(s);
  const double mu_n = effective_mass(s);
  const double mu_dot_n = effective_mass_rate(s);
  double mid = mu_n + 0.5 * dt * mu_dot_n;
  auto end_mass = [&](double mu_mid) {
    return s.r + c * mode_sum(s.modes, [&](const ModeEntry& e) {
             const Flow fl = flow_coefficients(e.omega_sq + mu_mid, dt);
             return weight(e) * std::norm(fl.c * e.f + fl.s_over * e.fdot);
           });
  };
  bool converged = false;
  double change = 0.0;
  for (int it = 0; it < opt.max_fixed_point_iterations; ++it) {
    const double next = 0.5 * (mu_n + end_mass(mid));
    check_finite(s, next);
    change = std::abs(next - mid);
    mid = next;
    if (change <= opt.fixed_point_tol * std::max(1.0, std::abs(mid))) {
      converged = true;
      break;
    }
  }
  if (!converged && !(change <= 1e-10 * std::max(1.0, std::abs(mid)))) {
    std::ostringstream msg;
    msg << "midpoint iteration for the effective mass did not converge at t = " << s.time
        << " (last change " << change << ")";
    throw NumericalError(msg.str());
  }
  for (auto& e : s.modes) {
    const Flow fl = flow_coefficients(e.omega_sq + mid, dt);
    const cplx f = fl.c * e.f + fl.s_over * e.fdot;
    const cplx v = fl.minus_ws * e.f + fl.c * e.fdot;
    e.f = f;
    e.fdot = v;
  }
}

void step_verlet(SystemState& s, double dt) {
  double mu = effective_mass(s);
  for (auto& e : s.modes) e.fdot -= 0.5 * dt * (e.omega_sq + mu) * e.f;
  for (auto& e : s.modes) e.f += dt * e.fdot;
  mu = effective_mass(s);
  check_finite(s, mu);
  for (auto& e : s.modes) e.fdot -= 0.5 * dt * (e.omega_sq + mu) * e.f;
}

double ordered_threshold(const DispersionTable& table) {
  // Thermodynamic-limit value of <1/omega> over the non-zero modes.
  if (std::holds_alternative<NearestNeighbor>(table.kind)) {
    const double sum = pairwise_sum(table.size() - 1, [&](std::size_t i) {
      return table.degeneracy[i + 1] / std::sqrt(table.omega_sq[i + 1]);
    });
    return sum / static_cast<double>(table.N);
  }
  return 1.0;
}

}  // namespace

const ModeEntry* SystemState::find_mode(long m) const {
  for (const auto& e : modes) {
    if (!e.lumped && e.m == m) return &e;
  }
  return nullptr;
}

double gap_residual(double mu, double r, double lambda, const DispersionTable& table) {
  const double sum = pairwise_sum(table.size(), [&](std::size_t m) {
    return table.degeneracy[m] / std::sqrt(table.omega_sq[m] + mu);
  });
  return mu - r - lambda / (2.0 * static_cast<double>(table.N)) * sum;
}

GroundState ground_state(double r, double lambda, const DispersionTable& table) {
  if (!(lambda >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("ground_state: lambda must be non-negative and r finite");
  }
  if (r + 0.5 * lambda * ordered_threshold(table) <= 0.0) {
    std::ostringstream msg;
    msg << "no disordered ground state for r = " << r << ", lambda = " << lambda
        << ": the k = 0 mode would be macroscopically occupied";
    throw OrderedPhaseError(msg.str());
  }
  double mu = r;
  if (lambda > 0.0) {
    double hi = std::max(1.0, r + lambda);
    while (gap_residual(hi, r, lambda, table) <= 0.0) hi *= 2.0;
    double lo = std::min(1.0, hi) * 0.5;
    while (gap_residual(lo, r, lambda, table) >= 0.0) lo *= 0.5;
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (gap_residual(mid, r, lambda, table) < 0.0 ? lo : hi) = mid;
    }
    mu = std::abs(gap_residual(lo, r, lambda, table)) < std::abs(gap_residual(hi, r, lambda, table))
             ? lo
             : hi;
  }
  GroundState gs;
  gs.mu_gs = mu;
  gs.state.r = r;
  gs.state.lambda = lambda;
  gs.state.N = static_cast<std::int64_t>(table.N);
  gs.state.modes.reserve(table.size());
  for (std::size_t m = 0; m < table.size(); ++m) {
    const double w = table.omega_sq[m] + mu;
    ModeEntry e;
    e.m = static_cast<long>(m);
    e.degeneracy = table.degeneracy[m];
    e.omega_sq = table.omega_sq[m];
    e.f = cplx(std::pow(w, -0.25), 0.0);
    e.fdot = cplx(0.0, std::pow(w, 0.25));
    gs.state.modes.push_back(e);
  }
  return gs;
}

double effective_mass(const SystemState& s) {
  return s.r + coupling(s) * mode_sum(s.modes, [](const ModeEntry& e) { return weight(e) * std::norm(e.f); });
}

double effective_mass_rate(const SystemState& s) {
  return coupling(s) * mode_sum(s.modes, [](const ModeEntry& e) {
           return weight(e) * 2.0 * (e.fdot * std::conj(e.f)).real();
         });
}

double energy_per_particle(const SystemState& s) {
  const double mu = effective_mass(s);
  return coupling(s) * mode_sum(s.modes,
                                [](const ModeEntry& e) {
                                  return weight(e) * (std::norm(e.fdot) + e.omega_sq * std::norm(e.f));
                                }) +
         0.5 * mu * mu;
}

double drive_force(const SystemState& s) {
  const double sum = mode_sum(s.modes, [](const ModeEntry& e) {
    return weight(e) * (1.0 - e.omega_sq) * std::norm(e.f);
  });
  return 2.0 * s.lambda / static_cast<double>(s.N) * sum;
}

double max_wronskian_deviation(const SystemState& s) {
  double dev = 0.0;
  for (const auto& e : s.modes) dev = std::max(dev, std::abs(e.wronskian() - 1.0));
  return dev;
}

void step_in_place(SystemState& state, double dt, const StepOptions& options) {
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
  if (options.integrator == Integrator::kStormerVerlet) {
    step_verlet(state, dt);
  } else {
    step_exact_rotation(state, dt, options);
  }
  state.time += dt;
}

SystemState step(const SystemState& state, double dt, const StepOptions& options) {
  SystemState next = state;
  step_in_place(next, dt, options);
  return next;
}

TrajectoryRecord evolve(SystemState state, double t_end, const EvolveOptions& options) {
  if (!(options.dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
  if (options.sample_every == 0) throw InvalidArgument("evolve: sample_every must be positive");
  if (t_end < state.time) throw InvalidArgument("evolve: t_end precedes the state time");
  const double t0 = state.time;
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / options.dt - 1e-9));

  TrajectoryRecord rec;
  rec.epsilon = energy_per_particle(state);
  rec.envelope_modes = options.envelope_modes;
  rec.envelopes.resize(options.envelope_modes.size());
  std::vector<const ModeEntry*> tracked;
  auto locate = [&] {
    tracked.clear();
    for (long m : options.envelope_modes) {
      const ModeEntry* e = state.find_mode(m);
      if (!e) throw InvalidArgument("evolve: envelope mode " + std::to_string(m) + " is not tracked");
      tracked.push_back(e);
    }
  };
  locate();

  const ModeEntry* zero = state.find_mode(0);
  const double c = coupling(state);
  auto sample = [&] {
    const double mu = effective_mass(state);
    const double eps = energy_per_particle(state);
    const double drift = (eps - rec.epsilon) / std::max(std::abs(rec.epsilon), 1e-300);
    const double wdev = max_wronskian_deviation(state);
    rec.times.push_back(state.time);
    rec.mu.push_back(mu);
    rec.mu_dot.push_back(effective_mass_rate(state));
    rec.g.push_back(drive_force(state));
    rec.eps_drift.push_back(drift);
    rec.wronskian_dev.push_back(wdev);
    rec.max_wronskian_dev = std::max(rec.max_wronskian_dev, wdev);
    rec.max_rel_eps_drift = std::max(rec.max_rel_eps_drift, std::abs(drift));
    for (std::size_t i = 0; i < tracked.size(); ++i) rec.envelopes[i].push_back(std::norm(tracked[i]->f));
    if (zero && !rec.burst_time && mu != state.r) {
      const double share = c * weight(*zero) * std::norm(zero->f) / (mu - state.r);
      if (share > options.burst_threshold) rec.burst_time = state.time;
    }
    if (options.on_sample) options.on_sample(state);
  };

  sample();
  for (std::size_t k = 1; k <= steps; ++k) {
    step_in_place(state, options.dt, options.step);
    state.time = t0 + static_cast<double>(k) * options.dt;
    if (k % options.sample_every == 0 || k == steps) sample();
  }
  rec.final_state = std::move(state);
  return rec;
}

TrajectoryRecord quench(double r_pre, double r_post, double lambda, const DispersionTable& table,
                        double t_end, const QuenchOptions& options) {
  SystemState s = ground_state(r_pre, lambda, table).state;
  if (options.tracked_max_m) s = bundle(s, *options.tracked_max_m);
  s.r = r_post;
  return evolve(std::move(s), t_end, options.evolve);
}

double parametric_occupation(double r, double lambda, const DispersionTable& table, double mu0,
                             double mudot0, double epsilon) {
  if (!(lambda > 0.0)) throw InvalidArgument("prepare_parametric: lambda must be positive");
  if (!(mu0 > r)) throw InvalidArgument("prepare_parametric: mu0 must exceed r");
  if (!(mu0 * mu0 < 2.0 * epsilon)) throw InvalidArgument("prepare_parametric: mu0^2 < 2 epsilon violated");
  const double mean_w = spectral_average(table, [](double w) { return w; });
  // a = Occ A^2, b = Occ / A^2
  const double a = 2.0 * (mu0 - r) / lambda;
  const double kinetic = 2.0 * (epsilon - 0.5 * mu0 * mu0) / lambda;
  const double b = kinetic - mean_w * a - mudot0 * mudot0 / (lambda * lambda * a);
  return b > 0.0 ? std::sqrt(a * b) : 0.0;
}

SystemState prepare_parametric(double r, double lambda, const DispersionTable& table, double mu0,
                               double mudot0, double epsilon) {
  const double occ = parametric_occupation(r, lambda, table, mu0, mudot0, epsilon);
  if (!(occ >= 1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "targets mu0 = " << mu0 << ", epsilon = " << epsilon << " at lambda = " << lambda
        << " need an occupation factor " << occ << " < 1";
    throw UnreachableError(msg.str());
  }
  const double a = 2.0 * (mu0 - r) / lambda;
  const double amp = std::sqrt(a / occ);
  const double re = mudot0 / (lambda * occ);
  SystemState s;
  s.r = r;
  s.lambda = lambda;
  s.N = static_cast<std::int64_t>(table.N);
  s.modes.reserve(table.size());
  for (std::size_t m = 0; m < table.size(); ++m) {
    ModeEntry e;
    e.m = static_cast<long>(m);
    e.degeneracy = table.degeneracy[m];
    e.omega_sq = table.omega_sq[m];
    e.occ_plus = e.occ_minus = 0.5 * std::max(occ - 1.0, 0.0);
    e.f = cplx(amp, 0.0);
    e.fdot = cplx(re, 1.0) / amp;
    s.modes.push_back(e);
  }
  return s;
}

SystemState bundle(const SystemState& state, long tracked_max_m) {
  if (state.bundled()) throw InvalidArgument("bundle: state is already bundled");
  if (tracked_max_m < 0 || tracked_max_m > state.N / 2) {
    throw InvalidArgument("bundle: tracked_max_m out of range");
  }
  SystemState out = state;
  out.modes.clear();
  out.representation = BundledRepresentation{tracked_max_m};
  std::vector<const ModeEntry*> rest;
  for (const auto& e : state.modes) {
    if (e.m <= tracked_max_m) {
      out.modes.push_back(e);
    } else {
      rest.push_back(&e);
    }
  }
  if (rest.empty()) return out;
  double deg = 0.0;
  for (const auto* e : rest) deg += static_cast<double>(e->degeneracy);
  auto mean = [&](auto get) {
    return pairwise_sum(rest.size(), [&](std::size_t i) {
             return static_cast<double>(rest[i]->degeneracy) * get(*rest[i]);
           }) /
           deg;
  };
  ModeEntry lump;
  lump.m = rest.back()->m;
  lump.lumped = true;
  lump.degeneracy = static_cast<std::int64_t>(deg);
  lump.omega_sq = mean([](const ModeEntry& e) { return e.omega_sq; });
  lump.occ_plus = mean([](const ModeEntry& e) { return e.occ_plus; });
  lump.occ_minus = mean([](const ModeEntry& e) { return e.occ_minus; });
  lump.f = cplx(mean([](const ModeEntry& e) { return e.f.real(); }),
                mean([](const ModeEntry& e) { return e.f.imag(); }));
  lump.fdot = cplx(mean([](const ModeEntry& e) { return e.fdot.real(); }),
                   mean([](const ModeEntry& e) { return e.fdot.imag(); }));
  lump.fdot /= lump.wronskian();
  out.modes.push_back(lump);
  return out;
}

std::vector<long> active_modes(const SystemState& state, double threshold) {
  const double c = coupling(state);
  const double scale = std::abs(effective_mass(state) - state.r);
  std::vector<long> out;
  for (const auto& e : state.modes) {
    if (!e.lumped && c * weight(e) * std::norm(e.f) > threshold * scale) out.push_back(e.m);
  }
  return out;
}

std::optional<double> first_departure(std::span<const double> times, std::span<const double> a,
                                      std::span<const double> b, double threshold) {
  const std::size_t n = std::min({times.size(), a.size(), b.size()});
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a[i] - b[i]) > threshold) return times[i];
  }
  return std::nullopt;
}

void write_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,mu,mu_dot,g,eps_drift,wronskian_dev";
  for (long m : rec.envelope_modes) out << ",f2_m" << m;
  out << '\n';
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << format_double(rec.times[i]) << ',' << format_double(rec.mu[i]) << ','
        << format_double(rec.mu_dot[i]) << ',' << format_double(rec.g[i]) << ','
        << format_double(rec.eps_drift[i]) << ',' << format_double(rec.wronskian_dev[i]);
    for (const auto& env : rec.envelopes) out << ',' << format_double(env[i]);
    out << '\n';
  }
}

}  // namespace lrq
