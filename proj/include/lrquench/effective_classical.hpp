#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "lrquench/mode_dynamics.hpp"

namespace lrq {

struct ClassicalParams {
  double r = 0.0;
  double epsilon = 0.0;
};

/// V(mu) = (mu - r)(mu^2 - 2 eps) + 2 (mu - r)^2
double potential(double mu, const ClassicalParams& p);
double potential_derivative(double mu, const ClassicalParams& p);
double potential_second_derivative(double mu, const ClassicalParams& p);
/// Location of the local minimum of V (larger root of V').
double potential_minimum(const ClassicalParams& p);

struct OrbitOptions {
  std::size_t samples = 4096;  // integration steps per period for the tabulation
  int order = 6;
  double degenerate_width = 1e-8;
};

struct ClassicalOrbit {
  ClassicalParams params;
  double mu0 = 0.0;
  double mudot0 = 0.0;
  double energy = 0.0;
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double period = 0.0;
  bool degenerate = false;
  /// |mu(T) - mu(0)| + |mudot(T) - mudot(0)| of the tabulating integration.
  double periodicity_error = 0.0;
  std::vector<double> t;
  std::vector<double> mu;
  std::vector<double> mudot;

  /// mu(t) for any t, by periodic cubic Hermite interpolation of the table.
  double mu_at(double time) const;
};

/// Throws NonPeriodicError when the classical energy is positive and
/// InvalidArgument when mu0 <= r.
ClassicalOrbit make_orbit(const ClassicalParams& params, double mu0, double mudot0,
                          const OrbitOptions& options = {});

/// Period measured by direct time integration from the lower turning point
/// (second crossing of mudot = 0), independent of the quadrature formula.
double integrated_return_time(const ClassicalOrbit& orbit, std::size_t steps_per_period = 20000);

/// mu and an explicit set of tracked modes; mode masses follow from lambda,
/// N, the occupation and omega^2 of each entry.
struct ReducedModel {
  ClassicalParams params;
  double lambda = 0.0;
  std::int64_t N = 1;
  double mu0 = 0.0;
  double mudot0 = 0.0;
  std::vector<ModeEntry> modes;
};

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<double> mu;
  std::vector<double> mudot;
  std::vector<std::vector<double>> mode_norms;  // |f_m|^2 per mode, per sample
  double energy = 0.0;
  double max_rel_energy_drift = 0.0;
};

/// Reduced conserved energy P^2/2 + V(mu) - sum (m_k/2)(|fdot|^2 + (mu + w^2)|f|^2).
double reduced_energy(const ReducedModel& model, double mu, double mudot,
                      const std::vector<ModeEntry>& modes);

struct ReducedOptions {
  double dt = 0.05;
  std::size_t sample_every = 1;
  int order = 6;
};

ReducedTrajectory evolve_reduced(const ReducedModel& model, double t_end,
                                 const ReducedOptions& options = {});

/// Model seeded from a microscopic state: effective mass, its rate and
/// energy per particle from the state, tracking the listed modes.
ReducedModel reduce(const SystemState& state, const std::vector<long>& tracked);

/// Columns t, mu, mudot over one period, preceded by comment lines with the
/// turning points, period and energy.
void write_csv(std::ostream& out, const ClassicalOrbit& orbit);

}  // namespace lrq
