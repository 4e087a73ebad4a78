#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lrquench/lattice_spectrum.hpp"

namespace lrq {

using cplx = std::complex<double>;

/// One entry per |m|; in bundled form the last entry may stand for all
/// untracked modes (lumped = true, omega^2 close to 1).
struct ModeEntry {
  long m = 0;
  std::int64_t degeneracy = 1;
  double omega_sq = 0.0;
  double occ_plus = 0.0;
  double occ_minus = 0.0;
  cplx f{1.0, 0.0};
  cplx fdot{0.0, 1.0};
  bool lumped = false;

  /// 1 + n_k + n_{-k}
  double occupation() const { return 1.0 + occ_plus + occ_minus; }
  /// 1 + n_k - n_{-k}
  double imbalance() const { return 1.0 + occ_plus - occ_minus; }
  double wronskian() const { return (std::conj(f) * fdot).imag(); }
};

struct FullRepresentation {};
struct BundledRepresentation {
  long tracked_max_m = 0;
};
using Representation = std::variant<FullRepresentation, BundledRepresentation>;

struct SystemState {
  double r = 0.0;
  double lambda = 0.0;
  std::int64_t N = 0;
  double time = 0.0;
  std::vector<ModeEntry> modes;
  Representation representation = FullRepresentation{};

  bool bundled() const { return std::holds_alternative<BundledRepresentation>(representation); }
  const ModeEntry* find_mode(long m) const;
};

struct GroundState {
  double mu_gs = 0.0;
  SystemState state;
};

/// Ground state of the pre-quench Hamiltonian. Throws OrderedPhaseError when
/// the parameters lie in the ordered phase.
GroundState ground_state(double r, double lambda, const DispersionTable& table);

/// Residual mu - r - (lambda / 2N) sum deg / sqrt(omega^2 + mu).
double gap_residual(double mu, double r, double lambda, const DispersionTable& table);

double effective_mass(const SystemState& state);
/// Exact time derivative of effective_mass along the flow.
double effective_mass_rate(const SystemState& state);
double energy_per_particle(const SystemState& state);
double drive_force(const SystemState& state);
double max_wronskian_deviation(const SystemState& state);

enum class Integrator {
  /// Each mode follows the exact flow of f'' = -(omega^2 + mu_mid) f, with
  /// mu_mid the self-consistent average of mu at both ends of the step.
  kExactRotation,
  /// Kick-drift-kick Stormer-Verlet.
  kStormerVerlet,
};

struct StepOptions {
  Integrator integrator = Integrator::kExactRotation;
  double fixed_point_tol = 1e-15;
  int max_fixed_point_iterations = 60;
};

/// Advances by dt. Throws NumericalError on non-finite amplitudes.
SystemState step(const SystemState& state, double dt, const StepOptions& options = {});
void step_in_place(SystemState& state, double dt, const StepOptions& options = {});

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mu;
  std::vector<double> mu_dot;
  std::vector<double> g;
  std::vector<double> eps_drift;      // epsilon(t) - epsilon(0), relative
  std::vector<double> wronskian_dev;  // max over modes at each sample
  std::vector<long> envelope_modes;
  std::vector<std::vector<double>> envelopes;  // |f_m|^2 per envelope mode, per sample
  double epsilon = 0.0;
  double max_wronskian_dev = 0.0;
  double max_rel_eps_drift = 0.0;
  std::optional<double> burst_time;
  SystemState final_state;
};

struct EvolveOptions {
  double dt = 0.05;
  std::size_t sample_every = 1;
  StepOptions step;
  std::vector<long> envelope_modes;
  /// Burst time: first sample where the m = 0 share of mu - r exceeds this.
  double burst_threshold = 0.1;
  /// Called with the state at every sample (including t = start).
  std::function<void(const SystemState&)> on_sample;
};

TrajectoryRecord evolve(SystemState state, double t_end, const EvolveOptions& options = {});

struct QuenchOptions {
  EvolveOptions evolve;
  /// Bundle the initial state before evolving.
  std::optional<long> tracked_max_m;
};

TrajectoryRecord quench(double r_pre, double r_post, double lambda, const DispersionTable& table,
                        double t_end, const QuenchOptions& options = {});

/// Occupation factor a uniform-mode state needs to hit the targets (0 when
/// no positive solution exists). Throws InvalidArgument on violated preconditions.
double parametric_occupation(double r, double lambda, const DispersionTable& table, double mu0,
                             double mudot0, double epsilon);

/// Uniform-mode state with effective mass mu0, rate mudot0 and energy
/// epsilon. Throws InvalidArgument on violated preconditions and
/// UnreachableError when the targets need an occupation factor below 1.
SystemState prepare_parametric(double r, double lambda, const DispersionTable& table, double mu0,
                               double mudot0, double epsilon);

/// Keeps modes m <= tracked_max_m and lumps the rest into one entry carrying
/// their degeneracy-weighted mean omega^2 and amplitudes.
SystemState bundle(const SystemState& state, long tracked_max_m);

/// Modes whose share of mu - r exceeds threshold.
std::vector<long> active_modes(const SystemState& state, double threshold = 1e-3);

/// First time at which |a - b| exceeds threshold, or nullopt.
std::optional<double> first_departure(std::span<const double> times, std::span<const double> a,
                                      std::span<const double> b, double threshold);

/// Columns t, mu, mu_dot, g, eps_drift, wronskian_dev, then f2_m<m> per envelope mode.
void write_csv(std::ostream& out, const TrajectoryRecord& record);

}  // namespace lrq
