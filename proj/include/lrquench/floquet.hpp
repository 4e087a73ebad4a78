#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrquench/effective_classical.hpp"
#include "lrquench/lattice_spectrum.hpp"

namespace lrq {

/// One-period propagator of f'' + a(t) f = 0; column j holds (f, fdot) at T
/// for the j-th canonical initial condition.
struct Monodromy {
  Eigen::Matrix2d C = Eigen::Matrix2d::Identity();
  double period = 0.0;

  double trace() const { return C.trace(); }
  double det() const { return C.determinant(); }
  /// |det C - 1| relative to max(1, |C00 C11| + |C01 C10|).
  double det_deviation() const;
};

enum class Stability { kStable, kResonant, kMarginal };

std::string to_string(Stability s);

struct StabilityClass {
  Stability kind = Stability::kStable;
  /// kappa for resonant modes, quasi-frequency for stable ones, 0 for marginal.
  double rate = 0.0;
  double trace = 0.0;
};

struct FloquetOptions {
  /// Integration steps per period; the step is T / steps so the period is hit exactly.
  std::size_t steps_per_period = 2000;
  int order = 6;
  double eta = 1e-9;
  /// Skip modes with min_t mu(t) + omega^2 > 0 (classified Stable without integrating).
  bool positivity_filter = true;
};

/// Monodromy of f'' + a(t) f = 0 over [0, T] with the given number of steps.
Monodromy monodromy(const std::function<double(double)>& a, double T, std::size_t steps,
                    int order = 6);

/// Throws InvalidMonodromy if det_deviation() exceeds 1e-6.
StabilityClass classify(const Monodromy& mono, double eta = 1e-9);

struct ModeStability {
  long m = 0;
  double omega_sq = 0.0;
  bool filtered = false;
  StabilityClass stability;
  double det_deviation = 0.0;
};

/// Hill-equation stability of a mode of frequency omega_sq along the orbit.
ModeStability mode_stability(const ClassicalOrbit& orbit, double omega_sq,
                             const FloquetOptions& options = {});

/// Same for many modes at once; the orbit and all modes are integrated together.
std::vector<ModeStability> mode_stabilities(const ClassicalOrbit& orbit,
                                            std::span<const double> omega_sq,
                                            const FloquetOptions& options = {});

struct ResonanceScan {
  std::vector<ModeStability> modes;  // m = 0 .. m_max
  std::vector<long> resonant;        // sorted
  std::vector<long> marginal;
  double max_det_deviation = 0.0;
};

/// Modes m = 0..m_max with frequencies from a finite table.
ResonanceScan count_resonances(const ClassicalOrbit& orbit, const DispersionTable& table,
                               long m_max, const FloquetOptions& options = {});
/// Modes m = 0..m_max with the given per-m frequencies (e.g. continuum values).
ResonanceScan count_resonances(const ClassicalOrbit& orbit, std::span<const double> omega_sq,
                               const FloquetOptions& options = {});

/// continuum_dispersion(alpha, m) for m = 0..m_max.
std::vector<double> continuum_frequencies(double alpha, long m_max);

/// Columns m, omega_sq, trace_C, class, kappa_or_quasifreq.
void write_csv(std::ostream& out, const ResonanceScan& scan);

}  // namespace lrq
