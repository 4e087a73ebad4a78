#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrquench/floquet.hpp"

namespace lrq {

enum class PhaseClass {
  kNonPhysical = 0,
  kClassical = 1,
  kResonantZero = 2,
  kMultiResonant = 3,
  kMarginalBoundary = 4,
};

std::string to_string(PhaseClass c);

struct PhasePoint {
  double epsilon = 0.0;
  double mu0 = 0.0;
  PhaseClass cls = PhaseClass::kNonPhysical;
  int resonant_count = 0;
  /// The highest scanned mode is resonant, so the count is a lower bound.
  bool saturated = false;
  long lowest_resonant = -1;
  double max_det_deviation = 0.0;
};

struct PhaseOptions {
  long m_max = 64;
  /// Floquet integration step; the period is split into ceil(T / dt) steps.
  double dt = 0.05;
  std::size_t min_steps = 200;
  double eta = 1e-9;
};

/// Classification with explicit per-m frequencies (m = 0..size-1).
PhasePoint classify_point(double r, std::span<const double> omega_sq, double epsilon, double mu0,
                          double mudot0, const PhaseOptions& options = {});
/// Classification with continuum frequencies of StrongLongRange(alpha), mudot0 = 0.
PhasePoint classify_point(double r, double alpha, double epsilon, double mu0,
                          const PhaseOptions& options = {});

struct PhaseGrid {
  double r = 0.0;
  double alpha = 0.0;
  std::vector<double> epsilons;
  std::vector<double> mu0s;
  std::vector<PhasePoint> cells;  // index i_eps * mu0s.size() + i_mu
  PhaseOptions options;

  const PhasePoint& at(std::size_t i_eps, std::size_t i_mu) const {
    return cells[i_eps * mu0s.size() + i_mu];
  }
};

struct ScanAxes {
  double eps_lo = 0.0, eps_hi = 0.0;
  double mu0_lo = 0.0, mu0_hi = 0.0;
  std::size_t eps_points = 2;
  std::size_t mu0_points = 2;
};

/// Every cell classified with continuum frequencies and mudot0 = 0; threads
/// = 0 uses the hardware concurrency. The result does not depend on threads.
PhaseGrid scan(double r, double alpha, const ScanAxes& axes, const PhaseOptions& options = {},
               unsigned threads = 0);
/// Same with an explicit frequency list.
PhaseGrid scan(double r, std::span<const double> omega_sq, const ScanAxes& axes,
               const PhaseOptions& options = {}, unsigned threads = 0);

/// Columns epsilon, mu0, class_code, resonant_count.
void write_csv(std::ostream& out, const PhaseGrid& grid);
/// JSON metadata describing the scan.
std::string sidecar_json(const PhaseGrid& grid);

}  // namespace lrq
