#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lrquench/mode_dynamics.hpp"

namespace lrq {

/// Real parts of the equal-time correlators at distance d = 0..ell-1.
struct CorrelatorSet {
  std::size_t ell = 0;
  std::vector<double> phi_phi;
  std::vector<double> pi_pi;
  std::vector<double> phi_pi;
};

/// Fourier sums over the tracked modes; a lumped entry contributes
/// (1/2) Occ |f|^2 (and likewise for the other two) at d = 0 only.
CorrelatorSet correlators(const SystemState& state, std::size_t ell);

/// 2 ell x 2 ell matrix [[Q, R], [R^T, P]] built from Toeplitz blocks.
struct ReducedCovariance {
  Eigen::MatrixXd gamma;
  std::size_t ell() const { return static_cast<std::size_t>(gamma.rows() / 2); }
};

/// Throws NotPositiveDefinite when the Cholesky factorisation fails.
ReducedCovariance reduced_covariance(const CorrelatorSet& corr);

struct SymplecticSpectrum {
  std::vector<double> sigmas;  // descending, clamped at 1/2
  double raw_min = 0.5;        // smallest value before clamping
};

/// Via gamma = L L^T and the singular values of L^T J L.
SymplecticSpectrum symplectic_spectrum(const ReducedCovariance& cov);
/// Via a general eigensolver on -(J gamma)^2; for cross-checks.
SymplecticSpectrum symplectic_spectrum_eigen(const ReducedCovariance& cov);

/// (sigma + 1/2) ln(sigma + 1/2) - (sigma - 1/2) ln(sigma - 1/2), 0 at sigma = 1/2.
double entropy_term(double sigma);
/// Von Neumann entropy in nats.
double entropy(const SymplecticSpectrum& spectrum);

/// Entropy of the interval [0, ell) for the given state.
double interval_entropy(const SystemState& state, std::size_t ell);

double closed_form_delta(cplx f0, cplx f0dot, cplx fpi, cplx fpidot, std::int64_t N);

/// Single-resonance entropy: one symplectic eigenvalue (1/2) sqrt(1 + ell delta)
/// above 1/2, all others at 1/2.
double closed_form_entropy(double delta, std::size_t ell);
/// The same expression counted for two eigenvalues at (1/2) sqrt(1 + ell delta).
double closed_form_entropy_doubled(double delta, std::size_t ell);

struct EntropySample {
  double t = 0.0;
  double S = 0.0;
  double min_sigma = 0.5;
  std::optional<double> delta;  // when both m = 0 and a pi / lumped mode are present
};

EntropySample entropy_sample(const SystemState& state, std::size_t ell);

/// Columns t, S, min_sigma, delta_closed_form (empty when not applicable).
void write_csv(std::ostream& out, const std::vector<EntropySample>& series);

}  // namespace lrq
