#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lrquench/summation.hpp"

namespace lrq {

/// Power-law hopping t_r ~ r^{-alpha} with 0 < alpha < 1.
struct StrongLongRange {
  double alpha;
};
/// alpha = 0 limit: every site couples equally to every other.
struct Flat {};
/// alpha -> infinity limit: t_{+-1} = 1/2.
struct NearestNeighbor {};

using CouplingKind = std::variant<StrongLongRange, Flat, NearestNeighbor>;

std::string describe(const CouplingKind& kind);

/// Half-spectrum dispersion of a periodic chain of N sites. Entry m stands
/// for the pair of momenta k = +-2 pi m / N.
struct DispersionTable {
  CouplingKind kind;
  std::size_t N = 0;
  std::vector<double> omega_sq;  // m = 0 .. N/2
  std::vector<int> degeneracy;   // 1 at m = 0 and m = N/2, else 2
  double kac_norm = 1.0;         // sum of the unnormalised couplings over r = 1 .. N/2

  std::size_t size() const { return omega_sq.size(); }
  double momentum(std::size_t m) const;
};

/// Throws InvalidArgument for odd N, N < 4, or alpha outside (0, 1).
DispersionTable build_dispersion(const CouplingKind& kind, std::size_t N);

/// Thermodynamic-limit omega^2(m) for StrongLongRange(alpha), to absolute
/// tolerance abs_tol. Throws QuadratureError on non-convergence.
double continuum_dispersion(double alpha, long m, double abs_tol = 1e-10);

/// (1/N) sum_m deg(m) values[m]; values has one entry per table row.
double spectral_average(std::span<const double> values, const DispersionTable& table);

/// (1/N) sum_m deg(m) g(omega_m^2).
template <class G>
double spectral_average(const DispersionTable& table, const G& g) {
  const double total = pairwise_sum(table.size(), [&](std::size_t m) {
    return table.degeneracy[m] * g(table.omega_sq[m]);
  });
  return total / static_cast<double>(table.N);
}

/// Finite-size correction exponent zeta = min(1, 2 - 2 alpha).
double correction_exponent(double alpha);

/// Columns m, k, omega_sq, degeneracy with a header row.
void write_csv(std::ostream& out, const DispersionTable& table);

}  // namespace lrq
