#include "lrquench/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lrquench/errors.hpp"
#include "lrquench/io.hpp"
#include "lrquench/summation.hpp"

namespace lrq {
namespace {

Eigen::MatrixXd symplectic_form(Eigen::Index ell) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * ell, 2 * ell);
  J.topRightCorner(ell, ell).setIdentity();
  J.bottomLeftCorner(ell, ell) = -Eigen::MatrixXd::Identity(ell, ell);
  return J;
}

SymplecticSpectrum pair_up(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  SymplecticSpectrum out;
  out.raw_min = values.empty() ? 0.5 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
    const double sigma = 0.5 * (values[i] + values[i + 1]);
    out.raw_min = std::min(out.raw_min, sigma);
    out.sigmas.push_back(std::max(sigma, 0.5));
  }
  return out;
}

}  // namespace

CorrelatorSet correlators(const SystemState& state, std::size_t ell) {
  if (ell == 0) throw InvalidArgument("correlators: ell must be positive");
  if (static_cast<std::int64_t>(ell) > state.N) throw InvalidArgument("correlators: ell exceeds N");
  CorrelatorSet out;
  out.ell = ell;
  out.phi_phi.assign(ell, 0.0);
  out.pi_pi.assign(ell, 0.0);
  out.phi_pi.assign(ell, 0.0);
  const double inv2n = 1.0 / (2.0 * static_cast<double>(state.N));
  const double two_pi_over_n = 2.0 * std::numbers::pi / static_cast<double>(state.N);
  const auto& modes = state.modes;
  std::vector<double> phase(modes.size());
  for (std::size_t d = 0; d < ell; ++d) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto& e = modes[i];
      phase[i] = e.lumped ? 0.0
                          : static_cast<double>(e.degeneracy) * e.occupation() *
                                std::cos(two_pi_over_n * static_cast<double>(e.m) * static_cast<double>(d));
    }
    auto sum = [&](auto value) {
      return pairwise_sum(modes.size(), [&](std::size_t i) { return phase[i] * value(modes[i]); });
    };
    out.phi_phi[d] = inv2n * sum([](const ModeEntry& e) { return std::norm(e.f); });
    out.pi_pi[d] = inv2n * sum([](const ModeEntry& e) { return std::norm(e.fdot); });
    out.phi_pi[d] = inv2n * sum([](const ModeEntry& e) { return (e.f * std::conj(e.fdot)).real(); });
  }
  for (const auto& e : modes) {
    if (!e.lumped) continue;
    out.phi_phi[0] += 0.5 * e.occupation() * std::norm(e.f);
    out.pi_pi[0] += 0.5 * e.occupation() * std::norm(e.fdot);
    out.phi_pi[0] += 0.5 * e.occupation() * (e.f * std::conj(e.fdot)).real();
  }
  return out;
}

ReducedCovariance reduced_covariance(const CorrelatorSet& corr) {
  const auto ell = static_cast<Eigen::Index>(corr.ell);
  ReducedCovariance out;
  out.gamma.resize(2 * ell, 2 * ell);
  for (Eigen::Index i = 0; i < ell; ++i) {
    for (Eigen::Index j = 0; j < ell; ++j) {
      const auto d = static_cast<std::size_t>(i > j ? i - j : j - i);
      out.gamma(i, j) = corr.phi_phi[d];
      out.gamma(ell + i, ell + j) = corr.pi_pi[d];
      out.gamma(i, ell + j) = corr.phi_pi[d];
      out.gamma(ell + j, i) = corr.phi_pi[d];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(out.gamma);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("reduced covariance is not positive definite");
  }
  return out;
}

SymplecticSpectrum symplectic_spectrum(const ReducedCovariance& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov.gamma);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("reduced covariance is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd K = L.transpose() * symplectic_form(cov.gamma.rows() / 2) * L;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
  const auto& sv = svd.singularValues();
  return pair_up(std::vector<double>(sv.data(), sv.data() + sv.size()));
}

SymplecticSpectrum symplectic_spectrum_eigen(const ReducedCovariance& cov) {
  const Eigen::MatrixXd Jg = symplectic_form(cov.gamma.rows() / 2) * cov.gamma;
  const Eigen::MatrixXd M = -(Jg * Jg);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on -(J gamma)^2");
  std::vector<double> values;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    values.push_back(std::sqrt(std::max(solver.eigenvalues()[i].real(), 0.0)));
  }
  return pair_up(std::move(values));
}

double entropy_term(double sigma) {
  const double lo = sigma - 0.5;
  if (!(lo > 0.0)) return 0.0;
  const double hi = sigma + 0.5;
  return hi * std::log(hi) - lo * std::log(lo);
}

double entropy(const SymplecticSpectrum& spectrum) {
  return pairwise_sum(spectrum.sigmas.size(),
                      [&](std::size_t i) { return entropy_term(spectrum.sigmas[i]); });
}

double interval_entropy(const SystemState& state, std::size_t ell) {
  return entropy(symplectic_spectrum(reduced_covariance(correlators(state, ell))));
}

double closed_form_delta(cplx f0, cplx f0dot, cplx fpi, cplx fpidot, std::int64_t N) {
  const double n_delta = std::norm(fpi * f0dot) + std::norm(f0 * fpidot) -
                         2.0 * (f0 * std::conj(f0dot)).real() * (fpi * std::conj(fpidot)).real();
  return n_delta / static_cast<double>(N);
}

double closed_form_entropy(double delta, std::size_t ell) {
  if (!(delta >= 0.0)) throw InvalidArgument("closed_form_entropy: delta must be non-negative");
  return entropy_term(0.5 * std::sqrt(1.0 + static_cast<double>(ell) * delta));
}

double closed_form_entropy_doubled(double delta, std::size_t ell) {
  return 2.0 * closed_form_entropy(delta, ell);
}

EntropySample entropy_sample(const SystemState& state, std::size_t ell) {
  EntropySample out;
  out.t = state.time;
  const SymplecticSpectrum spec = symplectic_spectrum(reduced_covariance(correlators(state, ell)));
  out.S = entropy(spec);
  out.min_sigma = spec.raw_min;
  const ModeEntry* zero = state.find_mode(0);
  const ModeEntry* pi = nullptr;
  for (const auto& e : state.modes) {
    if (e.lumped) pi = &e;
  }
  if (!pi) pi = state.find_mode(static_cast<long>(state.N / 2));
  if (zero && pi && zero != pi) out.delta = closed_form_delta(zero->f, zero->fdot, pi->f, pi->fdot, state.N);
  return out;
}

void write_csv(std::ostream& out, const std::vector<EntropySample>& series) {
  out << "t,S,min_sigma,delta_closed_form\n";
  for (const auto& s : series) {
    out << format_double(s.t) << ',' << format_double(s.S) << ',' << format_double(s.min_sigma) << ',';
    if (s.delta) out << format_double(*s.delta);
    out << '\n';
  }
}

}  // namespace lrq
