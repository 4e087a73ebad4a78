#include "lrquench/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lrquench/effective_classical.hpp"
#include "lrquench/entanglement.hpp"
#include "lrquench/errors.hpp"
#include "lrquench/floquet.hpp"
#include "lrquench/io.hpp"
#include "lrquench/lattice_spectrum.hpp"
#include "lrquench/mode_dynamics.hpp"
#include "lrquench/phase_diagram.hpp"

namespace lrq {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::vector<std::string> kSubcommands = {"dispersion", "ground-state", "quench",
                                               "phase-diagram", "floquet", "entropy-series"};

struct Common {
  std::string config;
  std::string out_dir = "lrquench-out";
  unsigned threads = 0;
  double dt = 0.05;
};

struct SpectrumArgs {
  std::string kind = "slr";
  double alpha = 0.5;
  std::int64_t n = 10000;
};

struct DispersionArgs {
  SpectrumArgs spectrum;
  long continuum_m_max = -1;
};

struct GroundStateArgs {
  SpectrumArgs spectrum;
  double r = 1.0;
  double lambda = 1.24;
};

struct QuenchArgs {
  SpectrumArgs spectrum;
  double r_pre = 1.0;
  double r_post = -1.0;
  double lambda = 1.24;
  double t_max = 100.0;
  std::size_t ell = 10;
  std::string ells = "5,10,20,40";
  std::size_t sample_every = 1;
  long tracked_max_m = -1;
  std::string integrator = "exact";
  double growth_threshold = 10.0;
  double burst_threshold = 0.1;
  double entropy_threshold = 0.1;
  std::string envelope_modes;
  double mu0 = std::numeric_limits<double>::quiet_NaN();
  double mudot0 = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  long m_max = 256;
};

struct FloquetArgs {
  SpectrumArgs spectrum;
  double r = -1.0;
  double epsilon = 1.2;
  double mu0 = -0.7;
  double mudot0 = 0.0;
  bool continuum = true;
  long m_max = 64;
  bool unfiltered = false;
  std::size_t steps_per_period = 0;
};

struct PhaseArgs {
  double r = -1.0;
  double alpha = 0.5;
  double eps_min = 0.5;
  double eps_max = 3.0;
  double mu0_min = std::numeric_limits<double>::quiet_NaN();
  double mu0_max = 0.5;
  std::size_t resolution = 100;
  long m_max = 64;
};

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stol(item, &pos));
      if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse integer list entry '" + item + "'");
    }
  }
  return out;
}

CouplingKind make_kind(const SpectrumArgs& a) {
  if (a.kind == "slr") return StrongLongRange{a.alpha};
  if (a.kind == "flat") return Flat{};
  if (a.kind == "nn") return NearestNeighbor{};
  throw InvalidArgument("unknown coupling kind '" + a.kind + "' (expected slr, flat or nn)");
}

DispersionTable make_table(const SpectrumArgs& a) {
  if (a.n <= 0) throw InvalidArgument("n must be positive");
  return build_dispersion(make_kind(a), static_cast<std::size_t>(a.n));
}

void add_spectrum_options(CLI::App* sub, SpectrumArgs& a) {
  sub->add_option("--kind", a.kind, "Coupling: slr (power law), flat or nn");
  sub->add_option("--alpha", a.alpha, "Power-law exponent, 0 < alpha < 1");
  sub->add_option("--n", a.n, "Number of sites (even)");
}

void add_common_options(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Key-value configuration file (flags override it)");
  sub->add_option("--out", c.out_dir, "Output directory");
  sub->add_option("--threads", c.threads, "Worker threads (0 = auto)");
  sub->add_option("--dt", c.dt, "Time step");
}

/// Input echo: every long option of the subcommand with its effective value.
KeyValueConfig echo_inputs(const CLI::App* sub) {
  KeyValueConfig cfg;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" || name == "threads") continue;
    std::string value;
    if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    cfg.set(name, value);
  }
  return cfg;
}

class OutputDir {
 public:
  OutputDir(const std::string& dir, std::string comment) : dir_(dir), comment_(std::move(comment)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InvalidArgument("cannot create output directory " + dir + ": " + ec.message());
  }

  std::ofstream csv(const std::string& name) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + (dir_ / name).string());
    f << comment_;
    return f;
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + (dir_ / name).string());
    f << text;
  }

 private:
  fs::path dir_;
  std::string comment_;
};

json number_or_null(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

void cmd_dispersion(const DispersionArgs& a, const OutputDir& out, json& summary) {
  const DispersionTable table = make_table(a.spectrum);
  auto f = out.csv("dispersion.csv");
  write_csv(f, table);
  json diag;
  diag["kac_norm"] = table.kac_norm;
  diag["mean_omega_sq"] = spectral_average(table, [](double w) { return w; });
  if (const auto* s = std::get_if<StrongLongRange>(&table.kind)) {
    diag["correction_exponent"] = correction_exponent(s->alpha);
    if (a.continuum_m_max >= 0) {
      auto c = out.csv("continuum.csv");
      c << "m,omega_sq\n";
      for (long m = 0; m <= a.continuum_m_max; ++m) {
        c << m << ',' << format_double(continuum_dispersion(s->alpha, m)) << '\n';
      }
    }
  }
  summary["diagnostics"] = diag;
}

void cmd_ground_state(const GroundStateArgs& a, const OutputDir& out, json& summary) {
  const DispersionTable table = make_table(a.spectrum);
  const GroundState gs = ground_state(a.r, a.lambda, table);
  auto f = out.csv("ground_state.csv");
  f << "m,omega_sq,degeneracy,f_re,f_im,fdot_re,fdot_im\n";
  for (const auto& e : gs.state.modes) {
    f << e.m << ',' << format_double(e.omega_sq) << ',' << e.degeneracy << ','
      << format_double(e.f.real()) << ',' << format_double(e.f.imag()) << ','
      << format_double(e.fdot.real()) << ',' << format_double(e.fdot.imag()) << '\n';
  }
  const double eps = energy_per_particle(gs.state);
  json diag;
  diag["mu_gs"] = gs.mu_gs;
  diag["gap_residual"] = gap_residual(gs.mu_gs, a.r, a.lambda, table);
  diag["epsilon_gs"] = eps;
  diag["potential_derivative_at_mu_gs"] = potential_derivative(gs.mu_gs, {a.r, eps});
  diag["drive_force"] = drive_force(gs.state);
  summary["diagnostics"] = diag;
}

std::optional<double> first_crossing(const std::vector<EntropySample>& s, double threshold) {
  for (const auto& x : s) {
    if (x.S > threshold) return x.t;
  }
  return std::nullopt;
}

void run_quench(const QuenchArgs& a, const Common& c, const OutputDir& out, json& summary,
                bool series_mode) {
  const DispersionTable table = make_table(a.spectrum);
  SystemState state;
  const bool parametric = !std::isnan(a.mu0) || !std::isnan(a.epsilon);
  if (parametric) {
    if (std::isnan(a.mu0) || std::isnan(a.epsilon)) {
      throw InvalidArgument("parametric initial state needs both --mu0 and --epsilon");
    }
    state = prepare_parametric(a.r_post, a.lambda, table, a.mu0, a.mudot0, a.epsilon);
  } else {
    state = ground_state(a.r_pre, a.lambda, table).state;
    state.r = a.r_post;
  }
  if (a.tracked_max_m >= 0) state = bundle(state, a.tracked_max_m);

  EvolveOptions opt;
  opt.dt = c.dt;
  opt.sample_every = a.sample_every;
  opt.burst_threshold = a.burst_threshold;
  opt.envelope_modes = parse_long_list(a.envelope_modes);
  if (a.integrator == "exact") {
    opt.step.integrator = Integrator::kExactRotation;
  } else if (a.integrator == "verlet") {
    opt.step.integrator = Integrator::kStormerVerlet;
  } else {
    throw InvalidArgument("unknown integrator '" + a.integrator + "' (expected exact or verlet)");
  }
  if (!(a.t_max >= 0.0)) throw InvalidArgument("t-max must be non-negative");

  std::vector<std::size_t> ells;
  if (series_mode) {
    for (long l : parse_long_list(a.ells)) {
      if (l <= 0) throw InvalidArgument("interval lengths must be positive");
      ells.push_back(static_cast<std::size_t>(l));
    }
  } else if (a.ell > 0) {
    ells.push_back(a.ell);
  }
  for (auto l : ells) {
    if (static_cast<std::int64_t>(l) * 10 > state.N) {
      summary["warnings"].push_back("ell = " + std::to_string(l) + " exceeds N/10; O(1/N) terms may matter");
    }
  }

  const double eps0 = energy_per_particle(state);
  const double mu_init = effective_mass(state);
  const double mudot_init = effective_mass_rate(state);

  std::optional<std::ofstream> traj;
  if (!series_mode) {
    traj.emplace(out.csv("trajectory.csv"));
    *traj << "t,mu,mu_dot,g,eps_drift,wronskian_dev";
    for (long m : opt.envelope_modes) *traj << ",f2_m" << m;
    *traj << '\n';
  }
  std::vector<std::ofstream> entropy_files;
  std::vector<std::vector<EntropySample>> series(ells.size());
  for (auto l : ells) {
    const std::string name = series_mode ? "entropy_ell" + std::to_string(l) + ".csv" : "entropy.csv";
    entropy_files.push_back(out.csv(name));
    entropy_files.back() << "t,S,min_sigma,delta_closed_form\n";
  }
  std::vector<double> initial_norm;
  std::vector<double> max_growth;
  double min_sigma = 0.5;

  opt.on_sample = [&](const SystemState& s) {
    if (traj) {
      const double eps = energy_per_particle(s);
      *traj << format_double(s.time) << ',' << format_double(effective_mass(s)) << ','
            << format_double(effective_mass_rate(s)) << ',' << format_double(drive_force(s)) << ','
            << format_double((eps - eps0) / std::abs(eps0)) << ','
            << format_double(max_wronskian_deviation(s));
      for (long m : opt.envelope_modes) *traj << ',' << format_double(std::norm(s.find_mode(m)->f));
      *traj << '\n';
    }
    for (std::size_t i = 0; i < ells.size(); ++i) {
      const EntropySample es = entropy_sample(s, ells[i]);
      min_sigma = std::min(min_sigma, es.min_sigma);
      series[i].push_back(es);
      entropy_files[i] << format_double(es.t) << ',' << format_double(es.S) << ','
                       << format_double(es.min_sigma) << ',';
      if (es.delta) entropy_files[i] << format_double(*es.delta);
      entropy_files[i] << '\n';
    }
    if (initial_norm.empty()) {
      for (const auto& e : s.modes) initial_norm.push_back(std::norm(e.f));
      max_growth.assign(s.modes.size(), 1.0);
    }
    for (std::size_t i = 0; i < s.modes.size(); ++i) {
      max_growth[i] = std::max(max_growth[i], std::norm(s.modes[i].f) / initial_norm[i]);
    }
  };

  json diag;
  diag["mu0"] = mu_init;
  diag["mudot0"] = mudot_init;
  diag["epsilon"] = eps0;
  try {
    const ClassicalOrbit orbit = make_orbit({state.r, eps0}, mu_init, mudot_init);
    FloquetOptions fopt;
    fopt.steps_per_period = std::max<std::size_t>(200, static_cast<std::size_t>(std::ceil(orbit.period / 0.01)));
    const ResonanceScan scan = count_resonances(orbit, table, a.m_max, fopt);
    diag["orbit_period"] = orbit.period;
    diag["floquet_m_max"] = a.m_max;
    diag["floquet_resonant_count"] = scan.resonant.size();
    diag["floquet_max_det_deviation"] = scan.max_det_deviation;
    summary["floquet_resonant_modes"] = scan.resonant;
  } catch (const NonPeriodicError& e) {
    summary["warnings"].push_back(std::string("no classical orbit: ") + e.what());
  }

  const TrajectoryRecord rec = evolve(std::move(state), a.t_max, opt);
  diag["max_wronskian_deviation"] = rec.max_wronskian_dev;
  diag["max_relative_epsilon_drift"] = rec.max_rel_eps_drift;
  diag["min_symplectic_eigenvalue"] = min_sigma;
  diag["samples"] = rec.times.size();
  std::vector<long> grown;
  for (std::size_t i = 0; i < max_growth.size(); ++i) {
    const auto& e = rec.final_state.modes[i];
    if (!e.lumped && max_growth[i] > a.growth_threshold) grown.push_back(e.m);
  }
  summary["resonant_modes"] = grown;
  std::optional<double> tq = rec.burst_time;
  if (!series.empty()) tq = first_crossing(series.front(), a.entropy_threshold);
  summary["t_q"] = number_or_null(tq);
  if (series_mode) {
    json crossings;
    for (std::size_t i = 0; i < ells.size(); ++i) {
      crossings[std::to_string(ells[i])] = number_or_null(first_crossing(series[i], a.entropy_threshold));
    }
    diag["entropy_threshold_crossings"] = crossings;
  }
  summary["diagnostics"] = diag;
}

void cmd_floquet(const FloquetArgs& a, const OutputDir& out, json& summary) {
  const ClassicalOrbit orbit = make_orbit({a.r, a.epsilon}, a.mu0, a.mudot0);
  FloquetOptions fopt;
  fopt.positivity_filter = !a.unfiltered;
  fopt.steps_per_period = a.steps_per_period > 0 ? a.steps_per_period : 2000;
  std::vector<double> freqs;
  if (a.continuum) {
    if (a.spectrum.kind != "slr") throw InvalidArgument("continuum frequencies need --kind slr");
    freqs = continuum_frequencies(a.spectrum.alpha, a.m_max);
  } else {
    const DispersionTable table = make_table(a.spectrum);
    const auto last = std::min<std::size_t>(static_cast<std::size_t>(std::max(a.m_max, 0L)), table.size() - 1);
    freqs.assign(table.omega_sq.begin(), table.omega_sq.begin() + static_cast<long>(last) + 1);
  }
  const ResonanceScan scan = count_resonances(orbit, freqs, fopt);
  auto f = out.csv("floquet.csv");
  write_csv(f, scan);
  auto o = out.csv("orbit.csv");
  write_csv(o, orbit);
  json diag;
  diag["energy"] = orbit.energy;
  diag["mu_minus"] = orbit.mu_minus;
  diag["mu_plus"] = orbit.mu_plus;
  diag["period"] = orbit.period;
  diag["periodicity_error"] = orbit.periodicity_error;
  diag["max_det_deviation"] = scan.max_det_deviation;
  diag["marginal_modes"] = scan.marginal;
  summary["diagnostics"] = diag;
  summary["resonant_modes"] = scan.resonant;
}

void cmd_phase_diagram(const PhaseArgs& a, const Common& c, const OutputDir& out, json& summary) {
  if (a.resolution < 1) throw InvalidArgument("resolution must be at least 1");
  ScanAxes axes;
  axes.eps_lo = a.eps_min;
  axes.eps_hi = a.eps_max;
  axes.mu0_lo = std::isnan(a.mu0_min) ? a.r : a.mu0_min;
  axes.mu0_hi = a.mu0_max;
  axes.eps_points = axes.mu0_points = a.resolution;
  PhaseOptions popt;
  popt.m_max = a.m_max;
  popt.dt = c.dt;
  const PhaseGrid grid = scan(a.r, a.alpha, axes, popt, c.threads);
  auto f = out.csv("phase_diagram.csv");
  write_csv(f, grid);
  out.write("phase_diagram.json", sidecar_json(grid));
  json counts;
  for (int k = 0; k <= 4; ++k) counts[to_string(static_cast<PhaseClass>(k))] = 0;
  std::size_t saturated = 0;
  for (const auto& cell : grid.cells) {
    counts[to_string(cell.cls)] = counts[to_string(cell.cls)].get<int>() + 1;
    saturated += cell.saturated ? 1 : 0;
  }
  json diag;
  diag["class_counts"] = counts;
  diag["saturated_cells"] = saturated;
  summary["diagnostics"] = diag;
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const InvalidArgument&) {
    return 2;
  } catch (const NumericalError&) {
    return 3;
  } catch (...) {
    return 3;
  }
}

/// Inserts `--key=value` tokens from the config file right after the
/// subcommand, so later command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  const KeyValueConfig cfg = KeyValueConfig::load(*path);
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& arg : args) {
    out.push_back(arg);
    if (!inserted && std::find(kSubcommands.begin(), kSubcommands.end(), arg) != kSubcommands.end()) {
      for (const auto& [k, v] : cfg.entries()) {
        std::string flag = k;
        std::replace(flag.begin(), flag.end(), '_', '-');
        out.push_back("--" + flag + "=" + v);
      }
      inserted = true;
    }
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  CLI::App app{"Quench dynamics of strong long-range O(n) rotor chains", "lrquench"};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kArtifactVersion);

  Common common;
  DispersionArgs disp;
  GroundStateArgs gsa;
  QuenchArgs qa;
  QuenchArgs sa;
  FloquetArgs fa;
  PhaseArgs pa;

  auto* s_disp = app.add_subcommand("dispersion", "Dispersion table of a periodic chain");
  add_common_options(s_disp, common);
  add_spectrum_options(s_disp, disp.spectrum);
  s_disp->add_option("--continuum-m-max", disp.continuum_m_max, "Also emit continuum values up to this m");

  auto* s_gs = app.add_subcommand("ground-state", "Ground state from the gap equation");
  add_common_options(s_gs, common);
  add_spectrum_options(s_gs, gsa.spectrum);
  s_gs->add_option("--r", gsa.r, "Bare mass");
  s_gs->add_option("--lambda", gsa.lambda, "Coupling lambda");

  auto add_quench = [&](CLI::App* sub, QuenchArgs& q, bool series) {
    add_common_options(sub, common);
    add_spectrum_options(sub, q.spectrum);
    sub->add_option("--r-pre", q.r_pre, "Bare mass before the quench");
    sub->add_option("--r-post", q.r_post, "Bare mass after the quench");
    sub->add_option("--lambda", q.lambda, "Coupling lambda");
    sub->add_option("--t-max", q.t_max, "Final time");
    if (series) {
      sub->add_option("--ells", q.ells, "Comma-separated interval lengths");
    } else {
      sub->add_option("--ell", q.ell, "Interval length for the entropy (0 = none)");
      sub->add_option("--envelope-modes", q.envelope_modes, "Comma-separated modes whose |f|^2 is recorded");
      sub->add_option("--burst-threshold", q.burst_threshold, "m = 0 share of mu - r marking a burst");
    }
    sub->add_option("--entropy-threshold", q.entropy_threshold, "Entropy (nats) defining t_q");
    sub->add_option("--sample-every", q.sample_every, "Steps between samples");
    sub->add_option("--tracked-max-m", q.tracked_max_m, "Bundle modes above this m (-1 = full)");
    sub->add_option("--integrator", q.integrator, "exact or verlet");
    sub->add_option("--growth-threshold", q.growth_threshold,
                    "Growth of |f_m|^2 over its initial value that marks a mode as resonant");
    sub->add_option("--mu0", q.mu0, "Prepared initial effective mass (with --epsilon)");
    sub->add_option("--mudot0", q.mudot0, "Prepared initial rate of the effective mass");
    sub->add_option("--epsilon", q.epsilon, "Prepared energy per particle (with --mu0)");
    sub->add_option("--m-max", q.m_max, "Highest mode in the Floquet prediction");
  };
  auto* s_q = app.add_subcommand("quench", "Quench r_pre -> r_post and record mu(t), S(t)");
  add_quench(s_q, qa, false);
  auto* s_s = app.add_subcommand("entropy-series", "Entropy time series for several interval lengths");
  add_quench(s_s, sa, true);

  auto* s_f = app.add_subcommand("floquet", "Floquet stability of the modes along a classical orbit");
  add_common_options(s_f, common);
  add_spectrum_options(s_f, fa.spectrum);
  s_f->add_option("--r", fa.r, "Bare mass");
  s_f->add_option("--epsilon", fa.epsilon, "Energy per particle");
  s_f->add_option("--mu0", fa.mu0, "Initial effective mass");
  s_f->add_option("--mudot0", fa.mudot0, "Initial rate of the effective mass");
  s_f->add_option("--continuum", fa.continuum, "Use continuum frequencies (false = finite table of size n)");
  s_f->add_option("--m-max", fa.m_max, "Highest mode");
  s_f->add_flag("--unfiltered", fa.unfiltered, "Integrate every mode, without the positivity pre-check");
  s_f->add_option("--steps-per-period", fa.steps_per_period, "Integration steps per period (0 = 2000)");

  auto* s_p = app.add_subcommand("phase-diagram", "Classify a grid of (epsilon, mu0) initial conditions");
  add_common_options(s_p, common);
  s_p->add_option("--r", pa.r, "Bare mass");
  s_p->add_option("--alpha", pa.alpha, "Power-law exponent");
  s_p->add_option("--eps-min", pa.eps_min, "Lowest energy per particle");
  s_p->add_option("--eps-max", pa.eps_max, "Highest energy per particle");
  s_p->add_option("--mu0-min", pa.mu0_min, "Lowest mu0 (default r)");
  s_p->add_option("--mu0-max", pa.mu0_max, "Highest mu0");
  s_p->add_option("--resolution", pa.resolution, "Points per axis");
  s_p->add_option("--m-max", pa.m_max, "Highest mode checked per cell");

  json summary;
  summary["artifact_version"] = kArtifactVersion;
  const auto start = std::chrono::steady_clock::now();

  try {
    const std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const KeyValueConfig inputs = echo_inputs(sub);
  summary["subcommand"] = sub->get_name();
  json echo;
  for (const auto& [k, v] : inputs.entries()) echo[k] = v;
  summary["inputs"] = echo;
  summary["config_hash"] = inputs.hash();
  summary["warnings"] = json::array();

  int code = 0;
  std::optional<OutputDir> dir;
  try {
    dir.emplace(common.out_dir, "# config_hash=" + inputs.hash() + " subcommand=" + sub->get_name() + "\n");
    if (!(common.dt > 0.0)) throw InvalidArgument("dt must be positive");
    const std::string name = sub->get_name();
    if (name == "dispersion") {
      cmd_dispersion(disp, *dir, summary);
    } else if (name == "ground-state") {
      cmd_ground_state(gsa, *dir, summary);
    } else if (name == "quench") {
      run_quench(qa, common, *dir, summary, false);
    } else if (name == "entropy-series") {
      run_quench(sa, common, *dir, summary, true);
    } else if (name == "floquet") {
      cmd_floquet(fa, *dir, summary);
    } else if (name == "phase-diagram") {
      cmd_phase_diagram(pa, common, *dir, summary);
    }
    summary["status"] = "ok";
  } catch (const std::exception& e) {
    code = exit_code_for(std::current_exception());
    summary["status"] = "error";
    summary["error"] = e.what();
    err << "error: " << e.what() << '\n';
  }
  summary["exit_code"] = code;
  summary["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (dir) {
    try {
      dir->write("summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
    }
  }
  return code;
}

}  // namespace lrq
