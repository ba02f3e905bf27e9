#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "dephasing/bounds.hpp"
#include "dephasing/control.hpp"
#include "dephasing/dicke.hpp"
#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"
#include "dephasing/gaussian_phase_space.hpp"
#include "dephasing/montecarlo.hpp"
#include "dephasing/noise_models.hpp"

namespace dephase {

using namespace dephasing;
using io::Cell;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

NoiseModel require_noise(const RunConfig& c) {
  if (c.noise_path.empty()) throw Error(ErrorKind::InvalidInput, c.command + " needs --noise <file>");
  return io::load_noise(c.noise_path);
}

DecayLaw decay_of(const RunConfig& c) {
  if (c.n < 1) throw Error(ErrorKind::InvalidDecay, "--n must be at least 1");
  return DecayLaw{c.n, std::pow(c.chi0, c.n), c.omega_c};
}

std::vector<int> N_or(const RunConfig& c, std::vector<int> fallback) {
  auto v = c.N.empty() ? fallback : c.N;
  for (int N : v) {
    if (N < 1) throw Error(ErrorKind::InvalidInput, "N must be at least 1");
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> log_grid_int(double lo, double hi, int count) {
  std::set<int> s;
  for (double x : fit::logspace(lo, hi, count)) s.insert(int(std::lround(x)));
  return {s.begin(), s.end()};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Check {
  std::string name;
  double tolerance;
  double measured;
};

Result checks_to_result(const std::vector<Check>& checks) {
  Result r;
  r.table.columns = {"check", "tolerance", "measured", "pass"};
  for (const auto& k : checks) {
    const bool ok = k.measured <= k.tolerance;
    r.table.rows.push_back({k.name, k.tolerance, k.measured, std::string(ok ? "true" : "false")});
    if (!ok) r.failures.push_back(k.name);
  }
  r.status = r.failures.empty() ? Exit::Ok : Exit::ValidationFailure;
  return r;
}

// Monte Carlo comparison shared by mc-validate and validate.
struct McOutcome {
  std::vector<std::vector<Cell>> rows;
  double worst_chi_z = 0;
  double worst_state_z = 0;
};

McOutcome mc_compare(const NoiseModel& model, int N, int count, std::uint64_t seed,
                     const PulseSequence* seq, double corrupt = 1.0) {
  if (N > 8) throw Error(ErrorKind::DimensionTooLarge, "mc-validate supports N <= 8");
  McOutcome o;
  const double wc = model.omega_c();
  const std::vector<double> grid{0.25 / wc, 0.5 / wc, 1.0 / wc, 2.0 / wc};
  const auto ens = sample_phase_process(model, grid, count, seed);
  const auto rho0 = build_input(InputKind::GHZ, N);
  const double b = 0.7;
  for (int k = 0; k < int(grid.size()); ++k) {
    const auto v = empirical_variance(ens, k);
    const double exact = corrupt * chi_time_domain(model, grid[k]);
    const double z = std::abs(v.value - exact) / v.stderr;
    o.worst_chi_z = std::max(o.worst_chi_z, z);
    o.rows.push_back({std::string("chi"), grid[k], v.value, exact, z});
    const auto est = empirical_average_state(rho0, ens, b, grid[k], k);
    const auto ref = evolve(rho0, b, corrupt * chi_time_domain(model, grid[k]), grid[k]);
    const double d = (est.state.rho - ref.rho).norm();
    const double zs = d / est.stderr_frobenius;
    o.worst_state_z = std::max(o.worst_state_z, zs);
    o.rows.push_back({std::string("state"), grid[k], d, est.stderr_frobenius, zs});
  }
  if (seq) {
    const auto segs = sample_segment_phases(model, *seq, count, seed + 1);
    const auto mc = empirical_controlled_state(rho0, *seq, segs, b);
    const auto cov = build_segment_covariance(model, *seq);
    const auto ref = controlled_mixture_reference(rho0, *seq, cov, detect_dp_blocks(*seq), b);
    const double d = (mc.state.rho - ref.rho).norm();
    const double zs = d / mc.stderr_frobenius;
    o.worst_state_z = std::max(o.worst_state_z, zs);
    o.rows.push_back({std::string("pulsed_state"), seq->t, d, mc.stderr_frobenius, zs});
  }
  return o;
}

PulseSequence default_echo(double t) {
  PulseSequence s;
  s.t = t;
  s.fractions = {0.25, 0.75};
  s.pulses = {Pulse{Eigen::Vector3d::UnitX(), std::numbers::pi, false, {}},
              Pulse{Eigen::Vector3d::UnitX(), std::numbers::pi, false, {}}};
  return s;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  if (!noise_path.empty()) j["noise"] = io::noise_to_json(io::load_noise(noise_path));
  if (!pulses_path.empty()) j["pulses"] = io::pulses_to_json(io::load_pulses(pulses_path));
  j["N"] = N;
  j["T"] = T;
  j["n"] = n;
  j["chi0"] = chi0;
  j["omega_c"] = omega_c;
  j["seed"] = seed;
  j["quick"] = quick;
  if (!which.empty()) j["which"] = which;
  if (!state.empty()) j["state"] = state;
  if (mu) j["mu"] = *mu;
  if (beta) j["beta"] = *beta;
  if (command == "kq" || command == "figures") {
    j["s"] = s;
    j["alpha"] = alpha;
    j["q_max"] = q_max;
  }
  if (command == "chi") {
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["points"] = points;
  }
  if (command == "control" || command == "figures") j["t"] = t;
  if (command == "mc-validate" || command == "validate") j["count"] = count;
  return j;
}

Result cmd_chi(const RunConfig& c) {
  const auto m = require_noise(c);
  if (!(c.t_min > 0) || !(c.t_max > c.t_min) || c.points < 2) {
    throw Error(ErrorKind::InvalidInput, "need 0 < t_min < t_max and points >= 2");
  }
  double n_fit = kNaN, chi0_fit = kNaN;
  try {
    const auto law = fit_short_time_law(m, fit::logspace(1e-4 / m.omega_c(), 1e-2 / m.omega_c(), 9));
    n_fit = law.n;
    chi0_fit = law.chi0();
  } catch (const Error&) {
  }
  Result r;
  r.table.columns = {"t", "chi_time", "chi_spectrum", "fitted_n", "chi0"};
  for (double t : fit::logspace(c.t_min, c.t_max, c.points)) {
    double spec = kNaN;
    if (m.has_spectrum()) spec = chi_spectrum_domain(m, t);
    r.table.rows.push_back({t, chi_time_domain(m, t), spec, n_fit, chi0_fit});
  }
  return r;
}

Result cmd_bound(const RunConfig& c) {
  const auto law = decay_of(c);
  Result r;
  r.table.columns = {"N", "t_star", "F_tot", "precision", "precision_sq_bound"};
  for (int N : N_or(c, {10, 100, 1000, 10000})) {
    BoundQuery q{N, c.T, law, {}, {}};
    const auto o = optimal_time_and_bound(q);
    r.table.rows.push_back({double(N), o.t_star, o.F_tot, o.precision, precision_lower_bound(q)});
  }
  return r;
}

Result cmd_ghz(const RunConfig& c) {
  const auto law = decay_of(c);
  Result r;
  r.table.columns = {"N", "t_star", "F_tot", "precision"};
  for (int N : N_or(c, {10, 100, 1000, 10000})) {
    const auto o = ghz_optimal(BoundQuery{N, c.T, law, {}, {}});
    r.table.rows.push_back({double(N), o.t_star, o.F_tot, o.precision});
  }
  return r;
}

Result cmd_oats(const RunConfig& c) {
  const auto law = decay_of(c);
  Result r;
  r.table.columns = {"N", "mu", "beta", "delta", "eta", "t_star", "F_tot", "precision", "hp_ratio", "hp_status"};
  for (int N : N_or(c, {100, 1000, 10000})) {
    OatsAngles a;
    if (c.state == "css" || c.state.empty()) {
      a = table1_angles(Table1State::CSS, N);
    } else if (c.state == "ku") {
      a = table1_angles(Table1State::KU, N);
    } else if (c.state == "pe") {
      a = table1_angles(Table1State::PE, N);
    } else {
      throw Error(ErrorKind::InvalidInput, "--state must be css, ku or pe");
    }
    if (c.mu) a.mu = *c.mu;
    if (c.beta) a.beta = *c.beta;
    const double J = 0.5 * N;
    const auto p = oats_params(a.mu, a.beta, J);
    const auto hp = hp_validity(input_gaussian(p.delta, p.eta, J), J);
    const auto o = oats_optimal(N, c.T, law, a.mu, a.beta);
    r.table.rows.push_back({double(N), a.mu, a.beta, p.delta, p.eta, o.t_star, o.F_tot, o.precision,
                            hp.ratio, to_string(hp.status)});
  }
  return r;
}

Result cmd_table1(const RunConfig& c) {
  const auto Ns = N_or(c, table1_default_N());
  Result r;
  r.table.columns = {"state",          "regime",          "fitted_exponent", "fitted_prefactor",
                     "model_exponent", "model_prefactor", "tabulated_exponent",  "tabulated_prefactor",
                     "residual"};
  for (auto s : {Table1State::CSS, Table1State::KU, Table1State::PE, Table1State::GHZ}) {
    for (auto g : {NoiseRegime::ColoredN2, NoiseRegime::White, NoiseRegime::Noiseless}) {
      const auto row = table1_row(s, g, Ns, c.T);
      r.table.rows.push_back({to_string(s), to_string(g), row.fitted_exponent, row.fitted_prefactor,
                              row.model_exponent, row.model_prefactor, row.tabulated_exponent,
                              row.tabulated_prefactor, row.residual});
    }
  }
  return r;
}

Result cmd_control(const RunConfig& c) {
  const auto m = require_noise(c);
  PulseSequence seq = c.pulses_path.empty() ? PulseSequence::free(c.t) : io::load_pulses(c.pulses_path);
  const auto cov = build_segment_covariance(m, seq);
  const auto comp = detect_dp_blocks(seq);
  const int Qp = seq.segments();
  Result r;
  r.table.columns = {"N",     "t",          "segments", "blocks",     "fallback",
                     "quadratic_form", "F_tot", "K", "nogo_t_star", "nogo_precision_sq"};
  const auto qf = quadratic_form_bound(cov, seq, c.T);
  for (int N : N_or(c, {100})) {
    const double F = c.T / seq.t * std::min(double(N) * N * seq.t * seq.t, qf.value);
    NoGoBound nb;
    bool have = true;
    try {
      nb = m.kind == NoiseKind::White
               ? controlled_nogo_bound(N, c.T, ControlRegime::White, m, Qp)
               : controlled_nogo_bound(N, c.T, ControlRegime::ColoredStationary, m, Qp);
    } catch (const Error&) {
      have = false;
    }
    if (m.kind == NoiseKind::White) nb.K = nb.t_star = kNaN;
    r.table.rows.push_back({double(N), seq.t, double(Qp), double(comp.rows()),
                            double(comp.fallback), qf.value, F, have ? nb.K : kNaN,
                            have ? nb.t_star : kNaN, have ? nb.precision_bound : kNaN});
  }
  return r;
}

Result cmd_kq(const RunConfig& c) {
  if (c.q_max < 1) throw Error(ErrorKind::InvalidInput, "--q-max must be at least 1");
  const auto model = NoiseModel::gaussian_cutoff(c.alpha, c.s, c.omega_c);
  model.validate();
  std::vector<double> mom;
  for (int k = 0; k < std::min(c.q_max, 10); ++k) {
    mom.push_back(gaussian_cutoff_moment(c.alpha, c.s, 1.0, k));
  }
  Result r;
  r.table.columns = {"Q_prime", "K_closed", "K_leibniz", "K_determinant", "K_numeric"};
  const int numeric_max = c.quick ? 4 : 6;
  for (int q = 1; q <= c.q_max; ++q) {
    double lb = kNaN, det = kNaN, num = kNaN;
    if (q <= 10) {
      const auto bf = kq_bruteforce(q, mom);
      lb = bf.leibniz;
      det = bf.determinant;
    }
    if (q <= numeric_max) {
      std::vector<double> fr;
      for (int j = 1; j < q; ++j) fr.push_back(double(j) / q);
      num = kq_numeric(model, fr).K;
    }
    r.table.rows.push_back({double(q), kq_hankel_gaussian(q, c.s, c.alpha, c.omega_c), lb, det, num});
  }
  return r;
}

Result cmd_mc_validate(const RunConfig& c) {
  const auto m = require_noise(c);
  const int count = c.count;
  std::optional<PulseSequence> seq;
  if (!c.pulses_path.empty()) seq = io::load_pulses(c.pulses_path);
  const auto o = mc_compare(m, N_or(c, {4}).front(), count, c.seed, seq ? &*seq : nullptr);
  Result r;
  r.table.columns = {"check", "t", "measured", "reference", "z"};
  r.table.rows = o.rows;
  if (o.worst_chi_z > 4) r.failures.push_back("chi");
  if (o.worst_state_z > 5) r.failures.push_back("state");
  r.status = r.failures.empty() ? Exit::Ok : Exit::ValidationFailure;
  return r;
}

Result cmd_figures(const RunConfig& c) {
  Result r;
  if (c.which == "fig1_left") {
    r.table.columns = {"N", "bound_n1", "ghz_n1", "bound_n2", "ghz_n2", "noiseless"};
    for (int N : N_or(c, log_grid_int(10, 1e4, 16))) {
      const BoundQuery q1{N, c.T, DecayLaw{1, 1.0, 1.0}, {}, {}};
      const BoundQuery q2{N, c.T, DecayLaw{2, 1.0, 1.0}, {}, {}};
      const BoundQuery q0{N, c.T, DecayLaw{2, 0.0, 1.0}, {}, {}};
      r.table.rows.push_back({double(N), optimal_time_and_bound(q1).precision,
                              ghz_optimal(q1).precision, optimal_time_and_bound(q2).precision,
                              ghz_optimal(q2).precision, 1 / std::sqrt(purification_total(q0, c.t))});
    }
  } else if (c.which == "fig1_right") {
    r.table.columns = {"N", "css", "ku", "pe", "ghz", "bound"};
    for (int N : N_or(c, log_grid_int(100, 1e4, 9))) {
      const BoundQuery q2{N, c.T, DecayLaw{2, 1.0, 1.0}, {}, {}};
      std::vector<Cell> row{double(N)};
      for (auto s : {Table1State::CSS, Table1State::KU, Table1State::PE, Table1State::GHZ}) {
        row.push_back(table1_precision(s, NoiseRegime::ColoredN2, N, c.T));
      }
      row.push_back(optimal_time_and_bound(q2).precision);
      r.table.rows.push_back(row);
    }
  } else if (c.which == "fig2") {
    const int N = N_or(c, {100}).front();
    r.table.columns = {"Q", "K_s0", "K_s1", "K_s2", "bound_s0", "bound_s1", "bound_s2"};
    for (int q = 1; q <= std::max(c.q_max, 64); ++q) {
      std::vector<Cell> row{double(q)};
      std::vector<double> K;
      for (double s : {0.0, 1.0, 2.0}) K.push_back(kq_hankel_gaussian(q, s, c.alpha, c.omega_c));
      for (double k : K) row.push_back(k);
      for (double k : K) row.push_back(controlled_nogo_bound_from_K(N, c.T, c.omega_c, k).precision_bound);
      r.table.rows.push_back(row);
    }
  } else if (c.which == "table1") {
    return cmd_table1(c);
  } else {
    throw Error(ErrorKind::InvalidInput, "--which must be fig1_left, fig1_right, fig2 or table1");
  }
  return r;
}

Result cmd_validate(const RunConfig& c) {
  const bool quick = c.quick;
  auto fault = [&](const std::string& name) { return c.inject_fault == name ? 1.5 : 1.0; };
  std::vector<Check> checks;
  std::mt19937_64 rng(c.seed);

  {  // bound dominance and fidelity curvature
    double excess = 0, fid = 0;
    for (int k = 0; k < (quick ? 20 : 100); ++k) {
      const int N = 2 + int(rng() % 11);
      const auto rho0 = random_state(N, rng, 1 + int(rng() % (N + 1)));
      const double V = variance_jz(rho0);
      for (double t : {0.5, 2.0}) {
        for (double chi : {0.0, 0.1, 1.0}) {
          const double F = qfi_and_sld(evolve(rho0, 0.3, chi, t)).qfi;
          const double B = fault("bound_dominance") == 1.0 ? purification_qfi_bound(V, chi, t)
                                                           : 0.5 * purification_qfi_bound(V, chi, t);
          excess = std::max(excess, (F - B) / std::max(B, 1e-300));
          if (F > 1e-6) {
            const double d = std::sqrt(8e-6 / F);
            const double Ff = fidelity_qfi([&](double b) { return evolve(rho0, b, chi, t).rho; }, 0.3, d);
            fid = std::max(fid, rel(Ff, F * fault("fidelity_curvature")));
          }
        }
      }
    }
    checks.push_back({"bound_dominance", 1e-9, excess});
    checks.push_back({"fidelity_curvature", 5e-3, fid});
  }
  {  // time domain vs spectral route for chi
    double worst = 0;
    for (const auto& m : {NoiseModel::ornstein_uhlenbeck(0.5, 1.0), NoiseModel::gaussian_cutoff(1.0, 1.0, 1.0)}) {
      for (double t : {0.1, 1.0, 5.0}) {
        worst = std::max(worst, rel(chi_spectrum_domain(m, t), fault("chi_routes") * chi_time_domain(m, t)));
      }
    }
    checks.push_back({"chi_routes", 1e-8, worst});
  }
  {  // K routes
    double bf = 0, num = 0;
    for (double s : {0.0, 1.0, 2.0}) {
      std::vector<double> mom;
      for (int k = 0; k < 8; ++k) mom.push_back(gaussian_cutoff_moment(1.0, s, 1.0, k));
      for (int q = 1; q <= (quick ? 6 : 8); ++q) {
        const double K = fault("kq_routes") * kq_hankel_gaussian(q, s);
        const auto b = kq_bruteforce(q, mom);
        bf = std::max({bf, rel(b.leibniz, K), rel(b.determinant, K)});
        if (q <= (quick ? 4 : 6)) {
          std::vector<double> fr;
          for (int j = 1; j < q; ++j) fr.push_back(double(j) / q);
          num = std::max(num, rel(kq_numeric(NoiseModel::gaussian_cutoff(1.0, s, 1.0), fr).K, K));
        }
      }
    }
    checks.push_back({"kq_closed_vs_bruteforce", 1e-8, bf});
    checks.push_back({"kq_closed_vs_numeric", 1e-2, num});
  }
  {  // closed-form optimum vs numeric maximisation
    double worst = 0;
    for (int n : {2, 3, 4}) {
      for (int N : {10, 100, 1000}) {
        const BoundQuery q{N, 1.0, DecayLaw{n, 1.0, 1.0}, {}, {}};
        const auto closed = optimal_time_and_bound(q);
        const auto num = maximize_total_qfi([&](double t) { return purification_total(q, t); }, 1e-8, 1e3);
        worst = std::max(worst, rel(num.F_tot, fault("optimum_closed_form") * closed.F_tot));
      }
    }
    checks.push_back({"optimum_closed_form", 1e-9, worst});
  }
  {  // white-noise controlled bound equals the uncontrolled one
    const auto white = NoiseModel::white(0.3, 2.0);
    const double unc = fault("white_nogo") * 1.0 / (0.3 * 2.0);
    double worst = 0;
    for (int q = 1; q <= 12; ++q) {
      std::vector<double> fr;
      for (int j = 1; j < q; ++j) fr.push_back(double(j) / q);
      worst = std::max(worst, rel(controlled_total_qfi(1000, 1.0, white, fr, 0.7), unc));
    }
    checks.push_back({"white_nogo", 1e-12, worst});
  }
  {  // compression monotonicity
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double viol = 0, proj = 0;
    for (int k = 0; k < (quick ? 200 : 1000); ++k) {
      const int Q = 2 + int(rng() % 7);
      Eigen::MatrixXd A(Q, Q);
      for (int i = 0; i < Q; ++i)
        for (int j = 0; j < Q; ++j) A(i, j) = g(rng);
      const Eigen::MatrixXd sigma = A * A.transpose() + 0.05 * Eigen::MatrixXd::Identity(Q, Q);
      Eigen::VectorXd dt(Q);
      for (int i = 0; i < Q; ++i) dt(i) = 0.05 + u(rng);
      const int split = 1 + int(rng() % (Q - 1));
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2, Q);
      for (int j = 0; j < Q; ++j) S(j < split ? 0 : 1, j) = u(rng) < 0.5 ? 1.0 : -1.0;
      const auto rep = check_compression_monotonicity(sigma, S, dt);
      viol = std::max(viol, rep.relative_violation * fault("compression_monotonicity") +
                                (fault("compression_monotonicity") - 1.0));
      proj = std::max({proj, rep.idempotence_error, rep.symmetry_error});
    }
    checks.push_back({"compression_monotonicity", 1e-12, viol});
    checks.push_back({"projector_idempotence", 1e-10, proj});
  }
  {  // Monte Carlo oracle
    const int count = c.count;
    double zc = 0, zs = 0;
    std::uint64_t seed = c.seed;
    for (const auto& m : {NoiseModel::white(0.05, 1.0), NoiseModel::ornstein_uhlenbeck(0.5, 1.0),
                          NoiseModel::brownian(0.05, 1.0)}) {
      const auto echo = default_echo(1.0);
      const auto o = mc_compare(m, 4, count, seed, &echo, fault("mc_oracle"));
      seed += 2;
      zc = std::max(zc, o.worst_chi_z);
      zs = std::max(zs, o.worst_state_z);
    }
    checks.push_back({"mc_chi_sigma", 4.0, zc});
    checks.push_back({"mc_state_stderr", 5.0, zs});
  }
  return checks_to_result(checks);
}

int run(int argc, char** argv) {
  CLI::App app{"Precision bounds for frequency estimation under collective dephasing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config file; flags override it");
  RunConfig c;
  std::string seed_text;
  auto common = [&](CLI::App* s) {
    s->add_option("--noise", c.noise_path, "Noise model JSON");
    s->add_option("--N", c.N, "Particle numbers");
    s->add_option("--T", c.T, "Total time budget")->check(CLI::PositiveNumber);
    s->add_option("--n", c.n, "Short-time decay exponent");
    s->add_option("--chi0", c.chi0, "Decay amplitude chi0")->check(CLI::PositiveNumber);
    s->add_option("--omega-c", c.omega_c, "Cutoff frequency")->check(CLI::PositiveNumber);
    s->add_option("--pulses", c.pulses_path, "Pulse sequence JSON");
    s->add_option("--seed", c.seed, "Random seed");
    s->add_option("--out", c.out, "Output file (default stdout)");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_flag("--quick", c.quick, "Reduced sample counts");
  };
  struct Cmd {
    const char* name;
    const char* help;
    std::function<Result(const RunConfig&)> fn;
  };
  const std::vector<Cmd> cmds{
      {"chi", "Decoherence function on a time grid", cmd_chi},
      {"bound", "State-independent optimised bound", cmd_bound},
      {"ghz", "GHZ optimum", cmd_ghz},
      {"oats", "One-axis-twisted input optimum", cmd_oats},
      {"table1", "Scaling fits for CSS, KU, PE and GHZ", cmd_table1},
      {"control", "Controlled quadratic form and no-go bound", cmd_control},
      {"kq", "K constant by three routes", cmd_kq},
      {"mc-validate", "Monte Carlo oracle against analytic maps", cmd_mc_validate},
      {"figures", "Data series behind the figures", cmd_figures},
      {"validate", "Invariant suites with a JSON report", cmd_validate}};
  std::map<CLI::App*, const Cmd*> lookup;
  for (const auto& k : cmds) {
    auto* s = app.add_subcommand(k.name, k.help);
    common(s);
    lookup[s] = &k;
    const std::string name = k.name;
    if (name == "chi") {
      s->add_option("--t-min", c.t_min);
      s->add_option("--t-max", c.t_max);
      s->add_option("--points", c.points);
    } else if (name == "oats") {
      s->add_option("--state", c.state, "css, ku or pe");
      s->add_option("--mu", c.mu);
      s->add_option("--beta", c.beta);
    } else if (name == "kq") {
      s->add_option("--s", c.s);
      s->add_option("--alpha", c.alpha);
      s->add_option("--q-max", c.q_max);
    } else if (name == "control") {
      s->add_option("--t", c.t, "Interrogation time when --pulses is absent");
    } else if (name == "mc-validate") {
      s->add_option("--count", c.count);
    } else if (name == "figures") {
      s->add_option("--which", c.which)->required()->check(
          CLI::IsMember({"fig1_left", "fig1_right", "fig2", "table1"}));
      s->add_option("--q-max", c.q_max);
      s->add_option("--t", c.t, "Fixed time for the noiseless series");
    } else if (name == "validate") {
      s->add_option("--count", c.count);
      s->add_option("--inject-fault", c.inject_fault, "Corrupt the named check's fixture")
          ->group("");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return int(Exit::InputError);
  }
  const Cmd* cmd = nullptr;
  for (auto* s : app.get_subcommands()) cmd = lookup[s];
  c.command = cmd->name;
  if (c.quick) c.count = std::min(c.count, 20000);
  if (c.count < 2) {
    std::cerr << "error: --count must be at least 2\n";
    return int(Exit::InputError);
  }
  if (c.command == "validate") c.format = app.get_subcommand("validate")->count("--format") ? c.format : "json";
  try {
    const Result r = cmd->fn(c);
    const json config = c.to_json();
    std::ofstream file;
    if (!c.out.empty()) {
      file.open(c.out);
      if (!file) throw Error(ErrorKind::InvalidInput, "cannot write " + c.out);
    }
    std::ostream& os = c.out.empty() ? std::cout : file;
    if (c.format == "json") {
      json j = io::table_to_json(config, r.table);
      j["pass"] = r.status == Exit::Ok;
      if (!r.failures.empty()) j["failures"] = r.failures;
      os << j.dump(2) << "\n";
    } else {
      io::write_csv(os, config, r.table);
    }
    for (const auto& f : r.failures) std::cerr << "failed check: " << f << "\n";
    return int(r.status);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(Exit::InputError);
  }
}

}  // namespace dephase
