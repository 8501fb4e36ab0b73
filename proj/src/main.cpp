#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "skdv/config.hpp"
#include "skdv/ensemble.hpp"
#include "skdv/ergodic.hpp"
#include "skdv/estimates.hpp"
#include "skdv/io.hpp"
#include "skdv/kernels.hpp"
#include "skdv/spectral.hpp"

namespace {

using nlohmann::json;
using namespace skdv;

constexpr int kExitOk = 0;
constexpr int kExitBlowup = 2;
constexpr int kExitAssert = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int paths = 0;     // 0 = keep config value
  int threads = -1;  // -1 = keep config value
  bool do_assert = false;
};

void attach_common(CLI::App* sc, CommonArgs& a) {
  sc->add_option("--config", a.config_path, "config file")->required();
  sc->add_option("--out", a.out_dir, "output directory")->required();
  sc->add_option("--seed", a.seed, "override [time] seed")
      ->each([&a](const std::string&) { a.seed_set = true; });
  sc->add_option("--paths", a.paths, "override [experiment] paths");
  sc->add_option("--threads", a.threads, "override [experiment] threads");
  sc->add_flag("--assert", a.do_assert,
               "exit 3 unless the experiment's acceptance condition holds");
}

void write_report(const std::string& out_dir, const json& j) {
  write_text_file(out_dir + "/report.json", j.dump(2) + "\n");
}

json trajectory_summary(const TrajectoryRecord& rec) {
  json j;
  j["records"] = rec.times.size();
  j["blew_up"] = rec.blew_up;
  if (rec.blew_up) j["blowup_step"] = rec.blowup_step;
  if (!rec.times.empty()) {
    j["t_final"] = rec.times.back();
    j["l2_final"] = rec.l2.back();
    j["h1_final"] = rec.h1.back();
    j["h2_final"] = rec.h2.back();
  }
  int small = 0, large = 0;
  for (const auto& e : rec.jump_log) (e.is_large ? large : small)++;
  j["small_jumps"] = small;
  j["large_jumps"] = large;
  return j;
}

int finish(const CommonArgs& a, bool pass, bool blew_up, const char* what) {
  if (blew_up) {
    std::fprintf(stderr, "%s: blow-up detected\n", what);
    return kExitBlowup;
  }
  if (a.do_assert && !pass) {
    std::fprintf(stderr, "%s: assertion failed\n", what);
    return kExitAssert;
  }
  return kExitOk;
}

int cmd_simulate(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const TrajectoryRecord rec = run(cfg);
  write_trajectory_csv(rec, a.out_dir + "/trajectory.csv");
  write_snapshot(rec.final_state, a.out_dir + "/final_state.snap");
  write_jump_log(rec.jump_log, a.out_dir + "/jumps.bin");
  write_report(a.out_dir, trajectory_summary(rec));
  std::printf("simulate: %zu records, final l2 = %g%s\n", rec.times.size(),
              rec.l2.empty() ? 0.0 : rec.l2.back(),
              rec.blew_up ? " [blow-up]" : "");
  return finish(a, true, rec.blew_up, "simulate");
}

int cmd_decay(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const TrajectoryRecord rec = run(cfg);
  write_trajectory_csv(rec, a.out_dir + "/trajectory.csv");
  const DecayReport rep = decay_test(cfg);
  const double tol = pc.exp.tol >= 0.0 ? pc.exp.tol : 1e-8;
  const bool pass = rep.max_rel_err <= tol;
  json j;
  j["fitted_rate"] = rep.fitted_rate;
  j["expected_rate"] = rep.expected_rate;
  j["max_rel_err"] = rep.max_rel_err;
  j["trivial_zero"] = rep.trivial_zero;
  j["tol"] = tol;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("decay: fitted %.6g vs expected %.6g, max rel err %.3g\n",
              rep.fitted_rate, rep.expected_rate, rep.max_rel_err);
  return finish(a, pass, rec.blew_up, "decay");
}

int cmd_conservation(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const TrajectoryRecord rec = run(cfg);
  write_trajectory_csv(rec, a.out_dir + "/trajectory.csv");
  const ConservationReport rep = conservation_test(cfg);
  const double tol = pc.exp.tol >= 0.0 ? pc.exp.tol : 1e-4;
  const bool pass = rep.drift_i0 <= 1e-8 && rep.drift_i1 <= tol && rep.drift_i2 <= tol;
  json j;
  j["drift_i0"] = rep.drift_i0;
  j["drift_i1"] = rep.drift_i1;
  j["drift_i2"] = rep.drift_i2;
  j["tol_i0"] = 1e-8;
  j["tol_i1_i2"] = tol;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("conservation: drifts i0 %.3g, i1 %.3g, i2 %.3g\n", rep.drift_i0,
              rep.drift_i1, rep.drift_i2);
  return finish(a, pass, rec.blew_up, "conservation");
}

int cmd_moments(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const MomentLedger led =
      moment_sweep(cfg, pc.exp.p_values, pc.exp.paths, pc.exp.threads);
  std::string csv = "t";
  for (int p : led.p_values)
    csv += ",sup_l2_p" + std::to_string(p) + ",sup_l2_p" + std::to_string(p) + "_se";
  csv += ",h1_sq,h1_sq_se,h2_sq,h2_sq_se\n";
  char buf[40];
  auto add = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    csv += ',';
    csv += buf;
  };
  for (std::size_t i = 0; i < led.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", led.times[i]);
    csv += buf;
    for (std::size_t pi = 0; pi < led.p_values.size(); ++pi) {
      add(led.e_sup_lp[pi][i]);
      add(led.e_sup_lp_se[pi][i]);
    }
    add(led.e_h1_sq[i]);
    add(led.e_h1_sq_se[i]);
    add(led.e_h2_sq[i]);
    add(led.e_h2_sq_se[i]);
    csv += '\n';
  }
  write_text_file(a.out_dir + "/moments.csv", csv);
  json j;
  j["paths"] = led.paths;
  j["blowups"] = led.blowups;
  j["all_finite"] = led.all_finite;
  j["p_values"] = led.p_values;
  for (std::size_t pi = 0; pi < led.p_values.size(); ++pi)
    j["final_e_sup_lp"]["p" + std::to_string(led.p_values[pi])] =
        led.e_sup_lp[pi].empty() ? 0.0 : led.e_sup_lp[pi].back();
  j["final_e_h2_sq"] = led.e_h2_sq.empty() ? 0.0 : led.e_h2_sq.back();
  j["pass"] = led.all_finite;
  write_report(a.out_dir, j);
  std::printf("moments: %d paths, %d blowups, final E|u|^2 sup curve %.6g\n",
              led.paths, led.blowups,
              led.e_sup_lp.empty() || led.e_sup_lp[0].empty()
                  ? 0.0
                  : led.e_sup_lp[0].back());
  return finish(a, led.all_finite, led.blowups > 0, "moments");
}

int cmd_balance(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const BalanceReport rep = stationary_balance_test(cfg, pc.exp.paths,
                                                    pc.exp.threads,
                                                    pc.exp.window_frac);
  const double tol = pc.exp.tol >= 0.0 ? pc.exp.tol : 0.15;
  const bool pass = rep.rel_err <= tol;
  json j;
  j["closed_form"] = rep.closed_form;
  j["mc_mean"] = rep.mc_mean;
  j["mc_se"] = rep.mc_se;
  j["rel_err"] = rep.rel_err;
  j["paths"] = rep.paths;
  j["tol"] = tol;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("balance: closed form %.6g vs mc %.6g (rel err %.3g)\n",
              rep.closed_form, rep.mc_mean, rep.rel_err);
  return finish(a, pass, false, "balance");
}

int cmd_convergence(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const ConvergenceReport rep =
      self_convergence(cfg, pc.exp.levels, pc.exp.conv_paths);
  std::string csv = "dt,error\n";
  char buf[96];
  for (std::size_t i = 0; i < rep.dts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rep.dts[i], rep.errors[i]);
    csv += buf;
  }
  write_text_file(a.out_dir + "/convergence.csv", csv);
  const bool pass =
      rep.slope >= pc.exp.slope_lo && rep.slope <= pc.exp.slope_hi && rep.monotone;
  json j;
  j["dts"] = rep.dts;
  j["errors"] = rep.errors;
  j["slope"] = rep.slope;
  j["monotone"] = rep.monotone;
  j["slope_lo"] = pc.exp.slope_lo;
  j["slope_hi"] = pc.exp.slope_hi;
  j["paths"] = rep.paths;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("convergence: slope %.3f over %zu levels (monotone: %s)\n",
              rep.slope, rep.dts.size(), rep.monotone ? "yes" : "no");
  return finish(a, pass, false, "convergence");
}

int cmd_stability(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const StabilityReport rep =
      stability_experiment(cfg, pc.exp.deltas, pc.exp.seeds);
  const double tol = pc.exp.tol >= 0.0 ? pc.exp.tol : 10.0;
  const bool pass = rep.max_ratio <= tol && rep.max_identical_gap == 0.0;
  json j;
  j["max_ratio"] = rep.max_ratio;
  j["max_identical_gap"] = rep.max_identical_gap;
  j["tol"] = tol;
  for (const auto& e : rep.entries) {
    json je;
    je["delta"] = e.delta;
    je["ratios"] = e.ratios;
    je["max_ratio"] = e.max_ratio;
    je["identical_gap"] = e.identical_gap;
    j["entries"].push_back(je);
  }
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("stability: max gap ratio %.4g, identical-path gap %.3g\n",
              rep.max_ratio, rep.max_identical_gap);
  return finish(a, pass, false, "stability");
}

int cmd_ergodic(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  std::vector<Observable> obs;
  for (const std::string& name : pc.exp.observables)
    obs.push_back(observable_from_name(name));
  const double burn =
      pc.exp.burn_in >= 0.0 ? pc.exp.burn_in : 0.5 * cfg.horizon;
  const TimeAverageReport rep =
      time_average(cfg, obs, burn, pc.exp.paths, pc.exp.threads);
  json j;
  j["burn_in"] = rep.burn_in;
  j["paths"] = rep.paths;
  j["blowups"] = rep.blowups;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    json jo;
    jo["full_mean"] = rep.full_mean[i];
    jo["full_se"] = rep.full_se[i];
    jo["burned_mean"] = rep.burned_mean[i];
    jo["burned_se"] = rep.burned_se[i];
    j["observables"][observable_name(obs[i])] = jo;
  }
  const bool pass = rep.blowups == 0;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("ergodic: %zu observables averaged over %d paths (burn-in %g)\n",
              obs.size(), rep.paths, rep.burn_in);
  return finish(a, pass, rep.blowups > 0, "ergodic");
}

int cmd_tightness(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  if (pc.exp.radii.empty())
    throw std::invalid_argument("tightness: [experiment] radii must be set");
  const double burn =
      pc.exp.burn_in >= 0.0 ? pc.exp.burn_in : 0.5 * cfg.horizon;
  const LongRunReport rep = ergodic_long_run(cfg, pc.exp.radii, burn,
                                             pc.exp.paths, pc.exp.threads);
  std::string csv = "radius,tail_fraction,tail_se,chebyshev\n";
  char buf[160];
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", rep.radii[i],
                  rep.tail_fraction[i], rep.tail_se[i], rep.chebyshev[i]);
    csv += buf;
  }
  write_text_file(a.out_dir + "/occupation.csv", csv);
  std::string growth = "t,h2_sq_integral\n";
  for (std::size_t i = 0; i < rep.checkpoint_times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rep.checkpoint_times[i],
                  rep.h2_integral[i]);
    growth += buf;
  }
  write_text_file(a.out_dir + "/growth.csv", growth);
  bool tails_ok = true;
  for (std::size_t i = 0; i < rep.radii.size(); ++i)
    if (rep.tail_fraction[i] > rep.chebyshev[i] + 3.0 * rep.tail_se[i] + 1e-12)
      tails_ok = false;
  const bool tail_small = rep.tail_fraction.empty()
                              ? false
                              : rep.tail_fraction.back() < 0.05;
  const bool growth_ok = rep.fit_residual_frac <= 0.05;
  const bool pass = tails_ok && tail_small && growth_ok && rep.blowups == 0;
  json j;
  j["radii"] = rep.radii;
  j["tail_fraction"] = rep.tail_fraction;
  j["tail_se"] = rep.tail_se;
  j["chebyshev"] = rep.chebyshev;
  j["mean_h2_sq"] = rep.mean_h2_sq;
  j["occupation_samples"] = rep.occupation_samples;
  j["fit_slope"] = rep.fit_slope;
  j["fit_intercept"] = rep.fit_intercept;
  j["fit_residual_frac"] = rep.fit_residual_frac;
  j["paths"] = rep.paths;
  j["blowups"] = rep.blowups;
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf(
      "tightness: largest-radius tail %.4g, growth slope %.6g (residual %.3g)\n",
      rep.tail_fraction.empty() ? 0.0 : rep.tail_fraction.back(), rep.fit_slope,
      rep.fit_residual_frac);
  return finish(a, pass, rep.blowups > 0, "tightness");
}

int cmd_audit(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const InequalityAudit rep =
      inequality_audit(cfg.grid, pc.exp.samples, cfg.seed);
  bool pass = rep.agmon_max > 0.0 && std::isfinite(rep.agmon_max);
  json j;
  j["samples"] = rep.samples;
  j["agmon_max"] = rep.agmon_max;
  j["agmon_max_half"] = rep.agmon_max_half;
  for (const auto& p : rep.interp) {
    json jp;
    jp["s"] = p.s;
    jp["theta"] = p.theta;
    jp["max_ratio"] = p.max_ratio;
    jp["max_ratio_half"] = p.max_ratio_half;
    j["interpolation"].push_back(jp);
    if (!(p.max_ratio <= 1.0 + 1e-9) || !(p.max_ratio > 0.99)) pass = false;
  }
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("audit: agmon max %.6g, interpolation maxima", rep.agmon_max);
  for (const auto& p : rep.interp) std::printf(" %.6g", p.max_ratio);
  std::printf("\n");
  return finish(a, pass, false, "audit");
}

int cmd_validate_noise(const CommonArgs& a, const ParsedConfig& pc) {
  const SimConfig cfg = pc.build();
  const AssumptionReport rep = validate_assumptions(
      cfg.preset, cfg.wiener, cfg.jumps, cfg.grid, pc.exp.samples, cfg.seed);
  auto stable = [](double full, double half) {
    return std::abs(full - half) <= 0.10 * std::max(std::abs(full), 1e-12);
  };
  const bool stability = stable(rep.kappa1, rep.kappa1_half) &&
                         stable(rep.kappa2, rep.kappa2_half) &&
                         stable(rep.lipschitz_c, rep.lipschitz_half);
  const bool pass = rep.pass && stability;
  json j;
  j["kappa1"] = rep.kappa1;
  j["kappa2"] = rep.kappa2;
  j["lipschitz_c"] = rep.lipschitz_c;
  j["kappa1_half"] = rep.kappa1_half;
  j["kappa2_half"] = rep.kappa2_half;
  j["lipschitz_half"] = rep.lipschitz_half;
  j["sample_count"] = rep.sample_count;
  j["stable_under_doubling"] = stability;
  for (int p : pc.exp.p_values) {
    const DissipationReport d =
        eta_threshold(cfg.model.gamma, rep.kappa1, rep.kappa2, p);
    json jd;
    jd["c_tilde"] = d.c_tilde;
    jd["eta"] = d.eta;
    jd["positive"] = d.positive;
    jd["eta_second"] = d.eta_second;
    jd["second_positive"] = d.second_positive;
    j["eta"]["p" + std::to_string(p)] = jd;
  }
  j["pass"] = pass;
  write_report(a.out_dir, j);
  std::printf("validate-noise: kappa1 %.6g, kappa2 %.6g, lipschitz %.6g%s\n",
              rep.kappa1, rep.kappa2, rep.lipschitz_c,
              stability ? "" : " [unstable]");
  return finish(a, pass, false, "validate-noise");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral lab for the damped stochastic KdV equation"};
  app.require_subcommand(1);
  CommonArgs a;
  const std::pair<const char*, const char*> kinds[] = {
      {"simulate", "integrate one path and dump trajectory artifacts"},
      {"decay", "damping-only exponential decay check"},
      {"conservation", "noise-free invariant drift check"},
      {"moments", "ensemble moment/sup curves"},
      {"balance", "stationary energy balance against the closed form"},
      {"convergence", "self-convergence order of the scheme"},
      {"stability", "coupled-path perturbation sensitivity"},
      {"ergodic", "trajectory time averages of observables"},
      {"tightness", "occupation tails and dissipation growth"},
      {"audit", "embedding/interpolation inequality audit"},
      {"validate-noise", "growth/Lipschitz constants of the noise preset"},
  };
  for (const auto& [name, desc] : kinds) attach_common(app.add_subcommand(name, desc), a);

  CLI11_PARSE(app, argc, argv);

  try {
    ParsedConfig pc = parse_config_file(a.config_path);
    if (a.seed_set) pc.seed = a.seed;
    if (a.paths > 0) pc.exp.paths = a.paths;
    if (a.threads >= 0) pc.exp.threads = a.threads;
    std::filesystem::create_directories(a.out_dir);
    write_text_file(a.out_dir + "/resolved.cfg", render_config(pc));
    std::printf("kernels: %s\n", kern::ops().name);

    CLI::App* sc = app.get_subcommands().front();
    const std::string name = sc->get_name();
    if (name == "simulate") return cmd_simulate(a, pc);
    if (name == "decay") return cmd_decay(a, pc);
    if (name == "conservation") return cmd_conservation(a, pc);
    if (name == "moments") return cmd_moments(a, pc);
    if (name == "balance") return cmd_balance(a, pc);
    if (name == "convergence") return cmd_convergence(a, pc);
    if (name == "stability") return cmd_stability(a, pc);
    if (name == "ergodic") return cmd_ergodic(a, pc);
    if (name == "tightness") return cmd_tightness(a, pc);
    if (name == "audit") return cmd_audit(a, pc);
    if (name == "validate-noise") return cmd_validate_noise(a, pc);
    std::fprintf(stderr, "unknown subcommand %s\n", name.c_str());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
