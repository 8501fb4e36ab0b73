#include "skdv/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "skdv/ensemble.hpp"
#include "skdv/spectral.hpp"
#include "skdv/stats.hpp"

namespace skdv {

namespace {

double fit_line_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = double(n) * sxx - sx * sx;
  return d != 0.0 ? (double(n) * sxy - sx * sy) / d : 0.0;
}

// Matches record times against the regular grid, skipping interleaved
// jump-time records.
struct GridMatcher {
  const std::vector<double>& grid;
  double tol;
  std::size_t next = 0;
  bool accept(double t) {
    if (next < grid.size() && std::abs(t - grid[next]) <= tol) {
      ++next;
      return true;
    }
    return false;
  }
};

double grid_tol(const SimConfig& cfg) { return 1e-9 * std::max(cfg.dt, 1.0); }

}  // namespace

DecayReport decay_test(const SimConfig& cfg) {
  if (!cfg.noise_off())
    throw std::invalid_argument("decay_test: noise must be off");
  DecayReport rep;
  rep.expected_rate = cfg.model.gamma;
  if (cfg.initial.kind == InitialCondition::Kind::single_mode) {
    const double k = double(cfg.initial.mode);
    rep.expected_rate += cfg.model.epsilon * k * k * k * k;
  }
  const TrajectoryRecord rec = run(cfg);
  const double l0 = rec.l2.empty() ? 0.0 : rec.l2.front();
  if (l0 <= 0.0) {
    rep.trivial_zero = true;
    for (double v : rec.l2) rep.max_rel_err = std::max(rep.max_rel_err, v);
    return rep;
  }
  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double expect = l0 * std::exp(-rep.expected_rate * rec.times[i]);
    rep.max_rel_err = std::max(rep.max_rel_err, std::abs(rec.l2[i] - expect) / l0);
    if (rec.l2[i] > 0.0) {
      ts.push_back(rec.times[i]);
      logs.push_back(std::log(rec.l2[i]));
    }
  }
  rep.fitted_rate = ts.size() > 1 ? -fit_line_slope(ts, logs) : rep.expected_rate;
  return rep;
}

ConservationReport conservation_test(const SimConfig& cfg) {
  if (!cfg.noise_off())
    throw std::invalid_argument("conservation_test: noise must be off");
  const TrajectoryRecord rec = run(cfg);
  ConservationReport rep;
  if (rec.times.empty()) return rep;
  const double b0 = std::max(1.0, std::abs(rec.i0.front()));
  const double b1 = std::max(1.0, std::abs(rec.i1.front()));
  const double b2 = std::max(1.0, std::abs(rec.i2.front()));
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    rep.drift_i0 = std::max(rep.drift_i0, std::abs(rec.i0[i] - rec.i0.front()) / b0);
    rep.drift_i1 = std::max(rep.drift_i1, std::abs(rec.i1[i] - rec.i1.front()) / b1);
    rep.drift_i2 = std::max(rep.drift_i2, std::abs(rec.i2[i] - rec.i2.front()) / b2);
  }
  return rep;
}

MomentLedger moment_sweep(const SimConfig& cfg, const std::vector<int>& p_values,
                          int paths, int threads) {
  if (paths < 1) throw std::invalid_argument("moment_sweep: paths must be >= 1");
  for (int p : p_values)
    if (p < 1) throw std::invalid_argument("moment_sweep: p must be >= 1");
  MomentLedger led;
  led.p_values = p_values;
  led.times = record_grid(cfg);
  led.paths = paths;
  const std::size_t nt = led.times.size();
  const std::size_t np = p_values.size();

  std::vector<std::vector<RunningStat>> lp_stat(np, std::vector<RunningStat>(nt));
  std::vector<RunningStat> h1_stat(nt), h2_stat(nt);
  int blowups = 0, used = 0;
  std::mutex mu;
  const double tol = grid_tol(cfg);

  parallel_paths(paths, resolve_thread_count(threads), [&](int path) {
    std::vector<double> sup_curve;
    std::vector<double> h1_curve, h2_curve;
    sup_curve.reserve(nt);
    h1_curve.reserve(nt);
    h2_curve.reserve(nt);
    GridMatcher match{led.times, tol, 0};
    double running_sup = 0.0;
    const PathResult res =
        run_observed(cfg, uint64_t(path), [&](double t, const SpectralField& u) {
          const double l2 = hs_norm(u, 0.0);
          running_sup = std::max(running_sup, l2);
          if (!match.accept(t)) return;
          sup_curve.push_back(running_sup);
          h1_curve.push_back(hs_norm_sq(u, 1.0));
          h2_curve.push_back(hs_norm_sq(u, 2.0));
        });
    std::lock_guard<std::mutex> g(mu);
    if (res.blew_up || sup_curve.size() != nt) {
      ++blowups;
      return;
    }
    ++used;
    for (std::size_t pi = 0; pi < np; ++pi) {
      const double p = double(p_values[pi]);
      for (std::size_t i = 0; i < nt; ++i)
        lp_stat[pi][i].push(std::pow(sup_curve[i], p));
    }
    for (std::size_t i = 0; i < nt; ++i) {
      h1_stat[i].push(h1_curve[i]);
      h2_stat[i].push(h2_curve[i]);
    }
  });

  led.blowups = blowups;
  auto finish = [&](const std::vector<RunningStat>& st,
                    std::vector<double>& mean, std::vector<double>& se) {
    mean.resize(nt);
    se.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      mean[i] = st[i].mean;
      se[i] = st[i].se();
    }
  };
  led.e_sup_lp.resize(np);
  led.e_sup_lp_se.resize(np);
  for (std::size_t pi = 0; pi < np; ++pi)
    finish(lp_stat[pi], led.e_sup_lp[pi], led.e_sup_lp_se[pi]);
  finish(h1_stat, led.e_h1_sq, led.e_h1_sq_se);
  finish(h2_stat, led.e_h2_sq, led.e_h2_sq_se);
  led.all_finite = blowups == 0;
  if (led.all_finite)
    for (const auto& curve : led.e_sup_lp)
      for (double v : curve)
        if (!std::isfinite(v)) led.all_finite = false;
  return led;
}

double closed_form_balance_level(const SimConfig& cfg) {
  if (!(cfg.model.gamma > 0.0))
    throw std::invalid_argument("balance: needs gamma > 0");
  if (cfg.preset.g_kind != GKind::additive)
    throw std::invalid_argument("balance: closed form needs additive Wiener coefficients");
  if (cfg.jumps.rate > 0.0 && cfg.preset.k_kind == KKind::linear_mark &&
      cfg.preset.beta_k != 0.0)
    throw std::invalid_argument("balance: closed form needs state-independent jumps");
  if (cfg.jumps.large_rate > 0.0)
    throw std::invalid_argument("balance: closed form excludes large jumps");
  double inject = 0.0;
  const int len = std::min(int(cfg.preset.sigma.size()), cfg.wiener.mode_count());
  for (int k = 0; k < len; ++k)
    inject += (k == 0 ? 1.0 : 2.0) * cfg.wiener.q[k] * cfg.preset.sigma[k] *
              cfg.preset.sigma[k];
  if (cfg.jumps.rate > 0.0 && !cfg.preset.psi.c.empty())
    inject += cfg.jumps.rate * cfg.jumps.mark.mean_sq() * hs_norm_sq(cfg.preset.psi, 0.0);
  return inject / (2.0 * cfg.model.gamma);
}

BalanceReport stationary_balance_test(const SimConfig& cfg, int paths, int threads,
                                      double window_frac) {
  if (!(window_frac > 0.0) || !(window_frac <= 1.0))
    throw std::invalid_argument("balance: window_frac must lie in (0, 1]");
  BalanceReport rep;
  rep.closed_form = closed_form_balance_level(cfg);
  rep.paths = paths;
  const double t_lo = cfg.horizon * (1.0 - window_frac);
  std::vector<double> path_means(paths, 0.0);
  std::vector<char> ok(paths, 0);
  parallel_paths(paths, resolve_thread_count(threads), [&](int path) {
    double prev_t = 0.0, prev_v = 0.0, integral = 0.0, t_first = -1.0, t_last = 0.0;
    bool have_prev = false;
    const PathResult res =
        run_observed(cfg, uint64_t(path), [&](double t, const SpectralField& u) {
          if (t < t_lo) return;
          const double v = hs_norm_sq(u, 0.0);
          if (have_prev) integral += 0.5 * (v + prev_v) * (t - prev_t);
          else t_first = t;
          prev_t = t;
          prev_v = v;
          t_last = t;
          have_prev = true;
        });
    if (!res.blew_up && t_last > t_first) {
      path_means[path] = integral / (t_last - t_first);
      ok[path] = 1;
    }
  });
  RunningStat stat;
  for (int i = 0; i < paths; ++i)
    if (ok[i]) stat.push(path_means[i]);
  if (stat.n == 0) throw std::runtime_error("balance: every path blew up");
  rep.mc_mean = stat.mean;
  rep.mc_se = stat.se();
  rep.rel_err = std::abs(rep.mc_mean - rep.closed_form) /
                std::max(rep.closed_form, 1e-300);
  rep.paths = int(stat.n);
  return rep;
}

InequalityAudit inequality_audit(const TorusGrid& g, int samples, uint64_t seed) {
  if (samples < 8)
    throw std::invalid_argument("inequality_audit: need at least 8 samples");
  InequalityAudit rep;
  rep.samples = samples;
  rep.interp = {{1.25, 0.625, 0.0, 0.0},
                {0.25, 0.125, 0.0, 0.0},
                {1.0 / 3.0, 1.0 / 6.0, 0.0, 0.0}};
  rng::Stream s(seed, 0, rng::Sub::misc);
  for (int i = 0; i < samples; ++i) {
    SpectralField v(g);
    if (i % 8 == 7) {
      // pure mode: the interpolation ratios are exactly sharp here
      const int k = 1 + int(s.next_unit() * g.n_modes) % g.n_modes;
      v.c[k] = cxd{s.next_gaussian(), s.next_gaussian()};
    } else {
      const double decay = 0.6 + s.next_unit();
      v.c[0] = s.next_gaussian();
      for (int n = 1; n <= g.n_modes; ++n) {
        const double d = std::pow(1.0 + double(n) * double(n), -decay);
        v.c[n] = cxd{s.next_gaussian() * d, s.next_gaussian() * d};
      }
    }
    const double l2 = hs_norm(v, 0.0);
    const double h2 = hs_norm(v, 2.0);
    if (l2 < 1e-12 || h2 < 1e-12) continue;
    const std::vector<double> vals = inverse_transform(v);
    double sup = 0.0;
    for (double x : vals) sup = std::max(sup, std::abs(x));
    const double dx_l2 = hs_norm(derivative(v, 1), 0.0);
    const double agmon = sup / std::sqrt(l2 * (dx_l2 + l2));
    rep.agmon_max = std::max(rep.agmon_max, agmon);
    for (auto& pair : rep.interp) {
      const double num = hs_norm(v, pair.s);
      const double den =
          std::pow(l2, 1.0 - pair.theta) * std::pow(h2, pair.theta);
      pair.max_ratio = std::max(pair.max_ratio, num / den);
    }
    if (i + 1 == samples / 2) {
      rep.agmon_max_half = rep.agmon_max;
      for (auto& pair : rep.interp) pair.max_ratio_half = pair.max_ratio;
    }
  }
  return rep;
}

StabilityReport stability_experiment(const SimConfig& cfg,
                                     const std::vector<double>& deltas,
                                     int n_seeds) {
  if (n_seeds < 1)
    throw std::invalid_argument("stability_experiment: need at least 1 seed");
  StabilityReport rep;
  for (double delta : deltas) {
    if (!(delta > 0.0))
      throw std::invalid_argument("stability_experiment: deltas must be > 0");
    StabilityReport::Entry entry;
    entry.delta = delta;
    for (int i = 0; i < n_seeds; ++i) {
      SimConfig c = cfg;
      c.seed = cfg.seed + uint64_t(i);
      const int dim = c.model.effective_dim(c.grid);
      SpectralField u0 = project(make_initial(c.grid, c.initial), dim);
      SpectralField ub = u0;
      ub.c[1] += cxd{0.0, -delta * std::sqrt(0.25 * kTwoPi)};
      const CoupledRecord cr = run_coupled_states(c, u0, ub, 0);
      double ratio;
      if (cr.a.blew_up || cr.b.blew_up || cr.diff_l2.empty()) {
        ratio = std::numeric_limits<double>::infinity();
      } else {
        double sup = 0.0;
        for (double d : cr.diff_l2) sup = std::max(sup, d);
        ratio = sup / delta;
      }
      entry.ratios.push_back(ratio);
      entry.max_ratio = std::max(entry.max_ratio, ratio);
      if (i == 0) {
        const CoupledRecord same = run_coupled_states(c, u0, u0, 0);
        for (double dgap : same.diff_l2)
          entry.identical_gap = std::max(entry.identical_gap, dgap);
      }
    }
    rep.max_ratio = std::max(rep.max_ratio, entry.max_ratio);
    rep.max_identical_gap = std::max(rep.max_identical_gap, entry.identical_gap);
    rep.entries.push_back(std::move(entry));
  }
  return rep;
}

}  // namespace skdv
