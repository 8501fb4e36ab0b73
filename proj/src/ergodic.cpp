#include "skdv/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "skdv/ensemble.hpp"
#include "skdv/functionals.hpp"
#include "skdv/spectral.hpp"
#include "skdv/stats.hpp"

namespace skdv {

namespace {

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

void fit_affine(const std::vector<double>& x, const std::vector<double>& y,
                double& intercept, double& slope) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  slope = d != 0.0 ? (n * sxy - sx * sy) / d : 0.0;
  intercept = (sy - slope * sx) / n;
}

}  // namespace

DissipationReport eta_threshold(double gamma, double kappa1, double kappa2, int p) {
  if (p < 2) throw std::invalid_argument("eta_threshold: p must be >= 2");
  if (!(gamma >= 0.0) || !(kappa1 >= 0.0) || !(kappa2 >= 0.0))
    throw std::invalid_argument("eta_threshold: arguments must be >= 0");
  DissipationReport rep;
  rep.p = p;
  const double pd = double(p);
  rep.c_tilde = (pd * pd - pd) * std::pow(2.0, pd - 3.0);
  rep.eta = gamma * pd - (pd * (pd - 1.0) * kappa1 + 3.0 * rep.c_tilde * kappa2);
  rep.eta_second = (197.0 / 50.0) * gamma - kappa1 - kappa2;
  rep.positive = rep.eta > 0.0;
  rep.second_positive = rep.eta_second > 0.0;
  return rep;
}

double eval_observable(Observable o, const SpectralField& u) {
  switch (o) {
    case Observable::l2_sq:
      return hs_norm_sq(u, 0.0);
    case Observable::h1_sq:
      return hs_norm_sq(u, 1.0);
    case Observable::h2_sq:
      return hs_norm_sq(u, 2.0);
    case Observable::i2:
      return functional_I2(u);
    case Observable::re_mode1:
      return u.c.size() > 1 ? u.c[1].real() : 0.0;
  }
  return 0.0;
}

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::l2_sq:
      return "l2_sq";
    case Observable::h1_sq:
      return "h1_sq";
    case Observable::h2_sq:
      return "h2_sq";
    case Observable::i2:
      return "i2";
    case Observable::re_mode1:
      return "re_mode1";
  }
  return "?";
}

Observable observable_from_name(const std::string& name) {
  if (name == "l2_sq") return Observable::l2_sq;
  if (name == "h1_sq") return Observable::h1_sq;
  if (name == "h2_sq") return Observable::h2_sq;
  if (name == "i2") return Observable::i2;
  if (name == "re_mode1") return Observable::re_mode1;
  throw std::invalid_argument("unknown observable: " + name);
}

SemigroupEstimate semigroup_estimate(const SimConfig& cfg, Observable phi,
                                     int paths, int threads, double clip) {
  if (paths < 1) throw std::invalid_argument("semigroup_estimate: paths >= 1");
  if (!(clip > 0.0)) throw std::invalid_argument("semigroup_estimate: clip > 0");
  std::vector<double> vals(paths, 0.0);
  std::vector<char> was_clipped(paths, 0);
  parallel_paths(paths, resolve_thread_count(threads), [&](int path) {
    const PathResult res = run_observed(cfg, uint64_t(path), nullptr);
    double v = res.blew_up ? clip : eval_observable(phi, res.final_state);
    if (!std::isfinite(v) || std::abs(v) > clip) {
      v = std::clamp(v, -clip, clip);
      if (!std::isfinite(v)) v = clip;
      was_clipped[path] = 1;
    }
    if (res.blew_up) was_clipped[path] = 1;
    vals[path] = v;
  });
  SemigroupEstimate est;
  est.paths = paths;
  RunningStat stat;
  for (int i = 0; i < paths; ++i) {
    stat.push(vals[i]);
    est.clipped += was_clipped[i];
  }
  est.mean = stat.mean;
  est.se = stat.se();
  return est;
}

TimeAverageReport time_average(const SimConfig& cfg,
                               const std::vector<Observable>& observables,
                               double burn_in, int paths, int threads) {
  if (paths < 1) throw std::invalid_argument("time_average: paths >= 1");
  if (observables.empty())
    throw std::invalid_argument("time_average: no observables");
  if (!(burn_in >= 0.0) || burn_in >= cfg.horizon)
    throw std::invalid_argument("time_average: burn_in must lie in [0, horizon)");
  const std::size_t no = observables.size();
  TimeAverageReport rep;
  rep.observables = observables;
  rep.burn_in = burn_in;
  rep.paths = paths;
  std::vector<RunningStat> full_stat(no), burned_stat(no);
  int used = 0, blowups = 0;
  std::mutex mu;
  parallel_paths(paths, resolve_thread_count(threads), [&](int path) {
    std::vector<double> prev(no, 0.0);
    std::vector<double> full(no, 0.0), burned(no, 0.0);
    double prev_t = 0.0, burned_len = 0.0, full_len = 0.0;
    bool have_prev = false;
    const PathResult res =
        run_observed(cfg, uint64_t(path), [&](double t, const SpectralField& u) {
          std::vector<double> cur(no);
          for (std::size_t i = 0; i < no; ++i)
            cur[i] = eval_observable(observables[i], u);
          if (have_prev) {
            const double dt = t - prev_t;
            for (std::size_t i = 0; i < no; ++i) {
              const double seg = 0.5 * (cur[i] + prev[i]) * dt;
              full[i] += seg;
              if (prev_t >= burn_in) burned[i] += seg;
            }
            full_len += dt;
            if (prev_t >= burn_in) burned_len += dt;
          }
          prev = std::move(cur);
          prev_t = t;
          have_prev = true;
        });
    std::lock_guard<std::mutex> g(mu);
    if (res.blew_up || full_len <= 0.0 || burned_len <= 0.0) {
      ++blowups;
      return;
    }
    ++used;
    for (std::size_t i = 0; i < no; ++i) {
      full_stat[i].push(full[i] / full_len);
      burned_stat[i].push(burned[i] / burned_len);
    }
  });
  rep.blowups = blowups;
  rep.full_mean.resize(no);
  rep.full_se.resize(no);
  rep.burned_mean.resize(no);
  rep.burned_se.resize(no);
  for (std::size_t i = 0; i < no; ++i) {
    rep.full_mean[i] = full_stat[i].mean;
    rep.full_se[i] = full_stat[i].se();
    rep.burned_mean[i] = burned_stat[i].mean;
    rep.burned_se[i] = burned_stat[i].se();
  }
  return rep;
}

LongRunReport ergodic_long_run(const SimConfig& cfg, const std::vector<double>& radii,
                               double burn_in, int paths, int threads) {
  if (paths < 1) throw std::invalid_argument("ergodic_long_run: paths >= 1");
  if (radii.empty()) throw std::invalid_argument("ergodic_long_run: no radii");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("ergodic_long_run: radii > 0");
  if (!(burn_in >= 0.0) || burn_in >= cfg.horizon)
    throw std::invalid_argument("ergodic_long_run: burn_in must lie in [0, horizon)");

  LongRunReport rep;
  rep.radii = radii;
  rep.paths = paths;
  rep.checkpoint_times = record_grid(cfg);
  const std::size_t nt = rep.checkpoint_times.size();
  const std::size_t nr = radii.size();

  std::vector<double> sum_h2(nt, 0.0);
  std::vector<long long> tail_count(nr, 0);
  long long occ_samples = 0;
  double occ_sum = 0.0;
  int used = 0, blowups = 0;
  std::mutex mu;
  const double tol = grid_tol(cfg);

  parallel_paths(paths, resolve_thread_count(threads), [&](int path) {
    std::vector<double> curve;
    curve.reserve(nt);
    GridMatcher match{rep.checkpoint_times, tol, 0};
    const PathResult res =
        run_observed(cfg, uint64_t(path), [&](double t, const SpectralField& u) {
          if (!match.accept(t)) return;
          curve.push_back(hs_norm_sq(u, 2.0));
        });
    std::lock_guard<std::mutex> g(mu);
    if (res.blew_up || curve.size() != nt) {
      ++blowups;
      return;
    }
    ++used;
    for (std::size_t i = 0; i < nt; ++i) {
      sum_h2[i] += curve[i];
      if (rep.checkpoint_times[i] >= burn_in) {
        ++occ_samples;
        occ_sum += curve[i];
        const double h2 = std::sqrt(curve[i]);
        for (std::size_t r = 0; r < nr; ++r)
          if (h2 > radii[r]) ++tail_count[r];
      }
    }
  });

  rep.blowups = blowups;
  if (used == 0) throw std::runtime_error("ergodic_long_run: every path blew up");
  rep.occupation_samples = occ_samples;
  rep.mean_h2_sq = occ_sum / double(occ_samples);

  rep.tail_fraction.resize(nr);
  rep.tail_se.resize(nr);
  rep.chebyshev.resize(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    const double f = double(tail_count[r]) / double(occ_samples);
    rep.tail_fraction[r] = f;
    rep.tail_se[r] = std::sqrt(std::max(0.0, f * (1.0 - f)) / double(occ_samples));
    rep.chebyshev[r] = rep.mean_h2_sq / (radii[r] * radii[r]);
  }

  // mean curve -> running integral -> tail-window affine fit
  rep.h2_integral.assign(nt, 0.0);
  for (std::size_t i = 1; i < nt; ++i) {
    const double mean_prev = sum_h2[i - 1] / double(used);
    const double mean_cur = sum_h2[i] / double(used);
    rep.h2_integral[i] =
        rep.h2_integral[i - 1] +
        0.5 * (mean_prev + mean_cur) *
            (rep.checkpoint_times[i] - rep.checkpoint_times[i - 1]);
  }
  std::vector<double> xs, ys;
  const double t_lo = 0.5 * cfg.horizon;
  for (std::size_t i = 0; i < nt; ++i)
    if (rep.checkpoint_times[i] >= t_lo) {
      xs.push_back(rep.checkpoint_times[i]);
      ys.push_back(rep.h2_integral[i]);
    }
  if (xs.size() >= 2) {
    fit_affine(xs, ys, rep.fit_intercept, rep.fit_slope);
    double max_resid = 0.0;
    double lo = ys.front(), hi = ys.front();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      max_resid = std::max(max_resid, std::abs(ys[i] - (rep.fit_intercept +
                                                        rep.fit_slope * xs[i])));
      lo = std::min(lo, ys[i]);
      hi = std::max(hi, ys[i]);
    }
    rep.fit_residual_frac = hi > lo ? max_resid / (hi - lo) : 0.0;
  }
  return rep;
}

}  // namespace skdv
