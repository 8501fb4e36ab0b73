#include "skdv/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skdv/kernels.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

namespace {

std::vector<cxd> exp_table(const ModelParams& p, const TorusGrid& g, double dt) {
  std::vector<cxd> e(g.n_modes + 1);
  for (int n = 0; n <= g.n_modes; ++n)
    e[n] = std::exp(dt * linear_symbol(p, n));
  return e;
}

// Supplies the Wiener increment over (t0, t0+len]; replay variants return
// block sums of a pregenerated fine-step table so every refinement level of a
// coupled family sees the same path.
class WienerSource {
 public:
  virtual ~WienerSource() = default;
  virtual const SpectralField* increment(double t0, double len) = 0;
};

class LiveWiener final : public WienerSource {
 public:
  LiveWiener(const WienerSpec& spec, const TorusGrid& g, rng::Stream s)
      : spec_(spec), grid_(g), stream_(s) {}
  const SpectralField* increment(double, double len) override {
    if (!spec_.enabled()) return nullptr;
    buf_ = sample_wiener_increment(spec_, grid_, len, stream_);
    return &buf_;
  }
  rng::Stream stream() const { return stream_; }

 private:
  WienerSpec spec_;
  TorusGrid grid_;
  rng::Stream stream_;
  SpectralField buf_;
};

class ReplayWiener final : public WienerSource {
 public:
  ReplayWiener(const std::vector<SpectralField>* table, double dt_fine,
               const TorusGrid& g)
      : table_(table), dt_fine_(dt_fine), buf_(g) {}
  const SpectralField* increment(double t0, double len) override {
    if (table_ == nullptr || table_->empty()) return nullptr;
    const auto i0 = std::size_t(std::llround(t0 / dt_fine_));
    const auto i1 = std::size_t(std::llround((t0 + len) / dt_fine_));
    buf_.set_zero();
    for (std::size_t i = i0; i < i1 && i < table_->size(); ++i)
      buf_ += (*table_)[i];
    return &buf_;
  }

 private:
  const std::vector<SpectralField>* table_;
  double dt_fine_;
  SpectralField buf_;
};

class Engine {
 public:
  explicit Engine(const SimConfig& cfg)
      : cfg_(cfg), etab_main_(exp_table(cfg.model, cfg.grid, cfg.dt)) {
    if (cfg.jumps.rate > 0.0 && cfg.preset.k_kind == KKind::additive_mark &&
        !cfg.preset.psi.c.empty()) {
      add_shape_ = cfg.preset.psi;
      has_add_shape_ = true;
    }
  }

  // One unsplit segment: taper-weighted nonlinear correction with the
  // norm-preserving radial adjustment, then the exact linear factor applied
  // to state plus noise, all noise coefficients frozen at the pre-segment
  // state. len == 0 happens only when a binned jump sum lands exactly on a
  // segment boundary; it applies the jumps with no flow.
  void segment(SpectralField& u, double len, const SpectralField* dw,
               double mark_sum, std::size_t step_index) const {
    const int dim = cfg_.model.effective_dim(u.grid);
    SpectralField v = u;
    if (len > 0.0) {
      const double theta = cfg_.model.cutoff(hs_norm(u, 1.0));
      if (theta != 0.0) {
        SpectralField b = project(nonlinear_term(u), dim);
        const double n0 = hs_norm_sq(u, 0.0);
        v.add_scaled(-len * theta, b);
        const double n1 = hs_norm_sq(v, 0.0);
        if (n0 > 0.0 && n1 > 0.0) v *= std::sqrt(n0 / n1);
      }
    }
    SpectralField noise(u.grid);
    bool have_noise = false;
    if (dw != nullptr) {
      noise = apply_G(cfg_.preset, u, *dw);
      have_noise = true;
    }
    if (cfg_.jumps.rate > 0.0) {
      const double jw = mark_sum - len * cfg_.jumps.rate * cfg_.jumps.mark.mean();
      if (jw != 0.0) {
        if (has_add_shape_) {
          noise.add_scaled(jw, add_shape_);
        } else {
          SpectralField shape(u.grid);
          if (!cfg_.preset.psi.c.empty()) shape = cfg_.preset.psi;
          if (cfg_.preset.k_kind == KKind::linear_mark)
            shape.add_scaled(cfg_.preset.beta_k, u);
          noise.add_scaled(jw, shape);
        }
        have_noise = true;
      }
    }
    if (have_noise)
      for (int n = dim + 1; n <= u.n_modes(); ++n) noise.c[n] = {};
    if (len == cfg_.dt) {
      kern::ops().scale_sum(etab_main_.data(), v.c.data(), noise.c.data(),
                            u.c.data(), v.c.size());
    } else if (len > 0.0) {
      const auto etab = exp_table(cfg_.model, cfg_.grid, len);
      kern::ops().scale_sum(etab.data(), v.c.data(), noise.c.data(), u.c.data(),
                            v.c.size());
    } else {
      u = v;
      u += noise;
    }
    // A state can overflow through its norm before any single coefficient
    // does; either way nothing downstream (recording, cutoff evaluation) can
    // use it, so both count as leaving the finite regime.
    if (!u.all_finite() || !std::isfinite(hs_norm_sq(u, 0.0)))
      throw BlowupError(step_index);
  }

  // Advance all states over the window (t0, t1], consuming the events that
  // fall inside it: small jumps are binned into the segment that contains
  // them, large jumps split the window at their exact times.
  void window(std::vector<SpectralField>& states, double t0, double t1,
              double nominal_len, WienerSource& w,
              const std::vector<JumpEvent>& ev, std::size_t& cursor,
              std::size_t step_index,
              const std::function<void(double)>& after_large) const {
    double seg_start = t0;
    bool first = true;
    while (true) {
      double seg_end = t1;
      std::size_t large_idx = std::numeric_limits<std::size_t>::max();
      double mark_sum = 0.0;
      std::size_t j = cursor;
      while (j < ev.size() && ev[j].time <= t1) {
        if (ev[j].is_large) {
          large_idx = j;
          seg_end = ev[j].time;
          break;
        }
        mark_sum += ev[j].mark;
        ++j;
      }
      const bool has_large = large_idx != std::numeric_limits<std::size_t>::max();
      cursor = has_large ? large_idx + 1 : j;
      const double len = (first && !has_large)
                             ? nominal_len
                             : std::max(0.0, seg_end - seg_start);
      if (len > 0.0 || mark_sum != 0.0) {
        const SpectralField* dw = len > 0.0 ? w.increment(seg_start, len) : nullptr;
        for (auto& u : states) segment(u, len, dw, mark_sum, step_index);
      }
      if (!has_large) break;
      for (auto& u : states) {
        u = apply_large_jump(cfg_.preset, u, ev[large_idx].mark);
        if (!u.all_finite()) throw BlowupError(step_index);
      }
      if (after_large) after_large(ev[large_idx].time);
      seg_start = seg_end;
      first = false;
      if (!(seg_start < t1)) break;
    }
  }

 private:
  const SimConfig& cfg_;
  std::vector<cxd> etab_main_;
  SpectralField add_shape_;
  bool has_add_shape_ = false;
};

// Shared driver: cfg must be validated with the taper radius resolved.
struct MultiResult {
  bool blew_up = false;
  std::size_t blowup_step = 0;
  std::size_t consumed = 0;
};

MultiResult run_loop(const SimConfig& cfg, std::vector<SpectralField>& states,
                     WienerSource& ws, const std::vector<JumpEvent>& events,
                     const std::function<void(double)>& observe) {
  Engine eng(cfg);
  MultiResult res;
  double last_obs = -1.0;
  auto obs = [&](double t) {
    if (!observe || t == last_obs) return;
    last_obs = t;
    observe(t);
  };
  obs(0.0);
  const double T = cfg.horizon, dt = cfg.dt;
  const std::size_t n_steps =
      T > 0.0 ? std::size_t(std::ceil(T / dt - 1e-9)) : 0;
  std::size_t cursor = 0;
  try {
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double t0 = double(k) * dt;
      const bool final_step = (k + 1 == n_steps);
      const double t1 = final_step ? T : double(k + 1) * dt;
      const double nominal = final_step ? T - t0 : dt;
      eng.window(states, t0, t1, nominal, ws, events, cursor, k,
                 [&](double tj) { obs(tj); });
      if (final_step || (k + 1) % std::size_t(cfg.record_stride) == 0) obs(t1);
    }
  } catch (const BlowupError& e) {
    res.blew_up = true;
    res.blowup_step = e.step;
  }
  res.consumed = cursor;
  return res;
}

SpectralField build_initial(const SimConfig& cfg) {
  SpectralField u = make_initial(cfg.grid, cfg.initial);
  return project(u, cfg.model.effective_dim(cfg.grid));
}

double auto_radius(const SpectralField& u0) {
  return std::max(10.0 * hs_norm(u0, 1.0), 1.0);
}

std::vector<JumpEvent> sample_path_events(const SimConfig& cfg, uint64_t path_id) {
  rng::Stream jt(cfg.seed, path_id, rng::Sub::jump_times);
  rng::Stream jm(cfg.seed, path_id, rng::Sub::jump_marks);
  rng::Stream lt(cfg.seed, path_id, rng::Sub::large_times);
  rng::Stream lm(cfg.seed, path_id, rng::Sub::large_marks);
  return sample_jump_times(cfg.jumps, cfg.horizon, jt, jm, lt, lm);
}

}  // namespace

SpectralField make_initial(const TorusGrid& g, const InitialCondition& ic) {
  SpectralField u(g);
  switch (ic.kind) {
    case InitialCondition::Kind::zero:
      return u;
    case InitialCondition::Kind::single_mode: {
      if (ic.mode < 1 || ic.mode > g.n_modes)
        throw std::invalid_argument("initial: mode outside the retained band");
      u.c[ic.mode] = cxd{0.0, -ic.amp * std::sqrt(0.25 * kTwoPi)};
      return u;
    }
    case InitialCondition::Kind::soliton_like: {
      if (!(ic.amp > 0.0))
        throw std::invalid_argument("initial: soliton amplitude must be > 0");
      const double b = std::sqrt(ic.amp / 12.0);
      const double mid = 0.5 * kTwoPi;
      std::vector<double> vals(g.n_points);
      for (int j = 0; j < g.n_points; ++j) {
        const double x = g.point(j);
        double s = 0.0;
        for (int m = -3; m <= 3; ++m) {
          const double ch = std::cosh(b * (x - mid + kTwoPi * double(m)));
          s += 1.0 / (ch * ch);
        }
        vals[j] = ic.amp * s;
      }
      return forward_transform(g, vals);
    }
    case InitialCondition::Kind::random_hs: {
      rng::Stream s(ic.seed, 0, rng::Sub::init);
      u.c[0] = s.next_gaussian();
      for (int n = 1; n <= g.n_modes; ++n) {
        const double d = std::pow(1.0 + double(n) * double(n), -0.5 * (ic.s + 1.0));
        u.c[n] = cxd{s.next_gaussian() * d, s.next_gaussian() * d};
      }
      const double nrm = hs_norm(u, ic.s);
      if (nrm > 0.0) u *= ic.amp / nrm;
      return u;
    }
  }
  return u;
}

void SimConfig::validate() const {
  if (grid.n_modes < 1)
    throw std::invalid_argument("grid: n_modes must be >= 1");
  if (grid.n_points < 3 * grid.n_modes + 1)
    throw std::invalid_argument("grid: n_points < 3*n_modes + 1");
  model.validate(grid);
  wiener.validate();
  if (wiener.mode_count() > grid.n_modes + 1)
    throw std::invalid_argument("wiener: more covariance modes than the grid holds");
  jumps.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("time: dt must be positive and finite");
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("time: horizon must be finite and >= 0");
  if (horizon > 0.0 && dt > horizon * (1.0 + 1e-12))
    throw std::invalid_argument("time: dt exceeds horizon");
  if (record_stride < 1)
    throw std::invalid_argument("time: record_stride must be >= 1");
  const double nn = double(grid.n_modes);
  if (!std::isfinite(dt * (model.gamma + model.epsilon * nn * nn * nn * nn)))
    throw std::invalid_argument("time: linear symbol overflows at this dt");
  if (!preset.psi.c.empty() && !(preset.psi.grid == grid))
    throw std::invalid_argument("preset: psi lives on a different grid");
  if (!preset.psi_large.c.empty() && !(preset.psi_large.grid == grid))
    throw std::invalid_argument("preset: large-jump profile lives on a different grid");
  for (double v : preset.sigma)
    if (!std::isfinite(v))
      throw std::invalid_argument("preset: sigma entries must be finite");
}

PathNoise make_path_noise(const SimConfig& cfg, uint64_t path_id) {
  cfg.validate();
  PathNoise ns{rng::Stream(cfg.seed, path_id, rng::Sub::wiener), {}, 0, 0.0};
  ns.events = sample_path_events(cfg, path_id);
  return ns;
}

SpectralField step(const SpectralField& u, const SimConfig& cfg, PathNoise& ns) {
  SimConfig c = cfg;
  if (c.model.cutoff.radius <= 0.0)
    c.model.cutoff = CutoffProfile(auto_radius(u));
  Engine eng(c);
  LiveWiener ws(c.wiener, c.grid, ns.wiener);
  std::vector<SpectralField> st{u};
  std::size_t cursor = ns.cursor;
  eng.window(st, ns.t, ns.t + c.dt, c.dt, ws, ns.events, cursor, 0, nullptr);
  ns.cursor = cursor;
  ns.t += c.dt;
  ns.wiener = ws.stream();
  return std::move(st[0]);
}

SpectralField step_with_noise(const SpectralField& u, const SimConfig& cfg,
                              double dt, const SpectralField* dw,
                              const std::vector<double>& small_marks) {
  SimConfig c = cfg;
  if (c.model.cutoff.radius <= 0.0)
    c.model.cutoff = CutoffProfile(auto_radius(u));
  Engine eng(c);
  double mark_sum = 0.0;
  for (double m : small_marks) mark_sum += m;
  SpectralField out = u;
  eng.segment(out, dt, dw, mark_sum, 0);
  return out;
}

PathResult run_observed(const SimConfig& cfg, uint64_t path_id,
                        const std::function<void(double, const SpectralField&)>& observe) {
  cfg.validate();
  SimConfig c = cfg;
  std::vector<SpectralField> states{build_initial(c)};
  if (c.model.cutoff.radius <= 0.0)
    c.model.cutoff = CutoffProfile(auto_radius(states[0]));
  rng::Stream wstream(c.seed, path_id, rng::Sub::wiener);
  LiveWiener ws(c.wiener, c.grid, wstream);
  const auto events = sample_path_events(c, path_id);
  auto obs = observe
                 ? std::function<void(double)>([&](double t) { observe(t, states[0]); })
                 : std::function<void(double)>();
  const MultiResult r = run_loop(c, states, ws, events, obs);
  PathResult res;
  res.blew_up = r.blew_up;
  res.blowup_step = r.blowup_step;
  res.consumed.assign(events.begin(), events.begin() + r.consumed);
  res.final_state = std::move(states[0]);
  return res;
}

TrajectoryRecord run(const SimConfig& cfg, uint64_t path_id) {
  TrajectoryRecord rec;
  PathResult res = run_observed(cfg, path_id, [&](double t, const SpectralField& u) {
    rec.times.push_back(t);
    rec.l2.push_back(hs_norm(u, 0.0));
    rec.h1.push_back(hs_norm(u, 1.0));
    rec.h2.push_back(hs_norm(u, 2.0));
    rec.i0.push_back(functional_I0(u));
    rec.i1.push_back(functional_I1(u));
    rec.i2.push_back(functional_I2(u));
  });
  rec.jump_log = std::move(res.consumed);
  rec.final_state = std::move(res.final_state);
  rec.blew_up = res.blew_up;
  rec.blowup_step = res.blowup_step;
  return rec;
}

CoupledRecord run_coupled(const SimConfig& cfg, const InitialCondition& ic_a,
                          const InitialCondition& ic_b, uint64_t path_id) {
  const int dim = cfg.model.effective_dim(cfg.grid);
  return run_coupled_states(cfg, project(make_initial(cfg.grid, ic_a), dim),
                            project(make_initial(cfg.grid, ic_b), dim), path_id);
}

CoupledRecord run_coupled_states(const SimConfig& cfg, const SpectralField& a,
                                 const SpectralField& b, uint64_t path_id) {
  cfg.validate();
  SimConfig c = cfg;
  const int dim = c.model.effective_dim(c.grid);
  std::vector<SpectralField> states;
  states.push_back(project(a, dim));
  states.push_back(project(b, dim));
  if (c.model.cutoff.radius <= 0.0)
    c.model.cutoff = CutoffProfile(
        std::max(auto_radius(states[0]), auto_radius(states[1])));
  rng::Stream wstream(c.seed, path_id, rng::Sub::wiener);
  LiveWiener ws(c.wiener, c.grid, wstream);
  const auto events = sample_path_events(c, path_id);
  CoupledRecord rec;
  auto push = [](TrajectoryRecord& r, double t, const SpectralField& u) {
    r.times.push_back(t);
    r.l2.push_back(hs_norm(u, 0.0));
    r.h1.push_back(hs_norm(u, 1.0));
    r.h2.push_back(hs_norm(u, 2.0));
    r.i0.push_back(functional_I0(u));
    r.i1.push_back(functional_I1(u));
    r.i2.push_back(functional_I2(u));
  };
  auto obs = [&](double t) {
    push(rec.a, t, states[0]);
    push(rec.b, t, states[1]);
    SpectralField d = states[0];
    d -= states[1];
    rec.diff_l2.push_back(hs_norm(d, 0.0));
  };
  const MultiResult r = run_loop(c, states, ws, events, obs);
  rec.a.blew_up = rec.b.blew_up = r.blew_up;
  rec.a.blowup_step = rec.b.blowup_step = r.blowup_step;
  rec.a.jump_log.assign(events.begin(), events.begin() + r.consumed);
  rec.b.jump_log = rec.a.jump_log;
  rec.a.final_state = states[0];
  rec.b.final_state = states[1];
  return rec;
}

std::vector<double> record_grid(const SimConfig& cfg) {
  const double T = cfg.horizon, dt = cfg.dt;
  const std::size_t n_steps =
      T > 0.0 ? std::size_t(std::ceil(T / dt - 1e-9)) : 0;
  std::vector<double> g{0.0};
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const bool final_step = (k == n_steps);
    if (final_step || k % std::size_t(cfg.record_stride) == 0) {
      const double t = final_step ? T : double(k) * dt;
      if (t != g.back()) g.push_back(t);
    }
  }
  return g;
}

ConvergenceReport self_convergence(const SimConfig& cfg, int levels, int paths) {
  cfg.validate();
  if (levels < 2)
    throw std::invalid_argument("self_convergence: need at least 2 levels");
  if (paths < 1)
    throw std::invalid_argument("self_convergence: need at least 1 path");
  if (cfg.jumps.large_rate > 0.0)
    throw std::invalid_argument(
        "self_convergence: exact-time large-jump splits break the shared "
        "refinement grid; disable large jumps");
  const double T = cfg.horizon;
  const long long n0 = std::llround(T / cfg.dt);
  if (n0 < 1 || std::abs(double(n0) * cfg.dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument(
        "self_convergence: horizon must be an integer multiple of dt");

  // The reference sits two dyadic levels below the finest fitted level so the
  // finest error is not deflated by its own proximity to the reference.
  const int ref_levels = levels + 2;
  const double dtf = cfg.dt / double(1LL << ref_levels);
  const std::size_t n_fine = std::size_t(n0) << ref_levels;

  SimConfig base = cfg;
  {
    SpectralField u0 = build_initial(base);
    if (base.model.cutoff.radius <= 0.0)
      base.model.cutoff = CutoffProfile(auto_radius(u0));
  }
  base.record_stride = 1 << 30;

  ConvergenceReport rep;
  rep.paths = paths;
  rep.dts.resize(levels);
  rep.errors.assign(levels, 0.0);
  for (int l = 0; l < levels; ++l) rep.dts[l] = cfg.dt / double(1 << l);

  for (int p = 0; p < paths; ++p) {
    std::vector<SpectralField> table;
    if (base.wiener.enabled()) {
      rng::Stream s(base.seed, uint64_t(p), rng::Sub::wiener);
      table.reserve(n_fine);
      for (std::size_t i = 0; i < n_fine; ++i)
        table.push_back(sample_wiener_increment(base.wiener, base.grid, dtf, s));
    }
    const auto events = sample_path_events(base, uint64_t(p));

    auto run_level = [&](double dt_level) {
      SimConfig c = base;
      c.dt = dt_level;
      std::vector<SpectralField> st{build_initial(c)};
      ReplayWiener ws(&table, dtf, c.grid);
      const MultiResult r = run_loop(c, st, ws, events, nullptr);
      if (r.blew_up)
        throw std::runtime_error("self_convergence: a refinement level blew up");
      return std::move(st[0]);
    };

    const SpectralField ref = run_level(dtf);
    for (int l = 0; l < levels; ++l) {
      SpectralField d = run_level(rep.dts[l]);
      d -= ref;
      rep.errors[l] += hs_norm(d, 0.0);
    }
  }
  for (double& e : rep.errors) e /= double(paths);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int l = 0; l < levels; ++l) {
    const double x = std::log(rep.dts[l]);
    const double y = std::log(std::max(rep.errors[l], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nl = double(levels);
  rep.slope = (nl * sxy - sx * sy) / (nl * sxx - sx * sx);
  rep.monotone = true;
  for (int l = 0; l + 1 < levels; ++l)
    if (!(rep.errors[l + 1] < rep.errors[l])) rep.monotone = false;
  return rep;
}

}  // namespace skdv
