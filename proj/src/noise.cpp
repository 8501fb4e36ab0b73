#include "skdv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skdv/spectral.hpp"

namespace skdv {

namespace {

void check_same_grid(const SpectralField& a, const SpectralField& b,
                     const char* what) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument(std::string(what) + ": grids differ");
}

// E[ξ^p] for even p, closed form per mark family.
double mark_even_moment(const MarkDist& m, int p) {
  switch (m.kind) {
    case MarkDist::Kind::fixed:
      return std::pow(m.value, p);
    case MarkDist::Kind::uniform: {
      if (m.hi == m.lo) return std::pow(m.lo, p);
      const double a = std::pow(m.lo, p + 1), b = std::pow(m.hi, p + 1);
      return (b - a) / (double(p + 1) * (m.hi - m.lo));
    }
    case MarkDist::Kind::sym_uniform: {
      // |ξ| ~ U(lo,hi) with lo,hi >= 0; even powers ignore the sign.
      if (m.hi == m.lo) return std::pow(m.lo, p);
      const double a = std::pow(m.lo, p + 1), b = std::pow(m.hi, p + 1);
      return (b - a) / (double(p + 1) * (m.hi - m.lo));
    }
  }
  return 0.0;
}

}  // namespace

void WienerSpec::validate() const {
  for (double v : q)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("wiener: eigenvalues must be finite and >= 0");
}

double MarkDist::sample(rng::Stream& s) const {
  switch (kind) {
    case Kind::fixed:
      return value;
    case Kind::uniform:
      return lo + (hi - lo) * s.next_unit();
    case Kind::sym_uniform: {
      const double m = lo + (hi - lo) * s.next_unit();
      return s.next_unit() < 0.5 ? -m : m;
    }
  }
  return 0.0;
}

double MarkDist::mean() const {
  switch (kind) {
    case Kind::fixed:
      return value;
    case Kind::uniform:
      return 0.5 * (lo + hi);
    case Kind::sym_uniform:
      return 0.0;
  }
  return 0.0;
}

double MarkDist::mean_sq() const { return mark_even_moment(*this, 2); }

double MarkDist::min_abs() const {
  switch (kind) {
    case Kind::fixed:
      return std::abs(value);
    case Kind::uniform:
      if (lo <= 0.0 && hi >= 0.0) return 0.0;
      return std::min(std::abs(lo), std::abs(hi));
    case Kind::sym_uniform:
      return std::min(std::abs(lo), std::abs(hi));
  }
  return 0.0;
}

double MarkDist::max_abs() const {
  return std::max(std::abs(lo), std::max(std::abs(hi), kind == Kind::fixed
                                                           ? std::abs(value)
                                                           : 0.0));
}

void MarkDist::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(value))
    throw std::invalid_argument("mark: parameters must be finite");
  if (kind != Kind::fixed && hi < lo)
    throw std::invalid_argument("mark: hi < lo");
  if (kind == Kind::sym_uniform && lo < 0.0)
    throw std::invalid_argument("mark: sym_uniform needs 0 <= lo <= hi");
}

void LevySpec::validate() const {
  if (!(rate >= 0.0) || !std::isfinite(rate) || !(large_rate >= 0.0) ||
      !std::isfinite(large_rate))
    throw std::invalid_argument("jumps: rates must be finite and >= 0");
  mark.validate();
  large_mark.validate();
  if (rate > 0.0 && mark.max_abs() > 1.0)
    throw std::invalid_argument("jumps: small marks must satisfy |xi| < 1");
  if (large_rate > 0.0 && large_mark.min_abs() < 1.0)
    throw std::invalid_argument("jumps: large marks must satisfy |xi| >= 1");
}

SpectralField sample_wiener_increment(const WienerSpec& spec, const TorusGrid& g,
                                      double dt, rng::Stream& s) {
  if (spec.mode_count() > g.n_modes + 1)
    throw std::invalid_argument("wiener: more covariance modes than the grid holds");
  SpectralField dw(g);
  if (!spec.enabled()) return dw;
  dw.c[0] = std::sqrt(spec.q[0] * dt) * s.next_gaussian();
  for (int k = 1; k < spec.mode_count(); ++k) {
    const double zc = s.next_gaussian();
    const double zs = s.next_gaussian();
    const double a = std::sqrt(0.5 * spec.q[k] * dt);
    dw.c[k] = cxd{a * zc, -a * zs};
  }
  return dw;
}

std::vector<JumpEvent> sample_jump_times(const LevySpec& spec, double horizon,
                                         rng::Stream& small_times,
                                         rng::Stream& small_marks,
                                         rng::Stream& large_times,
                                         rng::Stream& large_marks) {
  spec.validate();
  std::vector<JumpEvent> small, large;
  if (spec.rate > 0.0) {
    double t = small_times.next_exponential(spec.rate);
    while (t < horizon) {
      small.push_back({t, spec.mark.sample(small_marks), false});
      t += small_times.next_exponential(spec.rate);
    }
  }
  if (spec.large_rate > 0.0) {
    double t = large_times.next_exponential(spec.large_rate);
    while (t < horizon) {
      large.push_back({t, spec.large_mark.sample(large_marks), true});
      t += large_times.next_exponential(spec.large_rate);
    }
  }
  std::vector<JumpEvent> merged(small.size() + large.size());
  std::merge(small.begin(), small.end(), large.begin(), large.end(),
             merged.begin(),
             [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  return merged;
}

double g_multiplier(const CoefficientPreset& p, const SpectralField& u) {
  if (p.g_kind == GKind::additive) return 1.0;
  const int m = std::min(p.smooth_modes, u.n_modes());
  double sq = 0.0;
  for (int k = 0; k <= m; ++k) sq += (k == 0 ? 1.0 : 2.0) * std::norm(u.c[k]);
  return 1.0 + p.beta_g * std::sqrt(sq);
}

SpectralField apply_G(const CoefficientPreset& p, const SpectralField& u,
                      const SpectralField& dw) {
  check_same_grid(u, dw, "apply_G");
  const double mult = g_multiplier(p, u);
  SpectralField out(u.grid);
  const int len = std::min(int(p.sigma.size()), u.n_modes() + 1);
  for (int k = 0; k < len; ++k) out.c[k] = mult * p.sigma[k] * dw.c[k];
  return out;
}

double g_hs_norm_sq(const CoefficientPreset& p, const WienerSpec& spec,
                    const SpectralField& u, double s) {
  const double mult = g_multiplier(p, u);
  const int len = std::min({int(p.sigma.size()), spec.mode_count(), u.n_modes() + 1});
  double sum = 0.0;
  for (int k = 0; k < len; ++k) {
    const double w = (k == 0 ? 1.0 : 2.0) * std::pow(1.0 + double(k) * double(k), s);
    sum += w * spec.q[k] * p.sigma[k] * p.sigma[k];
  }
  return mult * mult * sum;
}

namespace {

// ψ + β u, tolerating an unset (empty) profile.
SpectralField jump_shape(const SpectralField& psi, double beta,
                         const SpectralField& u, bool with_state) {
  SpectralField shape(u.grid);
  if (!psi.c.empty()) {
    check_same_grid(psi, u, "jump shape");
    shape = psi;
  }
  if (with_state) shape.add_scaled(beta, u);
  return shape;
}

}  // namespace

SpectralField apply_K(const CoefficientPreset& p, const SpectralField& u,
                      double mark) {
  const double a = std::abs(mark);
  if (!(a > 0.0) || a >= 1.0)
    throw std::domain_error("apply_K: mark must satisfy 0 < |xi| < 1");
  SpectralField shape =
      jump_shape(p.psi, p.beta_k, u, p.k_kind == KKind::linear_mark);
  shape *= mark;
  return shape;
}

SpectralField compensator_drift(const CoefficientPreset& p, const LevySpec& spec,
                                const SpectralField& u) {
  SpectralField out(u.grid);
  if (spec.rate <= 0.0) return out;
  const double weight = spec.rate * spec.mark.mean();
  if (weight == 0.0) return out;
  out = jump_shape(p.psi, p.beta_k, u, p.k_kind == KKind::linear_mark);
  out *= weight;
  return out;
}

SpectralField apply_large_jump(const CoefficientPreset& p,
                               const SpectralField& u, double mark) {
  if (p.large_kind == LargeKind::none) return u;
  if (std::abs(mark) < 1.0)
    throw std::domain_error("apply_large_jump: mark must satisfy |xi| >= 1");
  SpectralField shape = jump_shape(p.psi_large, p.beta_large, u,
                                   p.large_kind == LargeKind::linear_mark);
  SpectralField out = u;
  out.add_scaled(mark, shape);
  return out;
}

AssumptionReport validate_assumptions(const CoefficientPreset& p,
                                      const WienerSpec& w, const LevySpec& l,
                                      const TorusGrid& g, int sample_count,
                                      uint64_t seed) {
  if (sample_count < 4)
    throw std::invalid_argument("validate_assumptions: need at least 4 samples");
  w.validate();
  l.validate();
  rng::Stream s(seed, 0, rng::Sub::misc);

  // Random fields spanning decay exponents and norm scales; pairs of
  // consecutive samples drive the Lipschitz ratios.
  std::vector<SpectralField> fields;
  fields.reserve(sample_count);
  for (int i = 0; i < sample_count; ++i) {
    SpectralField v(g);
    const double decay = 0.75 + s.next_unit();
    v.c[0] = s.next_gaussian();
    for (int n = 1; n <= g.n_modes; ++n) {
      const double d = std::pow(1.0 + double(n) * double(n), -decay);
      v.c[n] = cxd{s.next_gaussian() * d, s.next_gaussian() * d};
    }
    const double target = std::exp(std::log(0.05) +
                                   (std::log(20.0) - std::log(0.05)) * s.next_unit());
    const double cur = hs_norm(v, double(i % 3));
    if (cur > 0.0) v *= target / cur;
    fields.push_back(std::move(v));
  }

  const double jump_base_rate = l.rate;
  AssumptionReport rep;
  rep.sample_count = sample_count;
  double k1 = 0.0, k2 = 0.0, lc = 0.0;

  for (int i = 0; i < sample_count; ++i) {
    const SpectralField& v = fields[i];
    for (int si = 0; si <= 2; ++si) {
      const double ss = double(si);
      const double den = 1.0 + hs_norm_sq(v, ss);
      k1 = std::max(k1, g_hs_norm_sq(p, w, v, ss) / den);
      if (jump_base_rate > 0.0) {
        SpectralField shape =
            jump_shape(p.psi, p.beta_k, v, p.k_kind == KKind::linear_mark);
        const double shape_sq = hs_norm_sq(shape, ss);
        // ∫|K(v,ξ)|²_{H^s} ν(dξ) = rate·E[ξ²]·|ψ̃|²  (marks enter linearly)
        k2 = std::max(k2, jump_base_rate * l.mark.mean_sq() * shape_sq / den);
        if (si == 0) {
          // higher even moments of the jump size in L², against 1 + |v|^{2p}
          const double l2sq = hs_norm_sq(v, 0.0);
          double sp = shape_sq;
          for (int pp = 2; pp <= 4; ++pp) {
            sp *= shape_sq;
            const double vp = 1.0 + std::pow(l2sq, pp);
            k2 = std::max(k2, jump_base_rate * mark_even_moment(l.mark, 2 * pp) *
                                  sp / vp);
          }
        }
      }
    }
    // Lipschitz over the consecutive pair.
    const SpectralField& u2 = fields[(i + 1) % sample_count];
    SpectralField d = v;
    d -= u2;
    for (int si = 0; si <= 2; ++si) {
      const double ss = double(si);
      const double dsq = hs_norm_sq(d, ss);
      if (dsq < 1e-14) continue;
      double num = 0.0;
      if (p.g_kind == GKind::linear_multiplicative) {
        const double dm = g_multiplier(p, v) - g_multiplier(p, u2);
        // base HS sum without the state factor
        CoefficientPreset base = p;
        base.g_kind = GKind::additive;
        num += dm * dm * g_hs_norm_sq(base, w, v, ss);
      }
      if (jump_base_rate > 0.0 && p.k_kind == KKind::linear_mark)
        num += jump_base_rate * l.mark.mean_sq() * p.beta_k * p.beta_k * dsq;
      lc = std::max(lc, num / dsq);
    }
    if (i + 1 == sample_count / 2) {
      rep.kappa1_half = k1;
      rep.kappa2_half = k2;
      rep.lipschitz_half = lc;
    }
  }
  rep.kappa1 = k1;
  rep.kappa2 = k2;
  rep.lipschitz_c = lc;
  rep.pass = std::isfinite(k1) && std::isfinite(k2) && std::isfinite(lc);
  return rep;
}

}  // namespace skdv
