#include "skdv/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "skdv/io.hpp"

namespace skdv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Cursor {
  int line = 0;
  int col = 1;
};

[[noreturn]] void bail(const Cursor& at, const std::string& msg) {
  throw ConfigError(at.line, at.col, msg);
}

double to_double(const std::string& v, const Cursor& at) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    bail(at, "expected a number, got '" + v + "'");
  return x;
}

long long to_ll(const std::string& v, const Cursor& at) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    bail(at, "expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, const Cursor& at) {
  const long long x = to_ll(v, at);
  if (x < -2147483648LL || x > 2147483647LL) bail(at, "integer out of range");
  return int(x);
}

uint64_t to_u64(const std::string& v, const Cursor& at) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    bail(at, "expected a nonnegative integer, got '" + v + "'");
  return uint64_t(x);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  if (v.empty()) return out;
  for (;;) {
    const std::size_t comma = v.find(',', start);
    std::string item = v.substr(start, comma == std::string::npos
                                           ? std::string::npos
                                           : comma - start);
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? std::string()
                                         : item.substr(a, b - a + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> to_double_list(const std::string& v, const Cursor& at) {
  std::vector<double> out;
  for (const std::string& item : split_list(v)) {
    if (item.empty()) bail(at, "empty element in list");
    out.push_back(to_double(item, at));
  }
  return out;
}

std::vector<int> to_int_list(const std::string& v, const Cursor& at) {
  std::vector<int> out;
  for (const std::string& item : split_list(v)) {
    if (item.empty()) bail(at, "empty element in list");
    out.push_back(to_int(item, at));
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig pc;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    const std::size_t next = eol == std::string::npos ? text.size() + 1 : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) {
      pos = next;
      continue;
    }
    const std::size_t b = line.find_last_not_of(" \t");
    const std::string body = line.substr(a, b - a + 1);
    Cursor at{line_no, int(a) + 1};
    if (body.front() == '[') {
      if (body.back() != ']') bail(at, "unterminated section header");
      section = body.substr(1, body.size() - 2);
      if (section != "model" && section != "grid" && section != "time" &&
          section != "noise.wiener" && section != "noise.jumps" &&
          section != "noise.presets" && section != "experiment")
        bail(at, "unknown section [" + section + "]");
      pos = next;
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) bail(at, "expected 'key = value'");
    std::string key = body.substr(0, eq);
    std::string val = body.substr(eq + 1);
    {
      const auto ka = key.find_first_not_of(" \t");
      const auto kb = key.find_last_not_of(" \t");
      key = ka == std::string::npos ? std::string() : key.substr(ka, kb - ka + 1);
      const auto va = val.find_first_not_of(" \t");
      const auto vb = val.find_last_not_of(" \t");
      val = va == std::string::npos ? std::string() : val.substr(va, vb - va + 1);
    }
    if (key.empty()) bail(at, "missing key before '='");
    if (section.empty()) bail(at, "key '" + key + "' outside any section");
    Cursor vat{line_no, int(a + eq + 2)};

    bool known = true;
    if (section == "model") {
      if (key == "gamma") pc.gamma = to_double(val, vat);
      else if (key == "epsilon") pc.epsilon = to_double(val, vat);
      else if (key == "galerkin_dim") pc.galerkin_dim = to_int(val, vat);
      else if (key == "cutoff_radius")
        pc.cutoff_radius = (val == "auto") ? 0.0 : to_double(val, vat);
      else if (key == "ic_kind") pc.ic_kind = val;
      else if (key == "ic_mode") pc.ic_mode = to_int(val, vat);
      else if (key == "ic_amp") pc.ic_amp = to_double(val, vat);
      else if (key == "ic_s") pc.ic_s = to_double(val, vat);
      else if (key == "ic_seed") pc.ic_seed = to_u64(val, vat);
      else known = false;
    } else if (section == "grid") {
      if (key == "n_modes") pc.n_modes = to_int(val, vat);
      else if (key == "n_points") pc.n_points = to_int(val, vat);
      else known = false;
    } else if (section == "time") {
      if (key == "dt") pc.dt = to_double(val, vat);
      else if (key == "horizon") pc.horizon = to_double(val, vat);
      else if (key == "record_stride") pc.record_stride = to_int(val, vat);
      else if (key == "seed") pc.seed = to_u64(val, vat);
      else known = false;
    } else if (section == "noise.wiener") {
      if (key == "q") pc.q = to_double_list(val, vat);
      else if (key == "q_flat") pc.q_flat = to_double(val, vat);
      else if (key == "q_modes") pc.q_modes = to_int(val, vat);
      else known = false;
    } else if (section == "noise.jumps") {
      if (key == "rate") pc.rate = to_double(val, vat);
      else if (key == "mark_kind") pc.mark_kind = val;
      else if (key == "mark_lo") pc.mark_lo = to_double(val, vat);
      else if (key == "mark_hi") pc.mark_hi = to_double(val, vat);
      else if (key == "mark_value") pc.mark_value = to_double(val, vat);
      else if (key == "large_rate") pc.large_rate = to_double(val, vat);
      else if (key == "large_mark_kind") pc.large_mark_kind = val;
      else if (key == "large_lo") pc.large_lo = to_double(val, vat);
      else if (key == "large_hi") pc.large_hi = to_double(val, vat);
      else if (key == "large_value") pc.large_value = to_double(val, vat);
      else known = false;
    } else if (section == "noise.presets") {
      if (key == "g_kind") pc.g_kind = val;
      else if (key == "sigma") pc.sigma = to_double_list(val, vat);
      else if (key == "sigma_flat") pc.sigma_flat = to_double(val, vat);
      else if (key == "sigma_modes") pc.sigma_modes = to_int(val, vat);
      else if (key == "beta_g") pc.beta_g = to_double(val, vat);
      else if (key == "smooth_modes") pc.smooth_modes = to_int(val, vat);
      else if (key == "k_kind") pc.k_kind = val;
      else if (key == "psi_mode") pc.psi_mode = to_int(val, vat);
      else if (key == "psi_amp") pc.psi_amp = to_double(val, vat);
      else if (key == "beta_k") pc.beta_k = to_double(val, vat);
      else if (key == "large_shape") pc.large_shape = val;
      else if (key == "psi_large_mode") pc.psi_large_mode = to_int(val, vat);
      else if (key == "psi_large_amp") pc.psi_large_amp = to_double(val, vat);
      else if (key == "beta_large") pc.beta_large = to_double(val, vat);
      else known = false;
    } else if (section == "experiment") {
      auto& e = pc.exp;
      if (key == "paths") e.paths = to_int(val, vat);
      else if (key == "threads") e.threads = to_int(val, vat);
      else if (key == "p_values") e.p_values = to_int_list(val, vat);
      else if (key == "radii") e.radii = to_double_list(val, vat);
      else if (key == "deltas") e.deltas = to_double_list(val, vat);
      else if (key == "burn_in") e.burn_in = to_double(val, vat);
      else if (key == "levels") e.levels = to_int(val, vat);
      else if (key == "conv_paths") e.conv_paths = to_int(val, vat);
      else if (key == "clip") e.clip = to_double(val, vat);
      else if (key == "window_frac") e.window_frac = to_double(val, vat);
      else if (key == "observables") e.observables = split_list(val);
      else if (key == "slope_lo") e.slope_lo = to_double(val, vat);
      else if (key == "slope_hi") e.slope_hi = to_double(val, vat);
      else if (key == "tol") e.tol = to_double(val, vat);
      else if (key == "samples") e.samples = to_int(val, vat);
      else if (key == "seeds") e.seeds = to_int(val, vat);
      else known = false;
    }
    if (!known) bail(at, "unknown key '" + key + "' in section [" + section + "]");
    pos = next;
  }
  return pc;
}

ParsedConfig parse_config_file(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

namespace {

MarkDist build_mark(const std::string& kind, double lo, double hi, double value,
                    const char* which) {
  MarkDist m;
  if (kind == "uniform") m.kind = MarkDist::Kind::uniform;
  else if (kind == "sym_uniform") m.kind = MarkDist::Kind::sym_uniform;
  else if (kind == "fixed") m.kind = MarkDist::Kind::fixed;
  else
    throw std::invalid_argument(std::string(which) +
                                ": unknown mark kind '" + kind + "'");
  m.lo = lo;
  m.hi = hi;
  m.value = value;
  return m;
}

SpectralField sine_profile(const TorusGrid& g, int mode, double amp,
                           const char* which) {
  if (mode < 1 || mode > g.n_modes)
    throw std::invalid_argument(std::string(which) + ": mode outside the band");
  SpectralField f(g);
  f.c[mode] = cxd{0.0, -amp * std::sqrt(0.25 * kTwoPi)};
  return f;
}

}  // namespace

SimConfig ParsedConfig::build() const {
  SimConfig cfg;
  cfg.grid = n_points == 0 ? TorusGrid::with_default_points(n_modes)
                           : TorusGrid(n_modes, n_points);
  cfg.model.gamma = gamma;
  cfg.model.epsilon = epsilon;
  cfg.model.galerkin_dim = galerkin_dim;
  if (cutoff_radius > 0.0) cfg.model.cutoff = CutoffProfile(cutoff_radius);

  if (ic_kind == "zero") cfg.initial.kind = InitialCondition::Kind::zero;
  else if (ic_kind == "single_mode")
    cfg.initial.kind = InitialCondition::Kind::single_mode;
  else if (ic_kind == "soliton_like")
    cfg.initial.kind = InitialCondition::Kind::soliton_like;
  else if (ic_kind == "random_hs")
    cfg.initial.kind = InitialCondition::Kind::random_hs;
  else
    throw std::invalid_argument("model: unknown ic_kind '" + ic_kind + "'");
  cfg.initial.mode = ic_mode;
  cfg.initial.amp = ic_amp;
  cfg.initial.s = ic_s;
  cfg.initial.seed = ic_seed;

  cfg.dt = dt;
  cfg.horizon = horizon;
  cfg.record_stride = record_stride;
  cfg.seed = seed;

  if (!q.empty()) cfg.wiener.q = q;
  else if (q_modes > 0) cfg.wiener.q.assign(std::size_t(q_modes), q_flat);

  cfg.jumps.rate = rate;
  cfg.jumps.mark = build_mark(mark_kind, mark_lo, mark_hi, mark_value, "jumps");
  cfg.jumps.large_rate = large_rate;
  cfg.jumps.large_mark =
      build_mark(large_mark_kind, large_lo, large_hi, large_value, "jumps");

  if (g_kind == "additive") cfg.preset.g_kind = GKind::additive;
  else if (g_kind == "linear_multiplicative")
    cfg.preset.g_kind = GKind::linear_multiplicative;
  else
    throw std::invalid_argument("presets: unknown g_kind '" + g_kind + "'");
  if (!sigma.empty()) cfg.preset.sigma = sigma;
  else if (sigma_modes > 0)
    cfg.preset.sigma.assign(std::size_t(sigma_modes), sigma_flat);
  cfg.preset.beta_g = beta_g;
  cfg.preset.smooth_modes = smooth_modes;

  if (k_kind == "additive_mark") cfg.preset.k_kind = KKind::additive_mark;
  else if (k_kind == "linear_mark") cfg.preset.k_kind = KKind::linear_mark;
  else
    throw std::invalid_argument("presets: unknown k_kind '" + k_kind + "'");
  if (psi_amp != 0.0)
    cfg.preset.psi = sine_profile(cfg.grid, psi_mode, psi_amp, "presets: psi");
  cfg.preset.beta_k = beta_k;

  if (large_shape == "none") cfg.preset.large_kind = LargeKind::none;
  else if (large_shape == "additive_mark")
    cfg.preset.large_kind = LargeKind::additive_mark;
  else if (large_shape == "linear_mark")
    cfg.preset.large_kind = LargeKind::linear_mark;
  else
    throw std::invalid_argument("presets: unknown large_shape '" + large_shape + "'");
  if (psi_large_amp != 0.0)
    cfg.preset.psi_large =
        sine_profile(cfg.grid, psi_large_mode, psi_large_amp, "presets: psi_large");
  cfg.preset.beta_large = beta_large;

  cfg.validate();
  return cfg;
}

std::string render_config(const ParsedConfig& pc) {
  std::string s;
  s += "[model]\n";
  s += "gamma = " + fmt(pc.gamma) + "\n";
  s += "epsilon = " + fmt(pc.epsilon) + "\n";
  s += "galerkin_dim = " + std::to_string(pc.galerkin_dim) + "\n";
  s += "cutoff_radius = " +
       (pc.cutoff_radius > 0.0 ? fmt(pc.cutoff_radius) : std::string("auto")) + "\n";
  s += "ic_kind = " + pc.ic_kind + "\n";
  s += "ic_mode = " + std::to_string(pc.ic_mode) + "\n";
  s += "ic_amp = " + fmt(pc.ic_amp) + "\n";
  s += "ic_s = " + fmt(pc.ic_s) + "\n";
  s += "ic_seed = " + std::to_string(pc.ic_seed) + "\n";
  s += "\n[grid]\n";
  s += "n_modes = " + std::to_string(pc.n_modes) + "\n";
  s += "n_points = " + std::to_string(pc.n_points) + "\n";
  s += "\n[time]\n";
  s += "dt = " + fmt(pc.dt) + "\n";
  s += "horizon = " + fmt(pc.horizon) + "\n";
  s += "record_stride = " + std::to_string(pc.record_stride) + "\n";
  s += "seed = " + std::to_string(pc.seed) + "\n";
  s += "\n[noise.wiener]\n";
  s += "q = " + join(pc.q) + "\n";
  s += "q_flat = " + fmt(pc.q_flat) + "\n";
  s += "q_modes = " + std::to_string(pc.q_modes) + "\n";
  s += "\n[noise.jumps]\n";
  s += "rate = " + fmt(pc.rate) + "\n";
  s += "mark_kind = " + pc.mark_kind + "\n";
  s += "mark_lo = " + fmt(pc.mark_lo) + "\n";
  s += "mark_hi = " + fmt(pc.mark_hi) + "\n";
  s += "mark_value = " + fmt(pc.mark_value) + "\n";
  s += "large_rate = " + fmt(pc.large_rate) + "\n";
  s += "large_mark_kind = " + pc.large_mark_kind + "\n";
  s += "large_lo = " + fmt(pc.large_lo) + "\n";
  s += "large_hi = " + fmt(pc.large_hi) + "\n";
  s += "large_value = " + fmt(pc.large_value) + "\n";
  s += "\n[noise.presets]\n";
  s += "g_kind = " + pc.g_kind + "\n";
  s += "sigma = " + join(pc.sigma) + "\n";
  s += "sigma_flat = " + fmt(pc.sigma_flat) + "\n";
  s += "sigma_modes = " + std::to_string(pc.sigma_modes) + "\n";
  s += "beta_g = " + fmt(pc.beta_g) + "\n";
  s += "smooth_modes = " + std::to_string(pc.smooth_modes) + "\n";
  s += "k_kind = " + pc.k_kind + "\n";
  s += "psi_mode = " + std::to_string(pc.psi_mode) + "\n";
  s += "psi_amp = " + fmt(pc.psi_amp) + "\n";
  s += "beta_k = " + fmt(pc.beta_k) + "\n";
  s += "large_shape = " + pc.large_shape + "\n";
  s += "psi_large_mode = " + std::to_string(pc.psi_large_mode) + "\n";
  s += "psi_large_amp = " + fmt(pc.psi_large_amp) + "\n";
  s += "beta_large = " + fmt(pc.beta_large) + "\n";
  s += "\n[experiment]\n";
  const ExperimentParams& e = pc.exp;
  s += "paths = " + std::to_string(e.paths) + "\n";
  s += "threads = " + std::to_string(e.threads) + "\n";
  s += "p_values = " + join(e.p_values) + "\n";
  s += "radii = " + join(e.radii) + "\n";
  s += "deltas = " + join(e.deltas) + "\n";
  s += "burn_in = " + fmt(e.burn_in) + "\n";
  s += "levels = " + std::to_string(e.levels) + "\n";
  s += "conv_paths = " + std::to_string(e.conv_paths) + "\n";
  s += "clip = " + fmt(e.clip) + "\n";
  s += "window_frac = " + fmt(e.window_frac) + "\n";
  s += "observables = " + join(e.observables) + "\n";
  s += "slope_lo = " + fmt(e.slope_lo) + "\n";
  s += "slope_hi = " + fmt(e.slope_hi) + "\n";
  s += "tol = " + fmt(e.tol) + "\n";
  s += "samples = " + std::to_string(e.samples) + "\n";
  s += "seeds = " + std::to_string(e.seeds) + "\n";
  return s;
}

}  // namespace skdv
