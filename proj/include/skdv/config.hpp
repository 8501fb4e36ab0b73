#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "skdv/integrator.hpp"

namespace skdv {

struct ConfigError : std::runtime_error {
  int line, col;
  ConfigError(int l, int c, const std::string& msg)
      : std::runtime_error("config:" + std::to_string(l) + ":" +
                           std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

struct ExperimentParams {
  int paths = 8;
  int threads = 0;  // 0 = SKDV_THREADS or hardware
  std::vector<int> p_values{2, 4, 6, 8};
  std::vector<double> radii;
  std::vector<double> deltas{1e-3};
  double burn_in = -1.0;  // < 0 = horizon/2
  int levels = 4;
  int conv_paths = 8;
  double clip = 1e6;
  double window_frac = 0.5;
  std::vector<std::string> observables{"l2_sq", "h2_sq"};
  double slope_lo = 0.7, slope_hi = 1.3;
  double tol = -1.0;  // < 0 = experiment default
  int samples = 4096;
  int seeds = 10;
};

// Raw file-level knobs; build() assembles and validates the SimConfig.
struct ParsedConfig {
  // [model]
  double gamma = 0.0, epsilon = 0.0;
  int galerkin_dim = 0;
  double cutoff_radius = 0.0;  // 0 = auto (resolved from the initial state)
  std::string ic_kind = "zero";
  int ic_mode = 1;
  double ic_amp = 1.0;
  double ic_s = 2.0;
  uint64_t ic_seed = 0;
  // [grid]
  int n_modes = 64;
  int n_points = 0;  // 0 = default power of two
  // [time]
  double dt = 1e-3, horizon = 1.0;
  int record_stride = 1;
  uint64_t seed = 0;
  // [noise.wiener]
  std::vector<double> q;
  double q_flat = 0.0;
  int q_modes = 0;
  // [noise.jumps]
  double rate = 0.0;
  std::string mark_kind = "uniform";
  double mark_lo = 0.2, mark_hi = 0.8, mark_value = 0.5;
  double large_rate = 0.0;
  std::string large_mark_kind = "fixed";
  double large_lo = 1.0, large_hi = 2.0, large_value = 1.5;
  // [noise.presets]
  std::string g_kind = "additive";
  std::vector<double> sigma;
  double sigma_flat = 0.0;
  int sigma_modes = 0;
  double beta_g = 0.0;
  int smooth_modes = 4;
  std::string k_kind = "additive_mark";
  int psi_mode = 1;
  double psi_amp = 0.0;
  double beta_k = 0.0;
  std::string large_shape = "none";
  int psi_large_mode = 1;
  double psi_large_amp = 0.0;
  double beta_large = 0.0;

  ExperimentParams exp;

  SimConfig build() const;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Every section and key with its resolved value; parsing the result
// reproduces the same resolved configuration (and the same rendered text).
std::string render_config(const ParsedConfig& pc);

}  // namespace skdv
