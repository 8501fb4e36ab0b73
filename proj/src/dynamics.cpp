#include "skdv/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "skdv/spectral.hpp"

namespace skdv {

void ModelParams::validate(const TorusGrid& g) const {
  if (!std::isfinite(gamma) || gamma < 0.0)
    throw std::invalid_argument("model: gamma must be finite and >= 0");
  if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("model: epsilon must lie in [0, 1]");
  if (galerkin_dim < 0 || galerkin_dim > g.n_modes)
    throw std::invalid_argument("model: galerkin_dim outside [0, n_modes]");
}

SpectralField nonlinear_term(const SpectralField& u) {
  return pointwise_product(u, derivative(u, 1));
}

SpectralField drift(const SpectralField& u, const ModelParams& p) {
  const int dim = p.effective_dim(u.grid);
  const double theta = p.cutoff(hs_norm(u, 1.0));
  SpectralField out(u.grid);
  if (theta != 0.0) {
    out = derivative(u, 3);
    out += nonlinear_term(u);
    out = project(out, dim);
    out *= theta;
  }
  out.add_scaled(p.gamma, u);
  if (p.epsilon != 0.0) out.add_scaled(p.epsilon, derivative(u, 4));
  return out;
}

cxd linear_symbol(const ModelParams& p, int n) {
  const double n2 = double(n) * double(n);
  return cxd{-(p.gamma + p.epsilon * n2 * n2), n2 * double(n)};
}

}  // namespace skdv
