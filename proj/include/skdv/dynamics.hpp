#pragma once

#include "skdv/functionals.hpp"
#include "skdv/grid.hpp"

namespace skdv {

struct ModelParams {
  double gamma = 0.0;       // linear damping rate
  double epsilon = 0.0;     // fourth-order regularization strength
  int galerkin_dim = 0;     // retained band for the nonlinearity; 0 = full grid
  CutoffProfile cutoff;     // H¹-norm taper feeding the truncated operator

  int effective_dim(const TorusGrid& g) const {
    return galerkin_dim > 0 ? galerkin_dim : g.n_modes;
  }
  void validate(const TorusGrid& g) const;
};

// u·∂ₓu via collocation products (alias headroom from the grid).
SpectralField nonlinear_term(const SpectralField& u);

// Full drift  θ(|u|_{H¹})·(∂³ₓu + P_N(u ∂ₓu)) + γu + ε∂⁴ₓu  with the sign
// convention that du = -drift dt + noise.
SpectralField drift(const SpectralField& u, const ModelParams& p);

// Per-mode symbol of the linear flow exp(t·L): L_n = i n³ - γ - ε n⁴.
cxd linear_symbol(const ModelParams& p, int n);

}  // namespace skdv
