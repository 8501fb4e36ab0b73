#include "skdv/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "skdv/kernels.hpp"

namespace skdv {

TorusGrid::TorusGrid(int modes, int points) : n_modes(modes), n_points(points) {
  if (modes < 1) throw std::invalid_argument("grid: n_modes must be >= 1");
  if (points < 3 * modes + 1)
    throw std::invalid_argument(
        "grid: n_points must be >= 3*n_modes + 1 (dealiasing headroom)");
}

TorusGrid TorusGrid::with_default_points(int modes) {
  const int need = std::max(4 * modes, 3 * modes + 1);
  int p = 1;
  while (p < need) p <<= 1;
  return TorusGrid(modes, p);
}

bool SpectralField::all_finite() const {
  for (const cxd& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

namespace {
void check_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("field: grids differ");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same_grid(*this, o);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same_grid(*this, o);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (cxd& z : c) z *= s;
  return *this;
}

SpectralField& SpectralField::add_scaled(double s, const SpectralField& o) {
  check_same_grid(*this, o);
  kern::ops().axpy(s, reinterpret_cast<const double*>(o.c.data()),
                   reinterpret_cast<double*>(c.data()), 2 * c.size());
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField f) { return f *= s; }

}  // namespace skdv
