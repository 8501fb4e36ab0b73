#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "skdv/functionals.hpp"
#include "skdv/rng.hpp"
#include "skdv/spectral.hpp"

using namespace skdv;

namespace {

const double kPi = std::acos(-1.0);

SpectralField field_of(const TorusGrid& g, double (*fn)(double)) {
  std::vector<double> v(g.n_points);
  for (int j = 0; j < g.n_points; ++j) v[j] = fn(g.point(j));
  return forward_transform(g, v);
}

SpectralField random_field(const TorusGrid& g, rng::Stream& s, double scale) {
  SpectralField f(g);
  f.c[0] = {scale * (2.0 * s.next_unit() - 1.0), 0.0};
  for (int n = 1; n <= g.n_modes; ++n) {
    const double decay = scale / (1.0 + double(n) * double(n));
    f.c[n] = {decay * (2.0 * s.next_unit() - 1.0),
              decay * (2.0 * s.next_unit() - 1.0)};
  }
  return f;
}

// L2 pairing in the half-spectrum convention: (u,v) = u0 v0 + 2 Re sum u_k* v_k.
double inner(const SpectralField& a, const SpectralField& b) {
  double acc = a.c[0].real() * b.c[0].real();
  for (int n = 1; n <= a.grid.n_modes; ++n)
    acc += 2.0 * (std::conj(a.c[n]) * b.c[n]).real();
  return acc;
}

}  // namespace

TEST_CASE("cutoff profile") {
  const CutoffProfile p(4.0);

  SUBCASE("plateau, support edge, midpoint") {
    CHECK(p(0.0) == 1.0);
    CHECK(p(1.99) == 1.0);
    CHECK(p(2.0) == 1.0);
    CHECK(p(4.0) == 0.0);
    CHECK(p(7.5) == 0.0);
    CHECK(p(3.0) == doctest::Approx(0.5).epsilon(1e-12));  // symmetry center
  }

  SUBCASE("monotone non-increasing, values in [0,1]") {
    double prev = 1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double v = p(4.0 * double(i) / 4000.0);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }

  SUBCASE("slope bounded by the advertised constant over radius") {
    const int n = 20000;
    double max_slope = 0.0;
    double prev = p(0.0);
    for (int i = 1; i <= n; ++i) {
      const double x = 4.0 * double(i) / double(n);
      const double v = p(x);
      max_slope = std::max(max_slope, std::abs(v - prev) / (4.0 / double(n)));
      prev = v;
    }
    CHECK(max_slope <= kCutoffSlopeBound / 4.0);
  }

  SUBCASE("radius scaling: profile(radius r, x) = profile(1, x/r)") {
    const CutoffProfile unit(1.0);
    for (double x : {0.3, 0.6, 0.8, 0.95})
      CHECK(p(4.0 * x) == doctest::Approx(unit(x)).epsilon(1e-14));
  }

  SUBCASE("nonpositive radius rejected") {
    CHECK_THROWS(CutoffProfile(0.0));
    CHECK_THROWS(CutoffProfile(-1.0));
  }
}

TEST_CASE("invariant functionals on closed-form fields") {
  const TorusGrid g = TorusGrid::with_default_points(16);
  const SpectralField zero(g);
  const SpectralField vsin = field_of(g, [](double x) { return std::sin(x); });
  std::vector<double> ones(g.n_points, 1.0);
  const SpectralField vone = forward_transform(g, ones);

  CHECK(functional_I0(zero) == 0.0);
  CHECK(functional_I0(vsin) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(functional_I0(vone) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

  CHECK(functional_I1(zero) == 0.0);
  CHECK(functional_I1(vsin) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(functional_I1(vone) == doctest::Approx(-kPi / 6.0).epsilon(1e-12));

  CHECK(functional_I2(zero) == 0.0);
  CHECK(functional_I2(vone) == doctest::Approx(5.0 * kPi / 18.0).epsilon(1e-12));
  CHECK(functional_I2(vsin) == doctest::Approx(53.0 * kPi / 48.0).epsilon(1e-12));
}

TEST_CASE("first variation of the H2-level functional") {
  const TorusGrid g = TorusGrid::with_default_points(16);

  SUBCASE("v=0 annihilates the pairing") {
    const SpectralField zero(g);
    rng::Stream st(3, 0, rng::Sub::misc);
    const SpectralField w = random_field(g, st, 1.0);
    CHECK(frechet_I2_first(zero, w) == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("constant fields: only the cubic term survives") {
    std::vector<double> ones(g.n_points, 1.0);
    const SpectralField vone = forward_transform(g, ones);
    CHECK(frechet_I2_first(vone, vone) ==
          doctest::Approx(10.0 * kPi / 9.0).epsilon(1e-12));
  }

  SUBCASE("matches central differences on 100 random pairs") {
    rng::Stream st(5, 0, rng::Sub::misc);
    const double h = 1e-5;
    for (int rep = 0; rep < 100; ++rep) {
      const SpectralField v = random_field(g, st, 0.8);
      const SpectralField w = random_field(g, st, 0.8);
      SpectralField vp = v, vm = v;
      vp.add_scaled(h, w);
      vm.add_scaled(-h, w);
      const double fd = (functional_I2(vp) - functional_I2(vm)) / (2.0 * h);
      const double pairing = frechet_I2_first(v, w);
      // Relative at scale, with a floor so near-cancelling pairings don't
      // amplify finite-difference roundoff into spurious failures.
      CHECK(std::abs(fd - pairing) <= 1e-6 * std::max(std::abs(pairing), 1.0));
    }
  }
}

TEST_CASE("second variation of the H2-level functional") {
  const TorusGrid g = TorusGrid::with_default_points(16);

  SUBCASE("all-zero arguments") {
    const SpectralField zero(g);
    CHECK(frechet_I2_second(zero, zero, zero) == 0.0);
  }

  SUBCASE("v=0, h=w=sin: second variation of the square is twice the pairing") {
    // d^2/de^2 of integral (d^2(v+e h))^2 at v=0 gives 2*integral (h'')^2 = 2*pi
    // for h = sin; the finite-difference subcase below pins the same factor.
    const SpectralField zero(g);
    const SpectralField vsin = field_of(g, [](double x) { return std::sin(x); });
    CHECK(frechet_I2_second(zero, vsin, vsin) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
  }

  SUBCASE("symmetric in the two directions") {
    rng::Stream st(7, 0, rng::Sub::misc);
    const SpectralField v = random_field(g, st, 0.8);
    const SpectralField h = random_field(g, st, 0.8);
    const SpectralField w = random_field(g, st, 0.8);
    CHECK(frechet_I2_second(v, h, w) ==
          doctest::Approx(frechet_I2_second(v, w, h)).epsilon(1e-12));
  }

  SUBCASE("matches second central differences on 100 random triples") {
    rng::Stream st(9, 0, rng::Sub::misc);
    const double h = 1e-4;
    for (int rep = 0; rep < 100; ++rep) {
      const SpectralField v = random_field(g, st, 0.8);
      const SpectralField d1 = random_field(g, st, 0.8);
      const SpectralField d2 = random_field(g, st, 0.8);
      auto shifted = [&](double s1, double s2) {
        SpectralField x = v;
        x.add_scaled(s1, d1);
        x.add_scaled(s2, d2);
        return functional_I2(x);
      };
      const double fd = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) +
                         shifted(-h, -h)) /
                        (4.0 * h * h);
      const double form = frechet_I2_second(v, d1, d2);
      // Denominator floor guards near-zero pairings against FD roundoff.
      CHECK(std::abs(fd - form) <= 1e-5 * std::max(std::abs(form), 1.0));
    }
  }
}

TEST_CASE("orthogonality identities behind the energy balance") {
  const TorusGrid g = TorusGrid::with_default_points(24);
  rng::Stream st(11, 0, rng::Sub::misc);
  for (int rep = 0; rep < 20; ++rep) {
    SpectralField u = project(random_field(g, st, 1.5), 12);
    const SpectralField nl = pointwise_product(u, derivative(u, 1));
    const SpectralField d3 = derivative(u, 3);
    const double scale = std::max(1.0, hs_norm_sq(u, 0.0));
    CHECK(std::abs(inner(u, nl)) <= 1e-10 * scale);
    CHECK(std::abs(inner(u, d3)) <= 1e-10 * scale);
  }
}
