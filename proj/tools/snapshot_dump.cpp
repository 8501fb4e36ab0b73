// Prints the contents of a binary spectral snapshot: mode count, per-mode
// coefficients, and the derived Sobolev norms. Usage: snapshot_dump <file>
// [--modes k] limits the coefficient listing to the first k modes.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>

#include "skdv/functionals.hpp"
#include "skdv/io.hpp"
#include "skdv/spectral.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: snapshot_dump <file> [--modes k]\n");
    return 1;
  }
  long max_modes = -1;
  const char* path = nullptr;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--modes") == 0 && i + 1 < argc) {
      max_modes = std::strtol(argv[++i], nullptr, 10);
    } else if (path == nullptr) {
      path = argv[i];
    } else {
      std::fprintf(stderr, "unexpected argument: %s\n", argv[i]);
      return 1;
    }
  }
  if (path == nullptr) {
    std::fprintf(stderr, "usage: snapshot_dump <file> [--modes k]\n");
    return 1;
  }
  try {
    const skdv::SpectralField u = skdv::read_snapshot(path);
    const int n = u.grid.n_modes;
    std::printf("modes: %d (coefficients for n = 0..%d)\n", n, n);
    std::printf("l2   = %.17g\n", skdv::hs_norm(u, 0.0));
    std::printf("h1   = %.17g\n", skdv::hs_norm(u, 1.0));
    std::printf("h2   = %.17g\n", skdv::hs_norm(u, 2.0));
    std::printf("i0   = %.17g\n", skdv::functional_I0(u));
    std::printf("i1   = %.17g\n", skdv::functional_I1(u));
    std::printf("i2   = %.17g\n", skdv::functional_I2(u));
    const long limit =
        max_modes < 0 ? n : (max_modes < n ? max_modes : n);
    for (long k = 0; k <= limit; ++k)
      std::printf("c[%ld] = %.17g %+.17gi\n", k, u.c[k].real(), u.c[k].imag());
    if (limit < n) std::printf("... (%ld more modes)\n", (long)(n - limit));
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
