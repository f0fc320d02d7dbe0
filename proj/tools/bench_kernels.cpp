// Benchmark of the series-multiply kernel (serial reference vs OpenMP) and
// of the sample-parallel reflection sweep. Wall-clock timing only; the
// correctness of serial/parallel agreement is covered by the kernel tests.

#include <chrono>
#include <cstdio>
#include <random>

#include "crjet/parser.hpp"
#include "crjet/reflection.hpp"
#include "crjet/series_kernels.hpp"

using namespace crjet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Series random_series(const RingPtr& ring, std::mt19937_64& rng, double fill) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  Series out(ring);
  MultiIndex exps(static_cast<size_t>(ring->nvars()), 0);
  // Walk all monomials of degree <= N by odometer.
  while (true) {
    int deg = 0;
    for (int e : exps) deg += e;
    if (deg <= ring->order() && coin(rng) < fill) {
      out.add_term(ring->pack(exps),
                   CRat(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng))));
    }
    int pos = 0;
    while (pos < ring->nvars()) {
      ++exps[static_cast<size_t>(pos)];
      int total = 0;
      for (int e : exps) total += e;
      if (total <= ring->order()) break;
      exps[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == ring->nvars()) break;
  }
  return out;
}

double time_multiply(const Series& a, const Series& b, bool parallel, int reps) {
  kernels::set_parallel_enabled(parallel);
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto start = Clock::now();
    Series c = a * b;
    best = std::min(best, seconds_since(start));
    if (c.is_zero()) std::puts("(unexpected zero product)");
  }
  kernels::set_parallel_enabled(true);
  return best;
}

}  // namespace

int main() {
  std::printf("series kernels, %d thread(s) available\n", kernels::max_threads());
  std::printf("%-28s %10s %10s %8s\n", "case", "serial", "openmp", "speedup");

  std::mt19937_64 rng(7);
  for (int nvars : {3, 5, 7}) {
    std::vector<std::string> names;
    for (int v = 0; v < nvars; ++v) names.push_back("x" + std::to_string(v + 1));
    RingPtr ring = Ring::make(names, 8);
    Series a = random_series(ring, rng, 0.8);
    Series b = random_series(ring, rng, 0.8);
    double serial = time_multiply(a, b, false, 3);
    double parallel = time_multiply(a, b, true, 3);
    char label[64];
    std::snprintf(label, sizeof label, "multiply %d vars, N=8", nvars);
    std::printf("%-28s %9.4fs %9.4fs %7.2fx\n", label, serial, parallel, serial / parallel);
  }

  {
    SurfaceFile file;
    file.n = 1;
    file.expr = parse_expression("Im(w) - z*conj(z) - 1/10*(z*conj(z))^2");
    Hypersurface m = build_surface(file, 8);
    for (bool parallel : {false, true}) {
      kernels::set_parallel_enabled(parallel);
      auto start = Clock::now();
      InvolutionReport report = involution_check(m, 200, 1e-9, 42);
      double t = seconds_since(start);
      std::printf("%-28s %9.4fs   (pass=%d, max dev %.2e)\n",
                  parallel ? "involution sweep (openmp)" : "involution sweep (serial)", t,
                  report.pass ? 1 : 0, report.max_involution_deviation);
    }
    kernels::set_parallel_enabled(true);
  }
  return 0;
}
