// Serial reference vs OpenMP grid kernels. Arg: grid points; second arg: n.
#include <benchmark/benchmark.h>

#include "symp/core_linalg.hpp"
#include "symp/kernels.hpp"
#include "symp/path.hpp"

namespace {

symp::Path bench_path(int n) {
  const symp::Path e = symp::path_exp(symp::random_symmetric(2 * n, 17, 1.5), 2.0);
  return symp::path_prod(e, symp::make_loop(2, n));
}

void smin(benchmark::State& st, symp::Exec ex) {
  const symp::Path p = bench_path(static_cast<int>(st.range(1)));
  const auto ts = symp::uniform_grid(0.0, 1.0, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(symp::smin_scan(p, ts, ex));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void rho(benchmark::State& st, symp::Exec ex) {
  const symp::Path p = bench_path(static_cast<int>(st.range(1)));
  const auto ts = symp::uniform_grid(0.0, 1.0, static_cast<int>(st.range(0)));
  const symp::Tolerances tol;
  for (auto _ : st)
    benchmark::DoNotOptimize(symp::rho_scan(p, ts, symp::RhoKind::Spectral, tol, ex));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(smin, serial, symp::Exec::Serial)->Args({512, 2})->Args({2048, 4});
BENCHMARK_CAPTURE(smin, parallel, symp::Exec::Parallel)->Args({512, 2})->Args({2048, 4});
BENCHMARK_CAPTURE(rho, serial, symp::Exec::Serial)->Args({512, 2})->Args({2048, 4});
BENCHMARK_CAPTURE(rho, parallel, symp::Exec::Parallel)->Args({512, 2})->Args({2048, 4});

BENCHMARK_MAIN();
