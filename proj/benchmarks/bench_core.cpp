#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qmboot/analysis.hpp"
#include "qmboot/oracle.hpp"
#include "qmboot/spectra.hpp"

using namespace qmboot;

namespace {

// Quartic g = 1 near the ground state; the scan spends its time on points
// like this one.
const double kE = 0.9262584;
const std::vector<double> kSeeds = {0.2337345};

void BM_matrix_eval(benchmark::State& state) {
  MatrixEvaluator ev(PolynomialPotential::anharmonic(1.0, 2),
                     BasisSpec{8, 3, static_cast<int>(state.range(0))});
  Eigen::MatrixXcd M;
  for (auto _ : state) {
    ev.eval(kE, kSeeds.data(), M);
    benchmark::DoNotOptimize(M.data());
  }
}
BENCHMARK(BM_matrix_eval)->Arg(8)->Arg(13)->Arg(14);

void BM_min_eigenvalue(benchmark::State& state) {
  MatrixEvaluator ev(PolynomialPotential::anharmonic(1.0, 2),
                     BasisSpec{8, 3, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(ev.min_eig(kE, kSeeds.data()));
}
BENCHMARK(BM_min_eigenvalue)->Arg(8)->Arg(13)->Arg(14);

void BM_evaluator_build(benchmark::State& state) {
  PolynomialPotential V = PolynomialPotential::anharmonic(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    MatrixEvaluator ev(V, BasisSpec{8, 3, 13});
    benchmark::DoNotOptimize(ev.dim());
  }
}
BENCHMARK(BM_evaluator_build)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_lattice_scan(benchmark::State& state) {
  PolynomialPotential V = PolynomialPotential::anharmonic(1.0, 2);
  MatrixEvaluator ev(V, BasisSpec{8, 3, static_cast<int>(state.range(0))});
  SearchBox box = default_search_box(V);
  box.dims[0].count = 21;
  for (std::size_t d = 1; d < box.dims.size(); ++d) box.dims[d].count = 9;
  for (auto _ : state) {
    FeasibilityGrid grid = scan(ev, box, 1e-9);
    benchmark::DoNotOptimize(grid.feasible.data());
  }
}
BENCHMARK(BM_lattice_scan)->Arg(8)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_solve_point(benchmark::State& state) {
  for (auto _ : state) {
    SpectrumPoint pt = solve_point(1.0, 2);
    benchmark::DoNotOptimize(pt.E0);
  }
}
BENCHMARK(BM_solve_point)->Unit(benchmark::kMillisecond);

void BM_oracle_diagonalize(benchmark::State& state) {
  PolynomialPotential V = PolynomialPotential::anharmonic(1.0, 2);
  for (auto _ : state) {
    OracleResult r = diagonalize(V, 2);
    benchmark::DoNotOptimize(r.evals.data());
  }
}
BENCHMARK(BM_oracle_diagonalize)->Unit(benchmark::kMillisecond);

void BM_fit_gap(benchmark::State& state) {
  FitParams truth;
  truth.a = 0.88;
  truth.b = 0.52;
  truth.c = 0.015;
  truth.d = 1.89;
  truth.anchor = 1.7257;
  GapCurve curve;
  curve.n = 2;
  for (int i = 0; i <= 25; ++i) {
    GapSample s;
    s.g = 0.2 * i;
    s.gap_anharmonic = gap_formula(s.g, truth);
    s.gap_raw = s.gap_anharmonic + (s.g > 0 ? std::sqrt(2.0 * s.g) : 0.0);
    s.uncertainty = 1e-6;
    curve.samples.push_back(s);
  }
  for (auto _ : state) {
    FitParams f = fit_gap(curve);
    benchmark::DoNotOptimize(f.a);
  }
}
BENCHMARK(BM_fit_gap)->Unit(benchmark::kMillisecond);

void BM_oneloop_E0(benchmark::State& state) {
  double g = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oneloop_E0(g));
    g = g < 40.0 ? g + 0.5 : 0.5;
  }
}
BENCHMARK(BM_oneloop_E0);

}  // namespace

BENCHMARK_MAIN();
