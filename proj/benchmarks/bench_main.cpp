#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "conetrace/bessel.hpp"
#include "conetrace/geometry.hpp"
#include "conetrace/jacobi.hpp"
#include "conetrace/link_spectrum.hpp"
#include "conetrace/oracle.hpp"

using namespace conetrace;

namespace {
constexpr double kPi = 3.14159265358979323846;

void BM_DiffractionClosedForm(benchmark::State& st) {
  const auto link = LinkSpectrum::circle(1.5 * kPi);
  double u = 0.3;
  for (auto _ : st) {
    benchmark::DoNotOptimize(diffraction_kernel(link, 2, {0.0}, {u}, SummationPolicy::closed_form()).value);
    u = u < 2.0 ? u + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_DiffractionClosedForm);

void BM_DiffractionAbel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(abel_extrapolated_circle(1.5 * kPi, kPi, 1.0));
}
BENCHMARK(BM_DiffractionAbel);

void BM_BesselZeros(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(bessel_j_zeros_below(4.0 / 3, static_cast<double>(st.range(0))));
}
BENCHMARK(BM_BesselZeros)->Arg(100)->Arg(1000);

void BM_GeodesicFlowSphere(benchmark::State& st) {
  const SurfaceModel s = SurfaceModel::sphere();
  const GeodesicState g = normalized(s, {kPi / 2, 0.0, 0.3, 1.0});
  for (auto _ : st) benchmark::DoNotOptimize(geodesic_flow(s, g, 4.0).back());
}
BENCHMARK(BM_GeodesicFlowSphere);

void BM_ConnectTips(benchmark::State& st) {
  const SurfaceModel s = SurfaceModel::perturbed_spindle();
  ConnectOptions o;
  o.max_length = 12.0;
  for (auto _ : st) benchmark::DoNotOptimize(connect_tips(s, 0, 1, 0.0, o).length);
}
BENCHMARK(BM_ConnectTips)->Unit(benchmark::kMillisecond);

void BM_Theta(benchmark::State& st) {
  const SurfaceModel s = SurfaceModel::perturbed_spindle();
  const GeodesicPath p = shoot_from_tip(s, 0, 0.9, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(theta(s, p));
}
BENCHMARK(BM_Theta);

void BM_SmoothedTrace(benchmark::State& st) {
  const auto ev = doubled_square_spectrum(static_cast<double>(st.range(0)));
  std::vector<double> t(100);
  for (int i = 0; i < 100; ++i) t[i] = 3.0 + 0.01 * i;
  for (auto _ : st) benchmark::DoNotOptimize(smoothed_wave_trace(ev, 40.0, t).samples.back());
  st.counters["eigenvalues"] = static_cast<double>(ev.size());
}
BENCHMARK(BM_SmoothedTrace)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
