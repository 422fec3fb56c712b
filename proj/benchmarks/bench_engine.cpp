#include <benchmark/benchmark.h>

#include <vector>

#include "twistchain/bethe.hpp"
#include "twistchain/hilbert.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/oracle.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/sov.hpp"
#include "twistchain/yangian.hpp"

namespace {

using namespace twistchain;

ChainSpec make_chain(int n_sites) {
  Rng rng(7);
  std::vector<int> twos(n_sites, 1);
  std::vector<Complex> thetas;
  for (int i = 0; i < n_sites; ++i) thetas.push_back(0.7 * rng.normal_complex());
  return ChainSpec(std::move(twos), std::move(thetas), Complex{1.0, 0.0});
}

Twist make_twist() {
  Twist tw;
  tw.k_tilde = Complex{1.1, 0.2};
  tw.k_plus = Complex{0.4, -0.1};
  tw.k_minus = Complex{0.3, 0.15};
  tw.k = Complex{0.9, -0.05};
  return tw;
}

void bm_monodromy(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const Complex u{0.8, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(monodromy(spec, u));
  }
}
BENCHMARK(bm_monodromy)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void bm_transfer(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const Twist tw = make_twist();
  const Complex u{0.8, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer(spec, tw, u));
  }
}
BENCHMARK(bm_transfer)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void bm_nu_entry(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const TwistFactorization fact = factorize_twist(make_twist(), FactorizationMode::EqualRho);
  const Complex u{0.8, 0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(nu_entry(spec, fact, 1, 2, u));
  }
}
BENCHMARK(bm_nu_entry)->Arg(2)->Arg(4)->Arg(6);

void bm_bethe_residuals(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const TwistFactorization fact = factorize_twist(make_twist(), FactorizationMode::EqualRho);
  const BetheProblem problem = modified_problem(spec, fact, BetheMode::ModifiedUp);
  Rng rng(5);
  std::vector<Complex> roots;
  for (int i = 0; i < spec.total_twos(); ++i) roots.push_back(rng.annulus(0.5, 3.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bethe_residuals(problem, roots));
  }
}
BENCHMARK(bm_bethe_residuals)->Arg(2)->Arg(4)->Arg(6)->Arg(10);

void bm_solve_bethe_modified(benchmark::State& state) {
  const ChainSpec spec = make_chain(2);
  const TwistFactorization fact = factorize_twist(make_twist(), FactorizationMode::EqualRho);
  const BetheProblem problem = modified_problem(spec, fact, BetheMode::ModifiedUp);
  SolveOptions opts;
  opts.starts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bethe(problem, spec.total_twos(), opts));
  }
}
BENCHMARK(bm_solve_bethe_modified)->Arg(64)->Arg(600)->Unit(benchmark::kMillisecond);

void bm_oracle(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const Twist tw = make_twist();
  const std::vector<Complex> zs = {Complex{1.7, 0.4}, Complex{-0.9, 1.2}, Complex{2.2, -0.7}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonalize_transfer(spec, tw, zs));
  }
}
BENCHMARK(bm_oracle)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_sov_basis(benchmark::State& state) {
  const ChainSpec spec = make_chain(static_cast<int>(state.range(0)));
  const TwistFactorization fact = factorize_twist(make_twist(), FactorizationMode::EqualRho);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sov_basis(spec, fact));
  }
}
BENCHMARK(bm_sov_basis)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
