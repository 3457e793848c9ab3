#include <benchmark/benchmark.h>

#include "nadegen/hybrid.hpp"
#include "nadegen/model_maps.hpp"
#include "nadegen/monge_ampere.hpp"
#include "nadegen/valuation.hpp"

using namespace nadegen;

namespace {

CentralFiber simplex(int dim) {
  std::vector<Component> comps;
  ComponentSet ids;
  for (int k = 0; k <= dim; ++k) {
    ids.push_back("D" + std::to_string(k));
    comps.push_back(Component{ids.back(), k + 1});
  }
  std::vector<Stratum> strata;
  for (std::size_t mask = 1; mask < (std::size_t{1} << ids.size()); ++mask) {
    ComponentSet set;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (mask & (std::size_t{1} << k)) set.push_back(ids[k]);
    }
    if (set.size() > 1) strata.push_back(Stratum{"S" + std::to_string(mask), set, "", {}});
  }
  return CentralFiber(dim, comps, strata);
}

void BM_DualComplex(benchmark::State& state) {
  const CentralFiber f = simplex(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_dual_complex(f));
}
BENCHMARK(BM_DualComplex)->DenseRange(1, 5);

void BM_BlowUpTower(benchmark::State& state) {
  const CentralFiber base = simplex(3);
  for (auto _ : state) {
    CentralFiber f = base;
    PullbackMatrix total = PullbackMatrix::identity(std::make_shared<const DualComplex>(build_dual_complex(f)));
    for (int k = 0; k < state.range(0); ++k) {
      const DualComplex c = build_dual_complex(f);
      StratumId center;
      for (const auto& id : c.maximal_faces()) {
        if (c.face(id).components.size() >= 2) center = id;
      }
      BlowUp bu = blow_up_stratum(f, center);
      total = compose_pullbacks(total, bu.pullback);
      f = bu.fiber;
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_BlowUpTower)->DenseRange(1, 3);

void BM_QuasiMonomial(benchmark::State& state) {
  const ComponentSet ids{"A", "B", "C"};
  std::vector<Exponent> exps;
  for (int k = 0; k < state.range(0); ++k) exps.push_back({k % 5, (3 * k) % 7, (k * k) % 4});
  const MonomialSupport s(ids, exps);
  const ComplexPoint p{"ABC", {{"A", make_rational(1, 6)}, {"B", make_rational(1, 3)}, {"C", make_rational(1, 2)}}};
  for (auto _ : state) benchmark::DoNotOptimize(eval_quasi_monomial(p, s));
}
BENCHMARK(BM_QuasiMonomial)->Range(4, 256);

void BM_SampleAndPush(benchmark::State& state) {
  FamilySpec fam;
  fam.kind = FamilyKind::EdgeUniform;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto samples = sample_family(fam, Complex(1e-6, 0.0), n, 0, {4096, 1});
    benchmark::DoNotOptimize(pushforward(fam.chart, samples));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleAndPush)->Range(1 << 10, 1 << 17);

void BM_HybridNorm(benchmark::State& state) {
  const LaurentPolynomial f({{-2, 1.0}, {0, Complex(0.5, 1.0)}, {3, 2.0}, {7, -1.0}});
  for (auto _ : state) benchmark::DoNotOptimize(hybrid_norm(f, Complex(1e-5, 2e-5), 0.5));
}
BENCHMARK(BM_HybridNorm);

}  // namespace

BENCHMARK_MAIN();
