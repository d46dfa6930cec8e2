#include <benchmark/benchmark.h>

#include <vector>

#include "hardy/bessel.hpp"
#include "hardy/green.hpp"
#include "hardy/hardy_weight.hpp"
#include "hardy/spectrum.hpp"

using namespace hardy;

namespace {

std::shared_ptr<const CoefficientField> field(int r) {
    return std::make_shared<const CoefficientField>(
        build_iid_field(BoxDomain(3, r), 0.2, Distribution::rademacher, 1));
}

void BM_apply_operator(benchmark::State& state) {
    const auto f = field(static_cast<int>(state.range(0)));
    const DirichletOperator op(*f);
    const auto v = op.to_padded(LatticeFunction::indicator(f->domain(), Point::origin(3)));
    std::vector<double> out(v.size(), 0.0);
    for (auto _ : state) {
        op.apply(v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f->domain().site_count()));
}
BENCHMARK(BM_apply_operator)->Arg(16)->Arg(32)->Arg(64);

void BM_solve_green(benchmark::State& state) {
    const auto f = field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_green(f, Point::origin(3)));
}
BENCHMARK(BM_solve_green)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_quadrature(benchmark::State& state) {
    const Point x{static_cast<int>(state.range(0)), 0, 0};
    for (auto _ : state) benchmark::DoNotOptimize(free_green_quadrature(x));
}
BENCHMARK(BM_quadrature)->Arg(0)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_certify(benchmark::State& state) {
    const auto f = field(static_cast<int>(state.range(0)));
    const auto w = hardy_weight(solve_green(f, Point::origin(3)));
    for (auto _ : state) benchmark::DoNotOptimize(certify_hardy(*f, w.w(), 1e-8));
}
BENCHMARK(BM_certify)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
