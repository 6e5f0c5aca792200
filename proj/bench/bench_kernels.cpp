// Serial against OpenMP versions of the main kernels; the argument is the
// number of cells per side.
#include "mscv/problems.hpp"
#include "mscv/reduction.hpp"

#include <benchmark/benchmark.h>

using namespace mscv;

namespace {

struct Setup {
  SubMesh sub;
  MaterialField mat;
  DofLayout layout;
};

Setup make(int n) {
  const MacroMesh m = build_structured(n);
  Setup s{subdivide(m), {}, {}};
  s.mat = sample_material(m, example1().material);
  s.layout = build_dof_layout(s.sub, Method::Method1);
  return s;
}

void assemble(benchmark::State& st, Exec exec) {
  const Setup s = make(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_blocks(s.sub, s.mat, s.layout, Variant::Plain, exec));
}

void eliminate(benchmark::State& st, Exec exec) {
  const Setup s = make(static_cast<int>(st.range(0)));
  const VertexBlockSystem blocks = assemble_blocks(s.sub, s.mat, s.layout, Variant::Plain);
  for (auto _ : st) benchmark::DoNotOptimize(eliminate_stress(blocks, exec));
}

void multiply(benchmark::State& st, Exec exec) {
  const Setup s = make(static_cast<int>(st.range(0)));
  const CellCenteredSystem sys = eliminate_stress(assemble_blocks(s.sub, s.mat, s.layout, Variant::Plain));
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(sys.matrix.rows());
  Eigen::VectorXd y(x.size());
  for (auto _ : st) {
    sys.matrix.multiply(x, y, exec);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(assemble, serial, Exec::Serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assemble, parallel, Exec::Parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eliminate, serial, Exec::Serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eliminate, parallel, Exec::Parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(multiply, serial, Exec::Serial)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(multiply, parallel, Exec::Parallel)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
