#include <benchmark/benchmark.h>

#include <rqp/qp.hpp>

#include <random>

using namespace rqp;

namespace {

// Dense strictly-convex QP with a feasible constraint block, sized like a
// 6-DoF arm with a handful of active barriers.
QpProblem make_problem(int n, int k) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1, 1);
  Mat M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) M(r, c) = unit(rng);
  QpProblem p;
  p.H = M.transpose() * M + 0.5 * Mat::Identity(n, n);
  p.g.resize(n);
  Vec u0(n);
  for (int r = 0; r < n; ++r) {
    p.g[r] = unit(rng);
    u0[r] = unit(rng);
  }
  p.A.resize(k, n);
  p.b.resize(k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < n; ++c) p.A(r, c) = unit(rng);
    // keep roughly half the rows active at the optimum
    p.b[r] = p.A.row(r).dot(u0) + (r % 2 == 0 ? 0.0 : 0.5);
  }
  return p;
}

void bm_qp_solve(benchmark::State& state) {
  const QpProblem p = make_problem(6, 8);
  for (auto _ : state) {
    QpSolver solver;
    benchmark::DoNotOptimize(solver.solve(p));
  }
}
BENCHMARK(bm_qp_solve);

void bm_qp_solve_warm(benchmark::State& state) {
  const QpProblem p = make_problem(6, 8);
  QpSolver solver;
  solver.solve(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.solve(p));
  }
}
BENCHMARK(bm_qp_solve_warm);

void bm_qp_assemble(benchmark::State& state) {
  const int n = 6;
  TaskBlock t;
  t.J = Mat::Random(2, n);
  t.r = Vec::Random(2);
  t.w = 1.0;
  std::vector<IneqRow> rows(8);
  for (auto& row : rows) {
    row.a = RowVec::Random(n);
    row.b = 1.0;
  }
  const Vec kappa = Vec::Random(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble({t}, Mat::Identity(n, n), kappa, 1e-6, rows));
  }
}
BENCHMARK(bm_qp_assemble);

}  // namespace

BENCHMARK_MAIN();
