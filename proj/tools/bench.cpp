// Kernel benchmark: the OpenMP paths against the serial reference
// implementations, with agreement checks.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "graph1l/energy.hpp"
#include "graph1l/errors.hpp"
#include "graph1l/gradient.hpp"
#include "graph1l/prox.hpp"
#include "graph1l/rng.hpp"

using namespace graph1l;

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(int reps, const auto& fn) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

WeightedGraph random_graph(std::size_t n, std::size_t extra_per_node, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(n * (1 + extra_per_node));
  for (std::size_t i = 1; i < n; ++i)  // spanning chain keeps it connected
    edges.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(i),
                     0.1 + rng.uniform_double()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < extra_per_node; ++t) {
      const auto j = static_cast<std::uint32_t>(rng.uniform_u64(n));
      if (j != i) edges.push_back({static_cast<std::uint32_t>(i), j, 0.1 + rng.uniform_double()});
    }
  return build_from_edge_list(std::move(edges), n);
}

void report(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-18s %10.3f ms %10.3f ms %8.2fx   max|diff| %.3e\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const std::size_t n = quick ? 2000 : 200000;
  const std::size_t extra = 8;
  const int reps = quick ? 5 : 20;

  Rng rng(7);
  const WeightedGraph g = random_graph(n, extra, rng);
  const GradientOperator op(g);
  const std::size_t m = g.num_edges();
  std::printf("graph: n=%zu m=%zu", n, m);
#ifdef _OPENMP
  std::printf("  threads=%d\n", omp_get_max_threads());
#else
  std::printf("  (OpenMP disabled)\n");
#endif
  std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const std::vector<double> u = rng.normal_vector(n);
  const std::vector<double> z = rng.normal_vector(m);
  std::vector<double> out_m(m), out_n(n);

  {
    std::vector<double> ref;
    const double t_ser = time_ms(reps, [&] { ref = reference::apply_gradient(g, u); });
    const double t_par = time_ms(reps, [&] { op.apply(u, out_m); });
    report("apply_gradient", t_ser, t_par, max_abs_diff(ref, out_m));
  }
  {
    std::vector<double> ref;
    const double t_ser = time_ms(reps, [&] { ref = reference::apply_adjoint(g, z); });
    const double t_par = time_ms(reps, [&] { op.adjoint(z, out_n); });
    report("apply_adjoint", t_ser, t_par, max_abs_diff(ref, out_n));
  }
  {
    double ref = 0.0, par = 0.0;
    std::vector<double> ku(m);
    op.apply(u, ku);
    const double t_ser = time_ms(reps, [&] { ref = reference::norm1(ku); });
    const double t_par = time_ms(reps, [&] { par = norm1(ku); });
    report("energy_J (sum)", t_ser, t_par, std::abs(ref - par));
  }
  {
    double ref = 0.0, par = 0.0;
    const double t_ser = time_ms(reps, [&] { ref = reference::dot(u, u); });
    const double t_par = time_ms(reps, [&] { par = dot(u, u); });
    report("dot", t_ser, t_par, std::abs(ref - par));
  }
  {
    // one full inner proximal solve, single thread vs all threads
    std::vector<double> uk = u;
    const double nrm = norm2(uk);
    for (double& v : uk) v /= nrm;
    InnerConfig cfg;
    cfg.max_iter = quick ? 50 : 200;
    cfg.gap_tol = 1e-30;  // run the full budget for a stable timing
    cfg.rel_tol = 1e-30;
    const std::vector<double> qs(n, 0.0);
    auto solve = [&] {
      try {
        (void)prox_step_binary(op, uk, 0.5, qs, 1.0, cfg);
      } catch (const NoConvergence&) {
      }
    };
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const double t_ser = time_ms(1, solve);
    omp_set_num_threads(max_threads);
    const double t_par = time_ms(1, solve);
#else
    const double t_ser = time_ms(1, solve);
    const double t_par = t_ser;
#endif
    report("prox solve", t_ser, t_par, 0.0);
  }
  return 0;
}
