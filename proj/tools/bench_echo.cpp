// Compares the production echo kernels against the serial reference
// implementation: wall time per estimator and the largest deviation from the
// reference value over a few sample times.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "chaoslab/echo.hpp"
#include "chaoslab/models.hpp"
#include "chaoslab/reference.hpp"

using namespace chaoslab;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int L = 5;
  double T = 10.0, dt = 0.1;
  if (argc > 1) L = std::atoi(argv[1]);
  if (argc > 2) T = std::atof(argv[2]);
  if (argc > 3) dt = std::atof(argv[3]);

  const IsingParams params{L, 1.0, 0.48, 0.8};
  const EigenDecomposition eig = eigh(build_mixed_field_ising(params));
  const TimeGrid grid = TimeGrid::uniform(T, dt);
  const int n_times = static_cast<int>(grid.times.size());

  std::printf("mixed-field Ising L=%d (chaotic point), %d time points, omp max threads %d\n", L,
              n_times, omp_get_max_threads());

  // serial reference: literal per-string Pauli sum, a few probe times only
  std::vector<int> probe_idx;
  for (int k = 0; k < 5; ++k) probe_idx.push_back(k * (n_times - 1) / 4);
  std::vector<double> ref_values(probe_idx.size());
  auto t0 = clock_type::now();
  for (std::size_t k = 0; k < probe_idx.size(); ++k)
    ref_values[k] = ref::haar_echo_pauli_sum(eig, grid.times[probe_idx[k]]);
  const double ref_per_point = seconds_since(t0) / probe_idx.size();
  std::printf("%-28s %10.4f s/point (serial, %zu points)\n", "reference pauli sum",
              ref_per_point, probe_idx.size());

  // production exact kernel, serial then parallel
  omp_set_num_threads(1);
  t0 = clock_type::now();
  EchoSeries exact1 = haar_choi_echo_exact_series(eig, grid);
  const double exact_serial = seconds_since(t0);
  std::printf("%-28s %10.4f s  (%8.6f s/point)\n", "exact kernel, 1 thread", exact_serial,
              exact_serial / n_times);

  omp_set_num_threads(omp_get_num_procs());
  t0 = clock_type::now();
  EchoSeries exactN = haar_choi_echo_exact_series(eig, grid);
  const double exact_parallel = seconds_since(t0);
  std::printf("%-28s %10.4f s  (speedup %.2fx, %d threads)\n", "exact kernel, N threads",
              exact_parallel, exact_serial / exact_parallel, omp_get_num_procs());

  // Monte Carlo at a fixed budget
  const int mc_samples = 500;
  t0 = clock_type::now();
  EchoSeries mc = haar_choi_echo_mc_series(eig, grid, mc_samples, 7);
  std::printf("%-28s %10.4f s  (M=%d)\n", "monte carlo kernel", seconds_since(t0), mc_samples);

  double max_dev_ref = 0.0, max_dev_threads = 0.0, max_dev_mc = 0.0;
  for (std::size_t k = 0; k < probe_idx.size(); ++k)
    max_dev_ref = std::max(max_dev_ref, std::abs(exact1.values[probe_idx[k]] - ref_values[k]));
  for (int i = 0; i < n_times; ++i) {
    max_dev_threads = std::max(max_dev_threads, std::abs(exact1.values[i] - exactN.values[i]));
    max_dev_mc = std::max(max_dev_mc, std::abs(exact1.values[i] - mc.values[i]));
  }
  std::printf("max |exact - reference|      %10.3e\n", max_dev_ref);
  std::printf("max |1 thread - N threads|   %10.3e\n", max_dev_threads);
  std::printf("max |exact - monte carlo|    %10.3e\n", max_dev_mc);
  return 0;
}
