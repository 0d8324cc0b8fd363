#pragma once

#include <vector>

#include "chaoslab/spinops.hpp"

namespace chaoslab {

struct EigenDecomposition {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // unitary columns; empty when has_vectors == false
  bool has_vectors = false;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

// Hermitian eigendecomposition. Real-valued inputs take a real symmetric
// solver path; eigenvector computation can be skipped for spectra-only runs.
EigenDecomposition eigh(const CMat& H, bool compute_vectors = true);

struct SpectrumStatistics {
  std::vector<double> ratios;  // each in [0, 1]
  double mean_r = 0.0;
  int n_levels_used = 0;
  double trim_fraction = 0.0;
  int n_degenerate_dropped = 0;
};

// r_n = min(s_n, s_{n-1}) / max(s_n, s_{n-1}) over consecutive spacings of
// the trimmed bulk. Ratios whose larger spacing falls below 1e-12 times the
// spectral range are treated as degeneracies: dropped and counted.
SpectrumStatistics spacing_ratios(const RVec& E_ascending, double trim_fraction = 0.05);

enum class Surmise { Poisson, GOE };

// Folded surmise densities on [0, 1]:
//   Poisson: 2 / (1 + r)^2
//   GOE:     (27/4) (r + r^2) / (1 + r + r^2)^(5/2)
double surmise_pdf(Surmise kind, double r);

struct RatioHistogram {
  std::vector<double> bin_centers;
  std::vector<double> empirical;  // density-normalized
  std::vector<double> surmise;
  double l1_distance = 0.0;
  Surmise kind = Surmise::Poisson;
  int n_bins = 0;
};

RatioHistogram histogram_vs_surmise(const std::vector<double>& ratios, Surmise kind, int n_bins);

// Mean ratio over (A + A^T)/2 ensembles with i.i.d. standard normal entries;
// self-test oracle for the GOE reference value.
double sample_goe_mean_r(int dim, int n_matrices, std::uint64_t seed);
std::vector<double> sample_goe_ratios(int dim, int n_matrices, std::uint64_t seed);

// Poisson oracle: ratios of i.i.d. unit-exponential spacings.
std::vector<double> exponential_spacing_ratios(int n_spacings, std::uint64_t seed);

}  // namespace chaoslab
