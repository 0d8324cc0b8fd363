#include "chaoslab/spectra.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chaoslab {

EigenDecomposition eigh(const CMat& H, bool compute_vectors) {
  if (H.rows() != H.cols()) throw std::invalid_argument("eigh: matrix not square");
  const double scale = std::max(1.0, max_abs(H));
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("eigh: input is not Hermitian");

  EigenDecomposition out;
  out.has_vectors = compute_vectors;
  const auto opts = compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;

  if (H.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    RMat Hr = 0.5 * (H.real() + H.real().transpose());
    Eigen::SelfAdjointEigenSolver<RMat> solver(Hr, opts);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: solver failed");
    out.eigenvalues = solver.eigenvalues();
    if (compute_vectors) out.eigenvectors = solver.eigenvectors().cast<cxd>();
  } else {
    CMat Hh = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(Hh, opts);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: solver failed");
    out.eigenvalues = solver.eigenvalues();
    if (compute_vectors) out.eigenvectors = solver.eigenvectors();
  }
  return out;
}

SpectrumStatistics spacing_ratios(const RVec& E, double trim_fraction) {
  if (trim_fraction < 0.0 || trim_fraction >= 0.5)
    throw std::invalid_argument("spacing_ratios: trim_fraction must lie in [0, 0.5)");
  const Eigen::Index n = E.size();
  const Eigen::Index cut = static_cast<Eigen::Index>(std::floor(trim_fraction * n));
  const Eigen::Index m = n - 2 * cut;
  if (m < 3) throw std::invalid_argument("spacing_ratios: fewer than 3 levels after trimming");

  SpectrumStatistics stats;
  stats.trim_fraction = trim_fraction;
  stats.n_levels_used = static_cast<int>(m);

  const double range = E(n - 1 - cut) - E(cut);
  const double degenerate_cut = 1e-12 * range;

  double sum = 0.0;
  for (Eigen::Index i = cut + 1; i + 1 <= n - 1 - cut; ++i) {
    const double s_prev = E(i) - E(i - 1);
    const double s_next = E(i + 1) - E(i);
    const double lo = std::min(s_prev, s_next);
    const double hi = std::max(s_prev, s_next);
    if (hi < degenerate_cut) {
      ++stats.n_degenerate_dropped;
      continue;
    }
    const double r = lo / hi;
    stats.ratios.push_back(r);
    sum += r;
  }
  if (stats.ratios.empty()) throw std::invalid_argument("spacing_ratios: no usable spacings");
  stats.mean_r = sum / static_cast<double>(stats.ratios.size());
  return stats;
}

double surmise_pdf(Surmise kind, double r) {
  if (r < 0.0 || r > 1.0)
    throw std::invalid_argument("surmise_pdf: ratio outside [0, 1]: " + std::to_string(r));
  if (kind == Surmise::Poisson) {
    const double d = 1.0 + r;
    return 2.0 / (d * d);
  }
  const double q = 1.0 + r + r * r;
  return 6.75 * (r + r * r) / (q * q * std::sqrt(q));
}

RatioHistogram histogram_vs_surmise(const std::vector<double>& ratios, Surmise kind, int n_bins) {
  if (ratios.size() < 100)
    throw std::invalid_argument("histogram_vs_surmise: need at least 100 ratios");
  if (n_bins < 2) throw std::invalid_argument("histogram_vs_surmise: need at least 2 bins");

  RatioHistogram h;
  h.kind = kind;
  h.n_bins = n_bins;
  const double width = 1.0 / n_bins;
  std::vector<double> counts(n_bins, 0.0);
  for (double r : ratios) {
    int b = static_cast<int>(r / width);
    b = std::clamp(b, 0, n_bins - 1);
    counts[b] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(ratios.size()) * width);
  h.bin_centers.resize(n_bins);
  h.empirical.resize(n_bins);
  h.surmise.resize(n_bins);
  double l1 = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    h.bin_centers[b] = (b + 0.5) * width;
    h.empirical[b] = counts[b] * norm;
    h.surmise[b] = surmise_pdf(kind, h.bin_centers[b]);
    l1 += std::abs(h.empirical[b] - h.surmise[b]) * width;
  }
  h.l1_distance = l1;
  return h;
}

namespace {

RVec goe_eigenvalues(int dim, std::uint64_t seed) {
  Rng rng(seed);
  RMat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
  RMat H = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> solver(H, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

std::vector<double> sample_goe_ratios(int dim, int n_matrices, std::uint64_t seed) {
  if (dim < 100) throw std::invalid_argument("sample_goe_ratios: dim must be >= 100");
  if (n_matrices < 1) throw std::invalid_argument("sample_goe_ratios: need >= 1 matrix");
  std::vector<std::vector<double>> per_matrix(n_matrices);
#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m < n_matrices; ++m) {
    const RVec evals = goe_eigenvalues(dim, derive_seed(seed, static_cast<std::uint64_t>(m)));
    per_matrix[m] = spacing_ratios(evals, 0.05).ratios;
  }
  std::vector<double> pooled;
  for (const auto& v : per_matrix) pooled.insert(pooled.end(), v.begin(), v.end());
  return pooled;
}

double sample_goe_mean_r(int dim, int n_matrices, std::uint64_t seed) {
  const auto pooled = sample_goe_ratios(dim, n_matrices, seed);
  double sum = 0.0;
  for (double r : pooled) sum += r;
  return sum / static_cast<double>(pooled.size());
}

std::vector<double> exponential_spacing_ratios(int n_spacings, std::uint64_t seed) {
  if (n_spacings < 2) throw std::invalid_argument("exponential_spacing_ratios: need >= 2 spacings");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n_spacings - 1);
  double prev = rng.exponential();
  for (int i = 1; i < n_spacings; ++i) {
    const double next = rng.exponential();
    out.push_back(std::min(prev, next) / std::max(prev, next));
    prev = next;
  }
  return out;
}

}  // namespace chaoslab
