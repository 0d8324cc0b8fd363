#include "chaoslab/echo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chaoslab {

namespace {

int sites_from_dim(Eigen::Index dim, const char* who) {
  int L = 0;
  while ((Eigen::Index(1) << L) < dim) ++L;
  if ((Eigen::Index(1) << L) != dim)
    throw std::invalid_argument(std::string(who) + ": dimension is not a power of two");
  return L;
}

void check_echo_bounds(std::vector<double>& values, const char* who) {
  for (double& v : values) {
    if (v < 0.25 - 1e-9 || v > 1.0 + 1e-9)
      throw std::runtime_error(std::string(who) + ": echo value " + std::to_string(v) +
                               " violates the [1/4, 1] bounds");
  }
}

CVec phase_vector(const RVec& evals, double t) {
  CVec p(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    const double a = -evals(k) * t;
    p(k) = cxd(std::cos(a), std::sin(a));
  }
  return p;
}

// Rows of the eigenvector matrix split by the probe bit: V_s maps eigenbasis
// coefficients to the (probe = s, env) rows of a global vector.
struct ProbeSplit {
  int L = 0;
  Eigen::Index d = 0, d_env = 0;
  CMat V0, V1;
};

ProbeSplit probe_split(const EigenDecomposition& eig, int probe_site, const char* who) {
  if (!eig.has_vectors) throw std::invalid_argument(std::string(who) + ": eigenvectors required");
  ProbeSplit ps;
  ps.d = eig.dim();
  ps.L = sites_from_dim(ps.d, who);
  if (probe_site < 1 || probe_site > ps.L)
    throw std::invalid_argument(std::string(who) + ": probe site out of range");
  ps.d_env = ps.d / 2;
  ps.V0.resize(ps.d_env, ps.d);
  ps.V1.resize(ps.d_env, ps.d);
  const int shift = site_bit_shift(ps.L, probe_site);
  const std::uint64_t low_mask = (std::uint64_t(1) << shift) - 1;
  for (Eigen::Index e = 0; e < ps.d_env; ++e) {
    const std::uint64_t eu = static_cast<std::uint64_t>(e);
    const std::uint64_t high = (eu & ~low_mask) << 1;
    const std::uint64_t low = eu & low_mask;
    ps.V0.row(e) = eig.eigenvectors.row(static_cast<Eigen::Index>(high | low));
    ps.V1.row(e) =
        eig.eigenvectors.row(static_cast<Eigen::Index>(high | (std::uint64_t(1) << shift) | low));
  }
  return ps;
}

using ConstBlock = Eigen::Ref<const CMat, 0, Eigen::OuterStride<>>;

// sum over all subsets S of the qubit sites of ||Tr_S a||_F^2, by recursion
// on the leading site: f(a) = f(a00 + a11) + f(a00) + f(a01) + f(a10) + f(a11).
// scratch[depth] buffers the block sum at each depth.
double subset_trace_norm_sum(const ConstBlock& a, std::vector<CMat>& scratch, int depth) {
  const Eigen::Index d = a.rows();
  if (d == 1) return std::norm(a(0, 0));
  const Eigen::Index h = d / 2;
  CMat& s = scratch[depth];
  s = a.topLeftCorner(h, h) + a.bottomRightCorner(h, h);
  double acc = subset_trace_norm_sum(ConstBlock(s), scratch, depth + 1);
  acc += subset_trace_norm_sum(ConstBlock(a.topLeftCorner(h, h)), scratch, depth + 1);
  acc += subset_trace_norm_sum(ConstBlock(a.topRightCorner(h, h)), scratch, depth + 1);
  acc += subset_trace_norm_sum(ConstBlock(a.bottomLeftCorner(h, h)), scratch, depth + 1);
  acc += subset_trace_norm_sum(ConstBlock(a.bottomRightCorner(h, h)), scratch, depth + 1);
  return acc;
}

std::vector<CMat> make_scratch(Eigen::Index d_env) {
  std::vector<CMat> scratch;
  for (Eigen::Index dim = d_env / 2; dim >= 1; dim /= 2) scratch.emplace_back(dim, dim);
  scratch.emplace_back(1, 1);  // depth guard for the 1x1 base case
  return scratch;
}

double haar_exact_at_time(const ProbeSplit& ps, const RVec& evals, double t,
                          std::vector<CMat>& scratch) {
  const int n_env = ps.L - 1;
  const CVec p = phase_vector(evals, t);

  // probe blocks of U(t) = V diag(p) V+
  CMat W0 = ps.V0 * p.asDiagonal();
  CMat W1 = ps.V1 * p.asDiagonal();
  std::array<CMat, 4> K;
  K[0].noalias() = W0 * ps.V0.adjoint();
  K[1].noalias() = W0 * ps.V1.adjoint();
  K[2].noalias() = W1 * ps.V0.adjoint();
  K[3].noalias() = W1 * ps.V1.adjoint();

  CMat A(ps.d_env, ps.d_env);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    A.noalias() = K[k].adjoint() * K[k];
    total += subset_trace_norm_sum(ConstBlock(A), scratch, 0);
  }
  // ||Tr_S A+||_F = ||Tr_S A||_F, so the (l, k) pair doubles the (k, l) term
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l) {
      A.noalias() = K[k].adjoint() * K[l];
      total += 2.0 * subset_trace_norm_sum(ConstBlock(A), scratch, 0);
    }

  return std::pow(2.0 / 3.0, n_env) / std::pow(4.0, ps.L) * total;
}

// Per-environment workspace: eigenbasis coefficients of |s>_probe (x) |psi>.
CMat env_coefficients(const ProbeSplit& ps, const CVec& psi_env) {
  CMat a(ps.d, 2);
  a.col(0).noalias() = ps.V0.adjoint() * psi_env;
  a.col(1).noalias() = ps.V1.adjoint() * psi_env;
  return a;
}

double single_env_at_time(const ProbeSplit& ps, const EigenDecomposition& eig, const CMat& a,
                          double t, int probe_site) {
  const CVec p = phase_vector(eig.eigenvalues, t);
  CMat b(ps.d, 2);
  b.noalias() = eig.eigenvectors * (p.asDiagonal() * a);
  Eigen::Matrix<cxd, 4, Eigen::Dynamic> G(4, ps.d_env);
  G.topRows<2>() = probe_reshape(b.col(0), ps.L, probe_site);
  G.bottomRows<2>() = probe_reshape(b.col(1), ps.L, probe_site);
  // rho_E(t) up to transposition/conjugation, which leaves the norm alone
  CMat rho = 0.5 * (G.adjoint() * G);
  return rho.squaredNorm();
}

void validate_grid(const TimeGrid& grid) {
  if (grid.times.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < grid.times.size(); ++i)
    if (grid.times[i] <= grid.times[i - 1])
      throw std::invalid_argument("time grid must be strictly ascending");
}

// The six eigenstates of the single-qubit Paulis form a 2-design.
std::array<Eigen::Vector2cd, 6> pauli_eigenstates() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Vector2cd, 6> out;
  out[0] << 1, 0;
  out[1] << 0, 1;
  out[2] << s, s;
  out[3] << s, -s;
  out[4] << s, cxd(0, s);
  out[5] << s, cxd(0, -s);
  return out;
}

}  // namespace

TimeGrid TimeGrid::uniform(double T, double dt) {
  if (T <= 0.0 || dt <= 0.0) throw std::invalid_argument("TimeGrid: T and dt must be positive");
  TimeGrid g;
  g.T = T;
  g.dt = dt;
  const int n = static_cast<int>(std::round(T / dt));
  if (n < 1 || std::abs(n * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("TimeGrid: T must be an integer multiple of dt");
  g.times.resize(n + 1);
  for (int i = 0; i <= n; ++i) g.times[i] = i * dt;
  g.times.back() = T;
  return g;
}

std::string estimator_label(EchoEstimator est, int mc_samples) {
  switch (est) {
    case EchoEstimator::ExactPauli:
      return "exact_pauli";
    case EchoEstimator::MonteCarlo:
      return "monte_carlo(" + std::to_string(mc_samples) + ")";
    case EchoEstimator::DesignEnum:
      return "design_enum";
    case EchoEstimator::SingleEnv:
      return "single_env";
  }
  return "unknown";
}

EchoEstimator parse_estimator(const std::string& name) {
  if (name == "exact" || name == "exact_pauli") return EchoEstimator::ExactPauli;
  if (name == "mc" || name == "monte_carlo") return EchoEstimator::MonteCarlo;
  if (name == "design" || name == "design_enum") return EchoEstimator::DesignEnum;
  if (name == "single" || name == "single_env") return EchoEstimator::SingleEnv;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

double choi_echo_single_env(const EigenDecomposition& eig, double t, const ProductState& psi_env,
                            int probe_site) {
  const ProbeSplit ps = probe_split(eig, probe_site, "choi_echo_single_env");
  if (psi_env.amplitudes.size() != ps.d_env)
    throw std::invalid_argument("choi_echo_single_env: environment dimension mismatch");
  const CMat a = env_coefficients(ps, psi_env.amplitudes);
  return single_env_at_time(ps, eig, a, t, probe_site);
}

double choi_echo_single_env(const EigenDecomposition& eig, double t, const CMat& rho_env,
                            int probe_site) {
  if (rho_env.rows() != rho_env.cols())
    throw std::invalid_argument("choi_echo_single_env: environment state not square");
  if (std::abs(rho_env.trace() - cxd(1.0, 0.0)) > 1e-9)
    throw std::invalid_argument("choi_echo_single_env: environment state is not unit trace");
  const double env_purity = (rho_env * rho_env).trace().real();
  if (env_purity < 1.0 - 1e-10)
    throw std::invalid_argument(
        "choi_echo_single_env: mixed environment, the echo identity requires a pure state");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho_env);
  ProductState st;
  st.L = sites_from_dim(rho_env.rows(), "choi_echo_single_env");
  st.amplitudes = es.eigenvectors().col(rho_env.rows() - 1);
  return choi_echo_single_env(eig, t, st, probe_site);
}

EchoSeries choi_echo_single_env_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                       const ProductState& psi_env, int probe_site) {
  validate_grid(grid);
  const ProbeSplit ps = probe_split(eig, probe_site, "choi_echo_single_env");
  if (psi_env.amplitudes.size() != ps.d_env)
    throw std::invalid_argument("choi_echo_single_env: environment dimension mismatch");
  const CMat a = env_coefficients(ps, psi_env.amplitudes);
  EchoSeries series;
  series.times = grid.times;
  series.values.resize(grid.times.size());
  series.estimator = EchoEstimator::SingleEnv;
  series.seed = psi_env.seed;
  const int n = static_cast<int>(grid.times.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    series.values[i] = single_env_at_time(ps, eig, a, grid.times[i], probe_site);
  check_echo_bounds(series.values, "choi_echo_single_env_series");
  return series;
}

double choi_echo_protocol(const EigenDecomposition& eig, double t, const ProductState& psi_env,
                          int probe_site) {
  const CMat U = propagator(eig, t);
  const int L = sites_from_dim(U.rows(), "choi_echo_protocol");
  if (psi_env.amplitudes.size() * 2 != U.rows())
    throw std::invalid_argument("choi_echo_protocol: environment dimension mismatch");
  const CMat rho_env = psi_env.amplitudes * psi_env.amplitudes.adjoint();
  const Eigen::Matrix2cd half_identity = 0.5 * Eigen::Matrix2cd::Identity();

  std::vector<int> env_sites;
  for (int s = 1; s <= L; ++s)
    if (s != probe_site) env_sites.push_back(s);

  // forward evolution of I_S/2 (x) |psi><psi|
  const CMat rho0 = embed_probe_env(half_identity, rho_env, L, probe_site);
  const CMat rho1 = U * rho0 * U.adjoint();
  // complete depolarization of the probe
  const CMat rho2 = embed_probe_env(half_identity, partial_trace(rho1, L, {probe_site}), L,
                                    probe_site);
  // backward evolution, then the return fidelity of the environment
  const CMat rho3 = U.adjoint() * rho2 * U;
  const CMat env_final = partial_trace(rho3, L, {probe_site});
  return (psi_env.amplitudes.adjoint() * env_final * psi_env.amplitudes)(0, 0).real();
}

double haar_choi_echo_exact(const EigenDecomposition& eig, double t, int probe_site,
                            int max_sites) {
  const ProbeSplit ps = probe_split(eig, probe_site, "haar_choi_echo_exact");
  if (ps.L > max_sites)
    throw std::invalid_argument("haar_choi_echo_exact: L = " + std::to_string(ps.L) +
                                " exceeds the exact-sum limit " + std::to_string(max_sites) +
                                "; use the Monte Carlo estimator instead");
  auto scratch = make_scratch(ps.d_env);
  return haar_exact_at_time(ps, eig.eigenvalues, t, scratch);
}

EchoSeries haar_choi_echo_exact_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                       int probe_site, int max_sites) {
  validate_grid(grid);
  const ProbeSplit ps = probe_split(eig, probe_site, "haar_choi_echo_exact");
  if (ps.L > max_sites)
    throw std::invalid_argument("haar_choi_echo_exact: L = " + std::to_string(ps.L) +
                                " exceeds the exact-sum limit " + std::to_string(max_sites) +
                                "; use the Monte Carlo estimator instead");
  EchoSeries series;
  series.times = grid.times;
  series.values.resize(grid.times.size());
  series.estimator = EchoEstimator::ExactPauli;
  const int n = static_cast<int>(grid.times.size());
#pragma omp parallel
  {
    auto scratch = make_scratch(ps.d_env);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      series.values[i] = haar_exact_at_time(ps, eig.eigenvalues, grid.times[i], scratch);
  }
  check_echo_bounds(series.values, "haar_choi_echo_exact_series");
  return series;
}

McEstimate haar_choi_echo_mc(const EigenDecomposition& eig, double t, int n_samples,
                             std::uint64_t seed, int probe_site) {
  if (n_samples < 2) throw std::invalid_argument("haar_choi_echo_mc: need at least 2 samples");
  const ProbeSplit ps = probe_split(eig, probe_site, "haar_choi_echo_mc");
  std::vector<double> values(n_samples);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_samples; ++m) {
    const ProductState env =
        random_product_state(ps.L - 1, derive_seed(seed, static_cast<std::uint64_t>(m)));
    const CMat a = env_coefficients(ps, env.amplitudes);
    values[m] = single_env_at_time(ps, eig, a, t, probe_site);
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n_samples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (n_samples - 1.0);
  return {mean, std::sqrt(var / n_samples)};
}

EchoSeries haar_choi_echo_mc_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                    int n_samples, std::uint64_t seed, int probe_site) {
  validate_grid(grid);
  if (n_samples < 2) throw std::invalid_argument("haar_choi_echo_mc: need at least 2 samples");
  const ProbeSplit ps = probe_split(eig, probe_site, "haar_choi_echo_mc");
  const int n_times = static_cast<int>(grid.times.size());

  // per-sample series, reduced in sample order for thread-count independence
  std::vector<std::vector<double>> sample_values(n_samples);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_samples; ++m) {
    const ProductState env =
        random_product_state(ps.L - 1, derive_seed(seed, static_cast<std::uint64_t>(m)));
    const CMat a = env_coefficients(ps, env.amplitudes);
    auto& vals = sample_values[m];
    vals.resize(n_times);
    for (int i = 0; i < n_times; ++i)
      vals[i] = single_env_at_time(ps, eig, a, grid.times[i], probe_site);
  }

  EchoSeries series;
  series.times = grid.times;
  series.values.assign(n_times, 0.0);
  series.std_errors.assign(n_times, 0.0);
  series.estimator = EchoEstimator::MonteCarlo;
  series.mc_samples = n_samples;
  series.seed = seed;
  for (int i = 0; i < n_times; ++i) {
    double sum = 0.0;
    for (int m = 0; m < n_samples; ++m) sum += sample_values[m][i];
    const double mean = sum / n_samples;
    double var = 0.0;
    for (int m = 0; m < n_samples; ++m) {
      const double d = sample_values[m][i] - mean;
      var += d * d;
    }
    series.values[i] = mean;
    series.std_errors[i] = std::sqrt(var / (n_samples - 1.0) / n_samples);
  }
  check_echo_bounds(series.values, "haar_choi_echo_mc_series");
  return series;
}

double haar_choi_echo_design(const EigenDecomposition& eig, double t, int probe_site) {
  const ProbeSplit ps = probe_split(eig, probe_site, "haar_choi_echo_design");
  if (ps.L > kDesignEchoMaxSites)
    throw std::invalid_argument("haar_choi_echo_design: L exceeds the enumeration limit " +
                                std::to_string(kDesignEchoMaxSites));
  const auto states = pauli_eigenstates();
  const int n_env = ps.L - 1;
  long n_total = 1;
  for (int i = 0; i < n_env; ++i) n_total *= 6;

  double sum = 0.0;
  std::vector<Eigen::Vector2cd> site_states(n_env);
  for (long idx = 0; idx < n_total; ++idx) {
    long rem = idx;
    for (int i = 0; i < n_env; ++i) {
      site_states[i] = states[rem % 6];
      rem /= 6;
    }
    const ProductState env = product_state(site_states);
    const CMat a = env_coefficients(ps, env.amplitudes);
    sum += single_env_at_time(ps, eig, a, t, probe_site);
  }
  return sum / static_cast<double>(n_total);
}

EchoSeries haar_choi_echo_design_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                        int probe_site) {
  validate_grid(grid);
  EchoSeries series;
  series.times = grid.times;
  series.values.resize(grid.times.size());
  series.estimator = EchoEstimator::DesignEnum;
  const int n = static_cast<int>(grid.times.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    series.values[i] = haar_choi_echo_design(eig, grid.times[i], probe_site);
  check_echo_bounds(series.values, "haar_choi_echo_design_series");
  return series;
}

double trapezoid_average(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("trapezoid_average: need matching series with >= 2 points");
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    integral += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
  return integral / (times.back() - times.front());
}

double time_averaged_choi_echo(const EigenDecomposition& eig, double T, double dt,
                               EchoEstimator estimator, int mc_samples, std::uint64_t seed,
                               int probe_site) {
  const TimeGrid grid = TimeGrid::uniform(T, dt);
  EchoSeries series;
  switch (estimator) {
    case EchoEstimator::ExactPauli:
      series = haar_choi_echo_exact_series(eig, grid, probe_site);
      break;
    case EchoEstimator::MonteCarlo:
      series = haar_choi_echo_mc_series(eig, grid, mc_samples, seed, probe_site);
      break;
    case EchoEstimator::DesignEnum:
      series = haar_choi_echo_design_series(eig, grid, probe_site);
      break;
    case EchoEstimator::SingleEnv: {
      const int L = sites_from_dim(eig.dim(), "time_averaged_choi_echo");
      series = choi_echo_single_env_series(eig, grid, random_product_state(L - 1, seed),
                                           probe_site);
      break;
    }
  }
  return trapezoid_average(series.times, series.values);
}

PuritySeries averaged_subsystem_purity(const EigenDecomposition& eig, int n_states, double T,
                                       double dt, std::uint64_t seed, int probe_site) {
  if (n_states < 1) throw std::invalid_argument("averaged_subsystem_purity: need N >= 1");
  const TimeGrid grid = TimeGrid::uniform(T, dt);
  const ProbeSplit ps = probe_split(eig, probe_site, "averaged_subsystem_purity");
  const int n_times = static_cast<int>(grid.times.size());

  std::vector<std::vector<double>> traj(n_states);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_states; ++i) {
    // random product state of the full chain, probe included
    const ProductState psi =
        random_product_state(ps.L, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const CVec a = eig.eigenvectors.adjoint() * psi.amplitudes;
    auto& vals = traj[i];
    vals.resize(n_times);
    for (int k = 0; k < n_times; ++k) {
      const CVec p = phase_vector(eig.eigenvalues, grid.times[k]);
      const CVec b = eig.eigenvectors * (p.asDiagonal() * a);
      const auto F = probe_reshape(b, ps.L, probe_site);
      const Eigen::Matrix2cd rho_s = F * F.adjoint();
      vals[k] = rho_s.squaredNorm();
    }
  }

  PuritySeries out;
  out.times = grid.times;
  out.values.assign(n_times, 0.0);
  out.n_states = n_states;
  out.seed = seed;
  double pbar = 0.0;
  for (int i = 0; i < n_states; ++i) {
    for (int k = 0; k < n_times; ++k) out.values[k] += traj[i][k];
    pbar += trapezoid_average(grid.times, traj[i]);
  }
  for (int k = 0; k < n_times; ++k) out.values[k] /= n_states;
  out.p_bar = pbar / n_states;
  for (double v : out.values)
    if (v < 0.5 - 1e-9 || v > 1.0 + 1e-9)
      throw std::runtime_error("averaged_subsystem_purity: purity outside [1/2, 1]");
  return out;
}

}  // namespace chaoslab
