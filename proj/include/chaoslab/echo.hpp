#pragma once

#include <string>
#include <vector>

#include "chaoslab/channel.hpp"
#include "chaoslab/spectra.hpp"
#include "chaoslab/spinops.hpp"

namespace chaoslab {

inline constexpr int kExactEchoMaxSites = 8;
inline constexpr int kDesignEchoMaxSites = 5;

struct TimeGrid {
  double T = 0.0;
  double dt = 0.0;
  std::vector<double> times;

  static TimeGrid uniform(double T, double dt);
};

enum class EchoEstimator { ExactPauli, MonteCarlo, DesignEnum, SingleEnv };

std::string estimator_label(EchoEstimator est, int mc_samples = 0);
EchoEstimator parse_estimator(const std::string& name);

struct EchoSeries {
  std::vector<double> times;
  std::vector<double> values;      // within [1/4, 1] for a qubit probe
  std::vector<double> std_errors;  // Monte Carlo only, otherwise empty
  EchoEstimator estimator = EchoEstimator::ExactPauli;
  int mc_samples = 0;
  std::uint64_t seed = 0;
};

struct PuritySeries {
  std::vector<double> times;
  std::vector<double> values;  // mean over trajectories, within [1/2, 1]
  int n_states = 0;
  std::uint64_t seed = 0;
  double p_bar = 0.0;  // mean over trajectories of the per-trajectory time average
};

// Choi echo for one pure product environment, evaluated as the evolved
// environment purity Tr[rho_E(t)^2] with
// rho_E(t) = Tr_S[U (I_S/2 (x) |psi><psi|) U^dagger]. Equals the Choi purity
// of the induced channel; the literal protocol below is the cross-check.
double choi_echo_single_env(const EigenDecomposition& eig, double t, const ProductState& psi_env,
                            int probe_site = 1);
EchoSeries choi_echo_single_env_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                       const ProductState& psi_env, int probe_site = 1);

// The literal three-step protocol: forward evolution, completely
// depolarizing erasure on the probe, backward evolution, overlap with the
// initial environment state. Reference route, dense density matrices.
double choi_echo_protocol(const EigenDecomposition& eig, double t, const ProductState& psi_env,
                          int probe_site = 1);
// Mixed environments break the echo identity; this overload rejects them.
double choi_echo_single_env(const EigenDecomposition& eig, double t, const CMat& rho_env,
                            int probe_site = 1);

// Haar average of the Choi echo over product environments, exact.
// Evaluates the weighted Pauli sum
//   4^-L sum_alpha 3^-w(alpha) Tr_E[(Tr_S[U sigma_alpha U+])^2]
// through the probe-block form: with K_(s,s') the probe blocks of U(t) and
// A = K+ K', the weighted single-site twirl collapses the string sum to
//   (2/3)^(L-1) sum over env-site subsets S of ||Tr_S A||_F^2,
// evaluated by a block recursion in O(5^(L-1)) per block pair.
double haar_choi_echo_exact(const EigenDecomposition& eig, double t, int probe_site = 1,
                            int max_sites = kExactEchoMaxSites);
EchoSeries haar_choi_echo_exact_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                       int probe_site = 1, int max_sites = kExactEchoMaxSites);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error over M i.i.d. Haar product environments.
McEstimate haar_choi_echo_mc(const EigenDecomposition& eig, double t, int n_samples,
                             std::uint64_t seed, int probe_site = 1);
EchoSeries haar_choi_echo_mc_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                    int n_samples, std::uint64_t seed, int probe_site = 1);

// Exact Haar average by enumerating all 6^(L-1) products of single-qubit
// Pauli eigenstates (a single-qubit 2-design; the echo is quadratic in each
// site's projector, so the design average equals the Haar average).
double haar_choi_echo_design(const EigenDecomposition& eig, double t, int probe_site = 1);
EchoSeries haar_choi_echo_design_series(const EigenDecomposition& eig, const TimeGrid& grid,
                                        int probe_site = 1);

double trapezoid_average(const std::vector<double>& times, const std::vector<double>& values);

double time_averaged_choi_echo(const EigenDecomposition& eig, double T, double dt,
                               EchoEstimator estimator, int mc_samples = 2000,
                               std::uint64_t seed = 0, int probe_site = 1);

// Eq.-(6)-style baseline: mean over N random full-chain product states of
// the time-averaged probe purity.
PuritySeries averaged_subsystem_purity(const EigenDecomposition& eig, int n_states, double T,
                                       double dt, std::uint64_t seed, int probe_site = 1);

}  // namespace chaoslab
