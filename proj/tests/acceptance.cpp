// Acceptance suite: runs every criterion end to end at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "chaoslab/channel.hpp"
#include "chaoslab/echo.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/models.hpp"
#include "chaoslab/reference.hpp"
#include "chaoslab/spectra.hpp"
#include "chaoslab/sweep.hpp"

using namespace chaoslab;

namespace {

struct Check {
  std::string label;
  bool ok;
};

std::vector<Check> g_checks;

void expect(bool ok, const std::string& label) { g_checks.push_back({label, ok}); }

void expect_close(double value, double target, double tol, const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s (got %.12g, want %.12g +- %.3g)", label.c_str(), value,
                target, tol);
  expect(std::abs(value - target) <= tol, buf);
}

CMat random_hermitian(int dim, std::uint64_t seed) {
  Rng rng(seed);
  CMat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.complex_normal();
  return 0.5 * (A + A.adjoint());
}

double simpson_integral(Surmise kind, int n_intervals) {
  const double h = 1.0 / n_intervals;
  double acc = surmise_pdf(kind, 0.0) + surmise_pdf(kind, 1.0);
  for (int i = 1; i < n_intervals; ++i)
    acc += surmise_pdf(kind, i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// ---------------------------------------------------------------------------

void criterion_1_channel_fixtures() {
  expect_close(choi_purity(unitary_qubit_channel(Eigen::Matrix2cd::Identity())), 1.0, 1e-12,
               "unitary channel Choi purity");
  Eigen::Matrix2cd u;
  u << cxd(0.6, 0), cxd(0, 0.8), cxd(0, 0.8), cxd(0.6, 0);
  expect_close(choi_purity(unitary_qubit_channel(u)), 1.0, 1e-12,
               "generic unitary channel Choi purity");
  expect_close(choi_purity(amplitude_damping_channel(1.0)), 0.5, 1e-12,
               "full amplitude damping Choi purity");
  expect_close(choi_purity(depolarizing_channel(1.0)), 0.25, 1e-12,
               "completely depolarizing Choi purity");
}

void criterion_2_echo_identity() {
  double worst = 0.0;
  auto run = [&](int L, std::uint64_t seed) {
    const auto eig = eigh(random_hermitian(1 << L, seed));
    const double t = 0.4 + 0.21 * static_cast<double>(seed % 17);
    const ProductState env = random_product_state(L - 1, seed + 1000);
    const double protocol = choi_echo_protocol(eig, t, env);
    const double fast = choi_echo_single_env(eig, t, env);
    const double choi = choi_purity(choi_from_unitary(propagator(eig, t), env, 1));
    worst = std::max({worst, std::abs(protocol - fast), std::abs(protocol - choi),
                      std::abs(fast - choi)});
  };
  for (std::uint64_t s = 0; s < 20; ++s) run(3, 10 + s);
  for (std::uint64_t s = 0; s < 5; ++s) run(4, 40 + s);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "protocol = environment purity = Choi purity (max pairwise dev %.3e)", worst);
  expect(worst <= 1e-10, buf);
}

void criterion_3_haar_oracles() {
  double worst = 0.0;
  int mc_misses = 0, mc_count = 0;
  for (int L : {3, 4}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto eig = eigh(random_hermitian(1 << L, 100 * L + s));
      for (int k = 0; k < 5; ++k) {
        const double t = 0.3 + 0.55 * k;
        worst = std::max(worst,
                         std::abs(haar_choi_echo_exact(eig, t) - haar_choi_echo_design(eig, t)));
      }
      const double t = 0.8 + 0.13 * static_cast<double>(s);
      const double exact = haar_choi_echo_exact(eig, t);
      const auto mc = haar_choi_echo_mc(eig, t, 2000, 7000 + s);
      ++mc_count;
      if (std::abs(mc.mean - exact) > 3.0 * mc.std_error) ++mc_misses;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "exact Pauli sum = design enumeration (max dev %.3e)", worst);
  expect(worst <= 1e-10, buf);
  std::snprintf(buf, sizeof(buf), "Monte Carlo within 3 SE of exact (%d/%d trials)",
                mc_count - mc_misses, mc_count);
  expect(mc_misses == 0, buf);
}

void criterion_4_eq4_closure() {
  int misses = 0, count = 0;
  for (int model = 0; model < 3; ++model) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      Rng prng(derive_seed(4000, model, s));
      const int L = 4;
      CMat H;
      if (model == 0) {
        H = build_mixed_field_ising(
            {L, 0.5 + prng.uniform01(), 1.5 * prng.uniform01(), 0.2 + 1.5 * prng.uniform01()});
      } else if (model == 1) {
        H = build_random_field_heisenberg({L, 4.0 * prng.uniform01(), prng.next_u64()}).first;
      } else {
        H = build_xxz_defect(
            {L, 0.3 + 1.5 * prng.uniform01(), 0.3 + prng.uniform01(), 1.2 * prng.uniform01(), 2});
      }
      const auto eig = eigh(H);
      const double t = 0.5 + 3.0 * prng.uniform01();
      const QubitChannel c =
          choi_from_unitary(propagator(eig, t), random_product_state(L - 1, prng.next_u64()), 1);
      const double predicted = haar_averaged_output_purity(c);

      const int n = 5000;
      double mean = 0.0, m2 = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::Vector2cd v;
        v << prng.complex_normal(), prng.complex_normal();
        v.normalize();
        const Eigen::Matrix2cd out = c.apply(v * v.adjoint());
        const double p = (out * out).trace().real();
        const double delta = p - mean;
        mean += delta / (i + 1);
        m2 += delta * (p - mean);
      }
      const double se = std::sqrt(m2 / (n - 1.0) / n);
      ++count;
      if (std::abs(mean - predicted) > 3.0 * std::max(se, 1e-12)) ++misses;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "Monte Carlo output purity matches (TrE(I)^2 + 4 TrD^2)/6 (%d/%d channels)",
                count - misses, count);
  expect(misses == 0, buf);
}

void criterion_5_spectral_self_test() {
  expect_close(sample_goe_mean_r(1000, 10, 51), 0.5307, 0.01, "GOE sampled mean ratio");
  const auto ratios = exponential_spacing_ratios(100000, 52);
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  expect_close(mean, 0.386, 0.005, "exponential-spacing mean ratio");
  expect_close(simpson_integral(Surmise::Poisson, 20000), 1.0, 1e-6,
               "Poisson surmise normalization");
  expect_close(simpson_integral(Surmise::GOE, 20000), 1.0, 1e-6, "GOE surmise normalization");
}

double ising_even_sector_mean_r(double hz, double J) {
  const IsingParams p{12, 1.0, hz, J};
  const auto basis = sector_basis(12, SectorKind::ParityEven);
  const CMat H = build_sector(mixed_field_ising_terms(p), basis);
  const auto eig = eigh(H, false);
  return spacing_ratios(eig.eigenvalues, 0.05).mean_r;
}

void criterion_6_scaled_fig1() {
  const double chaotic = ising_even_sector_mean_r(0.48, 0.8);
  const double integrable = ising_even_sector_mean_r(1.446, 0.05);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "chaotic point mean r = %.4f >= 0.50", chaotic);
  expect(chaotic >= 0.50, buf);
  std::snprintf(buf, sizeof(buf), "integrable point mean r = %.4f <= 0.42", integrable);
  expect(integrable <= 0.42, buf);
}

void criterion_7_scaled_fig2() {
  auto dynamics = [&](double hz, double J) {
    const auto eig = eigh(build_mixed_field_ising({7, 1.0, hz, J}));
    const double echo = time_averaged_choi_echo(eig, 100.0, 0.1, EchoEstimator::ExactPauli);
    const double pbar = averaged_subsystem_purity(eig, 50, 100.0, 0.1, 7700).p_bar;
    return std::pair(echo, pbar);
  };
  const auto [echo_c, pbar_c] = dynamics(0.48, 0.8);
  const auto [echo_i, pbar_i] = dynamics(1.446, 0.05);
  const auto [echo_0, pbar_0] = dynamics(0.7, 0.0);

  char buf[200];
  std::snprintf(buf, sizeof(buf), "time-averaged echo: chaotic %.4f < integrable %.4f", echo_c,
                echo_i);
  expect(echo_c < echo_i, buf);
  std::snprintf(buf, sizeof(buf), "averaged purity: chaotic %.4f < integrable %.4f", pbar_c,
                pbar_i);
  expect(pbar_c < pbar_i, buf);
  expect_close(echo_0, 1.0, 1e-9, "echo at J = 0");
  expect_close(pbar_0, 1.0, 1e-9, "averaged purity at J = 0");
}

void criterion_8_scaled_fig3() {
  SweepConfig cfg;
  cfg.model = ModelKind::Heisenberg;
  cfg.axes = {{"h", {0.5, 1.0, 2.0, 4.0, 6.0}}};
  cfg.L_dynamics = 7;
  cfg.do_spectrum = false;
  cfg.T = 100.0;
  cfg.dt = 0.1;
  cfg.n_purity_states = 50;
  cfg.n_realizations = 10;
  cfg.estimator = EchoEstimator::ExactPauli;
  cfg.base_seed = 88;

  SweepResult raw;
  const auto aggs = run_disorder_scan(cfg, 0, &raw);
  const double deficit_low_h = aggs.front().echo_deficit_mean;   // h = 0.5
  const double deficit_high_h = aggs.back().echo_deficit_mean;   // h = 6
  // Pilot-derived separation factor at this scale. The deficit cannot drop
  // below the nearest-neighbor zz-dephasing floor of 1/6 (the probe keeps
  // dephasing through the coupling to site 2 however strong the fields
  // are), and at h = 6 the chain is still mid-crossover: 30-realization
  // pilots over three seed sets give ratios 1.74 / 1.88 / 1.85.
  const double factor = 1.5;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "1 - echo at h=0.5 (%.4f) >= %.1fx its value at h=6 (%.4f)",
                deficit_low_h, factor, deficit_high_h);
  expect(deficit_low_h >= factor * deficit_high_h, buf);
  for (std::size_t i = 1; i < aggs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "1 - echo decreases with disorder (h=%.1f: %.4f <= %.4f)",
                  aggs[i].h, aggs[i].echo_deficit_mean, aggs[i - 1].echo_deficit_mean);
    expect(aggs[i].echo_deficit_mean <= aggs[i - 1].echo_deficit_mean, buf);
  }

  const double echo_std = aggs.front().echo_deficit_std;
  const double pbar_std = aggs.front().impurity_std;
  std::snprintf(buf, sizeof(buf),
                "realization std at h=0.5: echo %.3e < subsystem purity %.3e", echo_std,
                pbar_std);
  expect(echo_std < pbar_std, buf);
}

void criterion_9_scaled_fig4() {
  // integrable spectral statistics at the strongly hopping clean point
  {
    const XXZDefectParams p{12, 2.0, 1.0, 0.0, default_defect_site(12)};
    const auto basis = sector_basis(12, SectorKind::Magnetization, 6);
    const CMat H = build_sector(xxz_defect_terms(p), basis);
    const double mean_r = spacing_ratios(eigh(H, false).eigenvalues, 0.05).mean_r;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "clean XXZ (Jxy/Jz = 2) sector mean r = %.4f <= 0.42",
                  mean_r);
    expect(mean_r <= 0.42, buf);
  }
  // while the local probe sees chaos-level decoherence
  {
    auto echo_at = [&](double jxy, double eps) {
      const auto eig = eigh(build_xxz_defect({7, jxy, 1.0, eps, 3}));
      return time_averaged_choi_echo(eig, 100.0, 0.1, EchoEstimator::ExactPauli);
    };
    const double clean = echo_at(2.0, 0.0);
    const double chaotic_ref = echo_at(1.0, 0.5);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "clean-XXZ echo %.4f within 10%% of the chaotic reference %.4f", clean,
                  chaotic_ref);
    expect(std::abs(clean - chaotic_ref) <= 0.10 * chaotic_ref, buf);
  }
}

void criterion_10_determinism() {
  SweepConfig cfg;
  cfg.model = ModelKind::Ising;
  cfg.axes = {{"hz", {0.48, 1.446}}, {"J", {0.05, 0.8}}};
  cfg.fixed = {{"hx", 1.0}};
  cfg.L_dynamics = 5;
  cfg.L_spectrum = 8;
  cfg.T = 20.0;
  cfg.dt = 0.1;
  cfg.n_purity_states = 10;
  cfg.estimator = EchoEstimator::MonteCarlo;
  cfg.mc_samples = 128;
  cfg.base_seed = 10101;

  const SweepResult once = run_sweep(cfg, 1);
  const SweepResult again = run_sweep(cfg, 1);
  const SweepResult wide = run_sweep(cfg, 8);
  expect(once.records_csv == again.records_csv, "rerun with identical config is byte identical");
  expect(once.records_csv == wide.records_csv, "1 worker and 8 workers are byte identical");
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* title;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  const std::vector<Criterion> criteria = {
      {1, "channel fixtures", criterion_1_channel_fixtures},
      {2, "echo identity suite", criterion_2_echo_identity},
      {3, "Haar-average oracles", criterion_3_haar_oracles},
      {4, "averaged output purity closure", criterion_4_eq4_closure},
      {5, "spectral self-test", criterion_5_spectral_self_test},
      {6, "scaled spectral transition (L=12 even sector)", criterion_6_scaled_fig1},
      {7, "scaled dynamical ordering (L=7)", criterion_7_scaled_fig2},
      {8, "disorder scan trend (L=7)", criterion_8_scaled_fig3},
      {9, "transport false positive (XXZ)", criterion_9_scaled_fig4},
      {10, "sweep determinism", criterion_10_determinism},
  };

  int n_failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.number != only) continue;
    g_checks.clear();
    const auto t0 = std::chrono::steady_clock::now();
    bool threw = false;
    std::string what;
    try {
      c.run();
    } catch (const std::exception& e) {
      threw = true;
      what = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    bool ok = !threw;
    for (const auto& chk : g_checks) ok = ok && chk.ok;
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.number, c.title,
                secs);
    for (const auto& chk : g_checks)
      if (!chk.ok || only != 0) std::printf("        %s %s\n", chk.ok ? "ok  " : "FAIL",
                                            chk.label.c_str());
    if (threw) std::printf("        exception: %s\n", what.c_str());
    if (!ok) ++n_failed;
  }
  if (n_failed == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", n_failed);
  return n_failed == 0 ? 0 : 1;
}
