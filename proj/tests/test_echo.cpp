#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "chaoslab/echo.hpp"
#include "chaoslab/models.hpp"
#include "chaoslab/reference.hpp"
#include "doctest.h"

using namespace chaoslab;

namespace {

CMat random_hermitian(int dim, std::uint64_t seed) {
  Rng rng(seed);
  CMat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.complex_normal();
  return 0.5 * (A + A.adjoint());
}

EigenDecomposition random_generator(int L, std::uint64_t seed) {
  return eigh(random_hermitian(1 << L, seed));
}

// Hermitian generator whose t = 1 propagator is exactly the SWAP gate.
EigenDecomposition swap_generator() {
  CMat S = CMat::Zero(4, 4);
  S(0, 0) = S(3, 3) = 1.0;
  S(1, 2) = S(2, 1) = 1.0;
  const CMat H = M_PI / 2.0 * (CMat::Identity(4, 4) - S);
  return eigh(H);
}

ProductState ket0_env() {
  ProductState env;
  env.L = 1;
  env.amplitudes = CVec::Zero(2);
  env.amplitudes(0) = 1.0;
  return env;
}

}  // namespace

TEST_CASE("single environment echo fixtures") {
  const auto eig = random_generator(3, 1);
  const ProductState env = random_product_state(2, 2);
  CHECK(choi_echo_single_env(eig, 0.0, env) == doctest::Approx(1.0).epsilon(1e-12));

  // SWAP with |0> environment: replacement channel, echo 1/2
  const auto sw = swap_generator();
  CHECK(choi_echo_single_env(sw, 1.0, ket0_env()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(choi_echo_protocol(sw, 1.0, ket0_env()) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("protocol, environment-purity fast path and choi purity agree") {
  // the three computation routes of the echo on random generators
  for (int L : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto eig = random_generator(L, seed + 10);
      const ProductState env = random_product_state(L - 1, seed + 50);
      const double t = 0.3 + 0.45 * static_cast<double>(seed);
      const double fast = choi_echo_single_env(eig, t, env);
      const double protocol = choi_echo_protocol(eig, t, env);
      const double choi = choi_purity(choi_from_unitary(propagator(eig, t), env, 1));
      CHECK(std::abs(fast - protocol) <= 1e-10);
      CHECK(std::abs(fast - choi) <= 1e-10);
    }
  }
}

TEST_CASE("mixed environments are rejected") {
  const auto eig = random_generator(2, 3);
  const CMat mixed = 0.5 * CMat::Identity(2, 2);
  CHECK_THROWS_AS(choi_echo_single_env(eig, 1.0, mixed), std::invalid_argument);
  // a pure density matrix is accepted and matches the vector route
  const ProductState env = random_product_state(1, 4);
  const CMat pure = env.amplitudes * env.amplitudes.adjoint();
  CHECK(choi_echo_single_env(eig, 1.0, pure) ==
        doctest::Approx(choi_echo_single_env(eig, 1.0, env)).epsilon(1e-10));
}

TEST_CASE("exact haar echo is 1 at t = 0 and equals the design enumeration") {
  for (int L : {3, 4}) {
    for (std::uint64_t seed = 0; seed < (L == 3 ? 10u : 4u); ++seed) {
      const auto eig = random_generator(L, 100 + seed);
      CHECK(haar_choi_echo_exact(eig, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      for (double t : {0.2, 0.7, 1.4, 2.9, 6.3}) {
        const double exact = haar_choi_echo_exact(eig, t);
        const double design = haar_choi_echo_design(eig, t);
        CHECK(std::abs(exact - design) <= 1e-10);
      }
    }
  }
}

TEST_CASE("exact haar echo equals the literal pauli string sum") {
  for (int L : {2, 3, 4}) {
    const auto eig = random_generator(L, 200 + L);
    for (double t : {0.0, 0.5, 1.7}) {
      const double exact = haar_choi_echo_exact(eig, t);
      const double literal = ref::haar_echo_pauli_sum(eig, t);
      CHECK(std::abs(exact - literal) <= 1e-12);
    }
  }
  // and for a probe away from site 1
  const auto eig = random_generator(3, 250);
  CHECK(std::abs(haar_choi_echo_exact(eig, 0.9, 2) - ref::haar_echo_pauli_sum(eig, 0.9, 2)) <=
        1e-12);
}

TEST_CASE("decoupled dynamics keep the echo at 1 for all times") {
  // J = 0 ising: the probe evolves unitarily
  const auto eig = eigh(build_mixed_field_ising({4, 1.0, 0.7, 0.0}));
  for (double t : {0.3, 1.1, 2.2, 7.9})
    CHECK(haar_choi_echo_exact(eig, t) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("swap generator haar average is 1/2 by every estimator") {
  const auto sw = swap_generator();
  CHECK(haar_choi_echo_design(sw, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(haar_choi_echo_exact(sw, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  const auto mc = haar_choi_echo_mc(sw, 1.0, 100, 5);
  CHECK(mc.mean == doctest::Approx(0.5).epsilon(1e-9));  // every env gives exactly 1/2
}

TEST_CASE("size limits advise the monte carlo estimator") {
  const auto eig = random_generator(4, 300);
  CHECK_THROWS_WITH_AS(haar_choi_echo_exact(eig, 1.0, 1, 3),
                       doctest::Contains("Monte Carlo"), std::invalid_argument);
  CHECK_THROWS_AS(haar_choi_echo_design(random_generator(6, 301), 1.0), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with exact within three standard errors") {
  int failures = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto eig = random_generator(4, 400 + trial);
    const double t = 0.4 + 0.37 * static_cast<double>(trial);
    const double exact = haar_choi_echo_exact(eig, t);
    const auto mc = haar_choi_echo_mc(eig, t, 2000, 900 + trial);
    if (std::abs(mc.mean - exact) > 3.0 * mc.std_error) ++failures;
  }
  // 3 sigma misses should be rare; allow one across ten trials
  CHECK(failures <= 1);
}

TEST_CASE("monte carlo variance shrinks like 1/M") {
  const auto eig = random_generator(3, 500);
  const double t = 1.3;
  std::vector<double> log_m, log_var;
  for (int M : {100, 1000, 10000}) {
    const int repeats = 24;
    std::vector<double> means(repeats);
    for (int r = 0; r < repeats; ++r)
      means[r] = haar_choi_echo_mc(eig, t, M, derive_seed(600, M, r)).mean;
    double mu = 0.0;
    for (double m : means) mu += m;
    mu /= repeats;
    double var = 0.0;
    for (double m : means) var += (m - mu) * (m - mu);
    var /= (repeats - 1.0);
    log_m.push_back(std::log(static_cast<double>(M)));
    log_var.push_back(std::log(var));
  }
  // least squares slope over the three points
  const int n = 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += log_m[i];
    sy += log_var[i];
    sxx += log_m[i] * log_m[i];
    sxy += log_m[i] * log_var[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("monte carlo is deterministic given the seed") {
  const auto eig = random_generator(3, 700);
  const auto a = haar_choi_echo_mc(eig, 0.8, 500, 42);
  const auto b = haar_choi_echo_mc(eig, 0.8, 500, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(haar_choi_echo_mc(eig, 0.8, 500, 43).mean != a.mean);
}

TEST_CASE("series values respect the qubit echo bounds") {
  const auto eig = eigh(build_mixed_field_ising({5, 1.0, 0.48, 0.8}));
  const TimeGrid grid = TimeGrid::uniform(20.0, 0.1);
  for (double v : haar_choi_echo_exact_series(eig, grid).values) {
    CHECK(v >= 0.25 - 1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
}

TEST_CASE("trapezoid time average fixtures") {
  // constant series
  CHECK(trapezoid_average({0, 1, 2, 3}, {0.7, 0.7, 0.7, 0.7}) ==
        doctest::Approx(0.7).epsilon(1e-15));
  // J = 0 ising averages to 1
  const auto eig = eigh(build_mixed_field_ising({4, 1.0, 0.7, 0.0}));
  const double avg = time_averaged_choi_echo(eig, 10.0, 0.1, EchoEstimator::ExactPauli);
  CHECK(avg == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("time grid construction and validation") {
  const TimeGrid g = TimeGrid::uniform(100.0, 0.1);
  CHECK(g.times.size() == 1001);
  CHECK(g.times.front() == 0.0);
  CHECK(g.times.back() == 100.0);
  CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("averaged subsystem purity fixtures") {
  // decoupled probe stays pure
  const auto decoupled = eigh(build_mixed_field_ising({4, 1.0, 0.7, 0.0}));
  const PuritySeries p = averaged_subsystem_purity(decoupled, 10, 10.0, 0.1, 3);
  CHECK(p.p_bar == doctest::Approx(1.0).epsilon(1e-10));
  for (double v : p.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

  // bounds and determinism on a chaotic point
  const auto chaotic = eigh(build_mixed_field_ising({4, 1.0, 0.48, 0.8}));
  const PuritySeries a = averaged_subsystem_purity(chaotic, 8, 10.0, 0.1, 5);
  const PuritySeries b = averaged_subsystem_purity(chaotic, 8, 10.0, 0.1, 5);
  CHECK(a.p_bar == b.p_bar);
  CHECK(a.p_bar >= 0.5);
  CHECK(a.p_bar <= 1.0);
  CHECK(a.p_bar < 1.0 - 1e-3);  // interaction decoheres the probe
}

TEST_CASE("unitarity detection: echo is 1 iff the induced channel stays unitary") {
  // exactly decoupled XXZ (couplings off): unitary probe, echo 1
  const auto dec = eigh(build_xxz_defect({4, 0.0, 0.0, 3.0, 2}));
  CHECK(time_averaged_choi_echo(dec, 10.0, 0.1, EchoEstimator::ExactPauli) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // large but finite defect: close to 1 yet strictly non-unitary
  const auto near = eigh(build_xxz_defect({4, 1.0, 1.0, 50.0, 2}));
  const double avg = time_averaged_choi_echo(near, 10.0, 0.1, EchoEstimator::ExactPauli);
  CHECK(avg < 1.0 - 1e-6);
  const QubitChannel c =
      choi_from_unitary(propagator(near, 1.0), random_product_state(3, 8), 1);
  CHECK(choi_purity(c) < 1.0 - 1e-6);
}

TEST_CASE("trapezoid error under dt halving stays below 1e-3") {
  const auto small = eigh(build_mixed_field_ising({5, 1.0, 0.48, 0.8}));
  CHECK(std::abs(time_averaged_choi_echo(small, 50.0, 0.1, EchoEstimator::ExactPauli) -
                 time_averaged_choi_echo(small, 50.0, 0.05, EchoEstimator::ExactPauli)) <= 1e-3);

  // the full-size fixture of the scaled reproductions
  const auto eig = eigh(build_mixed_field_ising({7, 1.0, 0.48, 0.8}));
  const double coarse = time_averaged_choi_echo(eig, 100.0, 0.1, EchoEstimator::ExactPauli);
  const double fine = time_averaged_choi_echo(eig, 100.0, 0.05, EchoEstimator::ExactPauli);
  CHECK(std::abs(coarse - fine) <= 1e-3);
}

TEST_CASE("estimator labels and parsing") {
  CHECK(estimator_label(EchoEstimator::MonteCarlo, 2000) == "monte_carlo(2000)");
  CHECK(parse_estimator("exact") == EchoEstimator::ExactPauli);
  CHECK(parse_estimator("monte_carlo") == EchoEstimator::MonteCarlo);
  CHECK_THROWS_AS(parse_estimator("bogus"), std::invalid_argument);
}
