#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>

#include "chaoslab/reference.hpp"
#include "chaoslab/spinops.hpp"
#include "doctest.h"

using namespace chaoslab;

namespace {

CMat random_density(int dim, std::uint64_t seed) {
  Rng rng(seed);
  CMat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.complex_normal();
  CMat rho = A * A.adjoint();
  rho /= rho.trace();
  return rho;
}

CMat random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  CMat A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = rng.complex_normal();
  return A;
}

}  // namespace

TEST_CASE("kron basics") {
  const CMat I2 = CMat::Identity(2, 2);
  CHECK(max_abs(kron(I2, I2) - CMat::Identity(4, 4)) == 0.0);

  const CMat zz = kron(pauli2(Pauli::Z), pauli2(Pauli::Z));
  CMat expected = CMat::Zero(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = -1;
  expected(2, 2) = -1;
  expected(3, 3) = 1;
  CHECK(max_abs(zz - expected) == 0.0);

  const CMat a = random_matrix(4, 4, 1), b = random_matrix(8, 8, 2);
  CHECK(kron(a, b).rows() == 32);
}

TEST_CASE("kron associativity") {
  const CMat a = random_matrix(2, 2, 10), b = random_matrix(3, 3, 11),
             c = random_matrix(4, 4, 12);
  CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) <= 1e-12);
}

TEST_CASE("pauli string matrix matches hand values and the kron oracle") {
  // (z, 0, z) on L = 3
  PauliString s{{Pauli::Z, Pauli::I, Pauli::Z}};
  const CMat m = pauli_string_matrix(s);
  const double expected[8] = {1, -1, 1, -1, -1, 1, -1, 1};
  for (int g = 0; g < 8; ++g) CHECK(std::abs(m(g, g) - cxd(expected[g], 0.0)) == 0.0);
  CHECK(max_abs(m - ref::pauli_string_dense(s)) == 0.0);

  PauliString all_id{{Pauli::I, Pauli::I, Pauli::I, Pauli::I}};
  CHECK(max_abs(pauli_string_matrix(all_id) - CMat::Identity(16, 16)) == 0.0);
}

TEST_CASE("every pauli string squares to identity and matches the dense oracle (L <= 4)") {
  for (int L = 1; L <= 4; ++L) {
    const long n_strings = 1L << (2 * L);
    for (long idx = 0; idx < n_strings; ++idx) {
      PauliString s;
      long rem = idx;
      for (int i = 0; i < L; ++i) {
        s.labels.push_back(static_cast<Pauli>(rem % 4));
        rem /= 4;
      }
      const CMat m = pauli_string_matrix(s);
      CHECK(max_abs(m - ref::pauli_string_dense(s)) <= 1e-15);
      CHECK(max_abs(m * m - CMat::Identity(m.rows(), m.cols())) <= 1e-15);
    }
  }
}

TEST_CASE("pauli string size limit") {
  PauliString s;
  s.labels.assign(15, Pauli::I);
  CHECK_THROWS_AS(pauli_string_matrix(s), std::invalid_argument);
  PauliString small{{Pauli::X, Pauli::Y, Pauli::Z}};
  CHECK_THROWS_AS(pauli_string_matrix(small, 2), std::invalid_argument);
}

TEST_CASE("partial trace of the Bell state") {
  CVec bell = CVec::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const CMat rho = bell * bell.adjoint();
  for (int site : {1, 2}) {
    const CMat reduced = partial_trace(rho, 2, {site});
    CHECK(max_abs(reduced - 0.5 * CMat::Identity(2, 2)) <= 1e-15);
  }
}

TEST_CASE("partial trace of a product state returns the kept factor") {
  const CMat rho_a = random_density(4, 3);  // sites 1-2
  const CMat rho_b = random_density(2, 4);  // site 3
  const CMat rho = kron(rho_a, rho_b);
  CHECK(max_abs(partial_trace(rho, 3, {3}) - rho_a) <= 1e-12);
  CHECK(max_abs(partial_trace(rho, 3, {1, 2}) - rho_b) <= 1e-12);
}

TEST_CASE("partial trace preserves the trace and composes") {
  const CMat rho = random_density(32, 5);  // L = 5
  const CMat reduced = partial_trace(rho, 5, {2, 4});
  CHECK(std::abs(reduced.trace() - rho.trace()) <= 1e-12);

  // tracing {2} then {3} equals tracing {2, 3} at once
  const CMat one = partial_trace(rho, 5, {2});
  // after removing site 2, original site 3 is site 2 of the 4-site system
  const CMat two = partial_trace(one, 4, {2});
  CHECK(max_abs(two - partial_trace(rho, 5, {2, 3})) <= 1e-12);
}

TEST_CASE("partial trace matches the naive oracle") {
  const CMat rho = random_density(16, 6);
  for (const auto& sites : std::vector<std::vector<int>>{{1}, {4}, {2, 3}, {1, 4}, {1, 2, 3}}) {
    CHECK(max_abs(partial_trace(rho, 4, sites) - ref::partial_trace_naive(rho, 4, sites)) <=
          1e-13);
  }
}

TEST_CASE("partial trace rejects bad sites") {
  const CMat rho = random_density(4, 7);
  CHECK_THROWS_AS(partial_trace(rho, 2, {3}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, 2, {0}), std::invalid_argument);
}

TEST_CASE("purity fixtures") {
  CMat proj = CMat::Zero(4, 4);
  proj(2, 2) = 1.0;
  CHECK(purity(proj) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(CMat::Identity(8, 8) / 8.0) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));

  CMat diag = CMat::Zero(2, 2);
  diag(0, 0) = 0.75;
  diag(1, 1) = 0.25;
  CHECK(purity(diag) == doctest::Approx(0.625).epsilon(1e-14));

  CHECK_THROWS_AS(purity(2.0 * diag), std::invalid_argument);
}

TEST_CASE("random product states are deterministic, normalized and site-pure") {
  const ProductState a = random_product_state(5, 42);
  const ProductState b = random_product_state(5, 42);
  CHECK(max_abs(a.amplitudes - b.amplitudes) == 0.0);
  CHECK(std::abs(a.amplitudes.norm() - 1.0) <= 1e-12);
  CHECK(a.seed == 42);

  const CMat rho = a.amplitudes * a.amplitudes.adjoint();
  for (int site = 1; site <= 5; ++site) {
    std::vector<int> others;
    for (int s = 1; s <= 5; ++s)
      if (s != site) others.push_back(s);
    const CMat marginal = partial_trace(rho, 5, others);
    CHECK(purity(marginal) == doctest::Approx(1.0).epsilon(1e-10));
  }

  CHECK(max_abs(random_product_state(5, 43).amplitudes - a.amplitudes) > 1e-3);
}

TEST_CASE("haar first moment of single-site marginals") {
  // average single-qubit density over many samples approaches I/2
  const int n_samples = 10000;
  CMat acc = CMat::Zero(2, 2);
  for (int i = 0; i < n_samples; ++i) {
    const ProductState s = random_product_state(1, derive_seed(99, i));
    acc += s.amplitudes * s.amplitudes.adjoint();
  }
  acc /= n_samples;
  CHECK(max_abs(acc - 0.5 * CMat::Identity(2, 2)) <= 0.02);
}

TEST_CASE("magnetization sector bases") {
  const SectorBasis b42 = sector_basis(4, SectorKind::Magnetization, 2);
  CHECK(b42.dim() == 6);

  // completeness over all sectors
  Eigen::Index total = 0;
  for (int n_up = 0; n_up <= 4; ++n_up)
    total += sector_basis(4, SectorKind::Magnetization, n_up).dim();
  CHECK(total == 16);

  CHECK_THROWS_AS(sector_basis(4, SectorKind::Magnetization, 5), std::invalid_argument);
  CHECK_THROWS_AS(sector_basis(4, SectorKind::Magnetization, -1), std::invalid_argument);

  // paper-scale check: C(18, 7) states
  CHECK(sector_basis(18, SectorKind::Magnetization, 7).dim() == 31824);
}

TEST_CASE("parity sector bases") {
  // L = 2 even sector: {|00>, |11>, (|01> + |10>)/sqrt(2)}
  const SectorBasis even = sector_basis(2, SectorKind::ParityEven);
  CHECK(even.dim() == 3);
  const CMat dense = even.dense();
  // subspace projector comparison, basis order independent
  CMat expected = CMat::Zero(4, 3);
  expected(0, 0) = 1.0;
  expected(3, 1) = 1.0;
  expected(1, 2) = expected(2, 2) = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(dense * dense.adjoint() - expected * expected.adjoint()) <= 1e-14);

  const SectorBasis odd = sector_basis(2, SectorKind::ParityOdd);
  CHECK(odd.dim() == 1);

  // even-parity dimension formula for even L; at L = 16 the construction
  // gives 32 896 states
  for (int L : {2, 4, 6, 8, 10, 16}) {
    const auto e = sector_basis(L, SectorKind::ParityEven);
    const auto o = sector_basis(L, SectorKind::ParityOdd);
    const Eigen::Index expected_even = ((1LL << L) + (1LL << ((L + 1) / 2))) / 2;
    CHECK(e.dim() == expected_even);
    CHECK(e.dim() + o.dim() == (1LL << L));
  }
  CHECK(sector_basis(16, SectorKind::ParityEven).dim() == 32896);
}

TEST_CASE("sector basis columns are orthonormal") {
  for (auto kind : {SectorKind::ParityEven, SectorKind::ParityOdd}) {
    const CMat dense = sector_basis(5, kind).dense();
    CHECK(max_abs(dense.adjoint() * dense -
                  CMat::Identity(dense.cols(), dense.cols())) <= 1e-12);
  }
  const CMat dense = sector_basis(5, SectorKind::Magnetization, 2).dense();
  CHECK(max_abs(dense.adjoint() * dense - CMat::Identity(dense.cols(), dense.cols())) <= 1e-12);
}
