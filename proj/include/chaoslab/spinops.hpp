#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "chaoslab/rng.hpp"

namespace chaoslab {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Largest chain for which dense 2^L x 2^L complex matrices are allowed.
inline constexpr int kMaxDenseSites = 14;

// Sites are 1-based. Site 1 is the leftmost tensor factor (the probe spin)
// and owns the most significant bit of a computational basis index.
inline int site_bit_shift(int L, int site) { return L - site; }
inline int basis_bit(std::uint64_t g, int L, int site) {
  return static_cast<int>((g >> site_bit_shift(L, site)) & 1u);
}

double max_abs(const CMat& a);
bool is_hermitian(const CMat& a, double tol = 1e-12);

CMat kron(const CMat& a, const CMat& b);

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

const Eigen::Matrix2cd& pauli2(Pauli p);

struct PauliString {
  std::vector<Pauli> labels;  // labels[i] acts on site i+1

  int size() const { return static_cast<int>(labels.size()); }
  // number of non-identity labels
  int weight() const;
};

// Dense matrix of a Pauli string. Internally uses the signed-permutation
// structure (one nonzero per column); tests pin it against the plain
// iterated tensor product.
CMat pauli_string_matrix(const PauliString& s, int max_sites = kMaxDenseSites);

// Apply a Pauli string to basis state g: returns the image basis state and
// writes the accumulated phase.
std::uint64_t pauli_string_apply(const PauliString& s, std::uint64_t g, cxd& phase);

// Reduced matrix on the kept sites, site order preserved.
CMat partial_trace(const CMat& rho, int L, const std::vector<int>& traced_sites);

// Tr[rho^2]. Requires unit trace (to 1e-9).
double purity(const CMat& rho);

struct ProductState {
  int L = 0;
  CVec amplitudes;  // 2^L, unit norm
  std::uint64_t seed = 0;
};

// Each site drawn Haar-uniformly on single-qubit pure states (two i.i.d.
// standard complex Gaussians, normalized). Deterministic given the seed.
ProductState random_product_state(int L, std::uint64_t seed);

// Product state from explicit single-qubit states (test and design-average use).
ProductState product_state(const std::vector<Eigen::Vector2cd>& site_states);

enum class SectorKind { Full, ParityEven, ParityOdd, Magnetization };

// Orthonormal basis of a symmetry sector. Columns are stored sparsely: a
// computational basis state for magnetization sectors, one or two states
// for reflection-parity combinations (|s> +- |Rs>)/sqrt(2).
struct SectorBasis {
  struct Column {
    std::array<std::uint32_t, 2> state{};
    std::array<double, 2> coeff{};
    int nnz = 0;
  };

  int L = 0;
  SectorKind kind = SectorKind::Full;
  int n_up = -1;  // magnetization sectors only
  std::vector<Column> columns;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(columns.size()); }
  Eigen::Index full_dim() const { return Eigen::Index(1) << L; }
  CMat dense() const;
};

// Reflection i <-> L-i+1 as a bit permutation of the L-bit index.
std::uint32_t reflect_bits(std::uint32_t g, int L);

// n_up counts spins in the sigma_z = +1 state (bit value 0).
SectorBasis sector_basis(int L, SectorKind kind, int n_up = -1);

}  // namespace chaoslab
