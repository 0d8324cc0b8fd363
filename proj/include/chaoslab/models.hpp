#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "chaoslab/spinops.hpp"

namespace chaoslab {

// A Hamiltonian/sector pairing whose symmetry check failed.
struct symmetry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IsingParams {
  int L = 2;
  double hx = 1.0;
  double hz = 0.0;
  double J = 1.0;
};

struct HeisenbergParams {
  int L = 2;
  double h = 0.0;          // disorder strength, fields h_i uniform on [-h, h]
  std::uint64_t seed = 0;  // disorder realization
};

struct XXZDefectParams {
  int L = 2;
  double Jxy = 1.0;
  double Jz = 1.0;
  double eps = 0.0;
  int defect = 1;
};

// floor(L/2); off the reflection axis for every L >= 2.
int default_defect_site(int L);

// coeff * op_a(site_a) [ * op_b(site_b) ]; op_b == I means a one-site term.
struct SpinTerm {
  double coeff = 0.0;
  Pauli op_a = Pauli::I;
  int site_a = 0;
  Pauli op_b = Pauli::I;
  int site_b = 0;
};

std::vector<SpinTerm> mixed_field_ising_terms(const IsingParams& p);
std::vector<SpinTerm> heisenberg_terms(int L, const std::vector<double>& fields);
std::vector<SpinTerm> xxz_defect_terms(const XXZDefectParams& p);

std::vector<double> sample_disorder_fields(int L, double h, std::uint64_t seed);

CMat build_dense(const std::vector<SpinTerm>& terms, int L);
// Hamiltonian assembled directly in the sector basis, never touching the
// full 2^L matrix. Amplitudes escaping the sector must cancel; leftovers
// beyond tolerance raise symmetry_error.
CMat build_sector(const std::vector<SpinTerm>& terms, const SectorBasis& basis);

// Exact check that the term list is invariant under i <-> L-i+1; guards
// parity-sector builds without materializing the full matrix.
bool terms_reflection_symmetric(const std::vector<SpinTerm>& terms, int L);

CMat build_mixed_field_ising(const IsingParams& p);
std::pair<CMat, std::vector<double>> build_random_field_heisenberg(const HeisenbergParams& p);
CMat build_xxz_defect(const XXZDefectParams& p);

// B^dagger H B. Validates that H commutes with the sector's symmetry
// (reflection or total magnetization) to 1e-10 relative to max|H|.
CMat project_to_sector(const CMat& H, const SectorBasis& basis);

}  // namespace chaoslab
