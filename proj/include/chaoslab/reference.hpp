#pragma once

#include "chaoslab/spectra.hpp"
#include "chaoslab/spinops.hpp"

// Serial reference implementations. These favor being obviously correct over
// being fast; the test suite pins the production kernels against them and
// the benchmark tool reports the speed gap.
namespace chaoslab::ref {

CMat kron_chain(const std::vector<CMat>& factors);

// Pauli string as a plain iterated tensor product.
CMat pauli_string_dense(const PauliString& s);

// Partial trace by direct enumeration of the summed index.
CMat partial_trace_naive(const CMat& rho, int L, const std::vector<int>& traced_sites);

// Literal evaluation of the Haar-averaged Choi echo as the weighted sum over
// all 4^(L-1) environment Pauli strings,
//   4^-L sum_alpha 3^-w(alpha) Tr_E[(Tr_S[U sigma_alpha U+])^2].
double haar_echo_pauli_sum(const CMat& U, int probe_site = 1);
double haar_echo_pauli_sum(const EigenDecomposition& eig, double t, int probe_site = 1);

}  // namespace chaoslab::ref
