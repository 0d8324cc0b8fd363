#pragma once

#include "chaoslab/spectra.hpp"
#include "chaoslab/spinops.hpp"

namespace chaoslab {

// U(t) = V exp(-i Lambda t) V^dagger. Requires eigenvectors.
CMat propagator(const EigenDecomposition& eig, double t);

// Reduced single-qubit channel stored as its normalized Choi matrix with
// output (x) reference factor ordering. Construction validates the CPTP
// invariants: Hermiticity, positivity (min eigenvalue >= -1e-10), unit
// trace, and trace over the output factor equal to I/2.
class QubitChannel {
 public:
  static constexpr int kProbeDim = 2;

  static QubitChannel from_choi(const Eigen::Matrix4cd& choi);

  const Eigen::Matrix4cd& choi() const { return choi_; }

  // E(X) recovered from the Choi matrix: E(X) = 2 Tr_ref[choi (I (x) X^T)].
  Eigen::Matrix2cd apply(const Eigen::Matrix2cd& x) const;

 private:
  explicit QubitChannel(const Eigen::Matrix4cd& choi) : choi_(choi) {}
  Eigen::Matrix4cd choi_;
};

// rho_S(t) = Tr_E[U (rho_S (x) rho_E) U^dagger], probe at probe_site.
CMat apply_channel(const CMat& U, const CMat& rho_env, const CMat& rho_probe, int probe_site = 1);

// Channel induced on the probe qubit by a global unitary with the
// environment prepared in rho_env (or a pure product state). Built from the
// four basis-operator evolutions E(|i><j|).
QubitChannel choi_from_unitary(const CMat& U, const CMat& rho_env, int probe_site = 1);
QubitChannel choi_from_unitary(const CMat& U, const ProductState& psi_env, int probe_site = 1);

// Tr[choi^2], in [1/4, 1] for a qubit probe.
double choi_purity(const QubitChannel& c);

// Tr[E(I)^2] >= 2, equal iff the channel is unital.
double unitality_term(const QubitChannel& c);

// Average output purity over Haar pure inputs:
// (Tr[E(I)^2] + 4 Tr[choi^2]) / 6.
double haar_averaged_output_purity(const QubitChannel& c);

struct PauliTransferMatrix {
  Eigen::Matrix4d R;  // R(mu, nu) = Tr[sigma_mu E(sigma_nu)] / 2

  // determinant of the 3x3 Bloch block; |.| = 1 iff the channel is unitary
  double bloch_volume() const { return R.block<3, 3>(1, 1).determinant(); }
};

PauliTransferMatrix pauli_transfer_matrix(const QubitChannel& c);

// PPT test on the 2x2 Choi state (necessary and sufficient for a qubit probe).
bool is_entanglement_breaking(const QubitChannel& c);

// Reference channels.
QubitChannel amplitude_damping_channel(double gamma);
QubitChannel depolarizing_channel(double p);  // p = 1 is completely depolarizing
QubitChannel unitary_qubit_channel(const Eigen::Matrix2cd& u);

// Global operator probe_op (x) env_op with the probe factor at probe_site
// and all other site factors in their original order.
CMat embed_probe_env(const Eigen::Matrix2cd& probe_op, const CMat& env_op, int L, int probe_site);

// Pure-environment basis evolutions, shared by choi_from_unitary and the
// echo estimators: columns phi_s = U (|s>_probe (x) |psi_env>).
std::array<CVec, 2> evolve_probe_basis(const CMat& U, const CVec& psi_env, int probe_site);

// Gather the probe-indexed 2 x 2^(L-1) reshape of a global vector.
Eigen::Matrix<cxd, 2, Eigen::Dynamic> probe_reshape(const CVec& v, int L, int probe_site);

}  // namespace chaoslab
