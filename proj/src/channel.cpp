#include "chaoslab/channel.hpp"

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

}  // namespace

CMat embed_probe_env(const Eigen::Matrix2cd& probe_op, const CMat& env_op, int L, int probe_site) {
  const Eigen::Index d_env = env_op.rows();
  const Eigen::Index dim = 2 * d_env;
  const int shift = site_bit_shift(L, probe_site);
  const std::uint64_t low_mask = (std::uint64_t(1) << shift) - 1;

  auto global_index = [&](int s, Eigen::Index e) -> Eigen::Index {
    const std::uint64_t eu = static_cast<std::uint64_t>(e);
    return static_cast<Eigen::Index>(((eu & ~low_mask) << 1) |
                                     (static_cast<std::uint64_t>(s) << shift) | (eu & low_mask));
  };

  CMat out(dim, dim);
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp)
      for (Eigen::Index e = 0; e < d_env; ++e)
        for (Eigen::Index ep = 0; ep < d_env; ++ep)
          out(global_index(s, e), global_index(sp, ep)) = probe_op(s, sp) * env_op(e, ep);
  return out;
}

CMat propagator(const EigenDecomposition& eig, double t) {
  if (!eig.has_vectors) throw std::invalid_argument("propagator: eigenvectors not available");
  const Eigen::Index n = eig.dim();
  CVec phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = -eig.eigenvalues(k) * t;
    phases(k) = cxd(std::cos(a), std::sin(a));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

QubitChannel QubitChannel::from_choi(const Eigen::Matrix4cd& choi) {
  if ((choi - choi.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("QubitChannel: Choi matrix not Hermitian");
  if (std::abs(choi.trace() - cxd(1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("QubitChannel: Choi matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("QubitChannel: Choi matrix not positive semidefinite (min eig " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  // trace over the output factor must leave the maximally mixed reference
  Eigen::Matrix2cd marg = Eigen::Matrix2cd::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 2; ++a) marg(b, bp) += choi(2 * a + b, 2 * a + bp);
  if ((marg - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("QubitChannel: channel is not trace preserving");
  return QubitChannel(choi);
}

Eigen::Matrix2cd QubitChannel::apply(const Eigen::Matrix2cd& x) const {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) {
      cxd acc = 0.0;
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) acc += choi_(2 * a + b, 2 * ap + bp) * x(b, bp);
      out(a, ap) = 2.0 * acc;
    }
  return out;
}

CMat apply_channel(const CMat& U, const CMat& rho_env, const CMat& rho_probe, int probe_site) {
  const int L = sites_from_dim(U.rows(), "apply_channel");
  if (rho_probe.rows() != 2 || rho_probe.cols() != 2)
    throw std::invalid_argument("apply_channel: probe state must be 2x2");
  if (rho_env.rows() * 2 != U.rows())
    throw std::invalid_argument("apply_channel: environment dimension mismatch");
  if (probe_site < 1 || probe_site > L)
    throw std::invalid_argument("apply_channel: probe site out of range");
  Eigen::Matrix2cd probe = rho_probe;
  CMat rho = embed_probe_env(probe, rho_env, L, probe_site);
  CMat evolved = U * rho * U.adjoint();
  std::vector<int> env_sites;
  for (int s = 1; s <= L; ++s)
    if (s != probe_site) env_sites.push_back(s);
  return partial_trace(evolved, L, env_sites);
}

std::array<CVec, 2> evolve_probe_basis(const CMat& U, const CVec& psi_env, int probe_site) {
  const int L = sites_from_dim(U.rows(), "evolve_probe_basis");
  if (psi_env.size() * 2 != U.rows())
    throw std::invalid_argument("evolve_probe_basis: environment dimension mismatch");
  const int shift = site_bit_shift(L, probe_site);
  const std::uint64_t low_mask = (std::uint64_t(1) << shift) - 1;
  const Eigen::Index d_env = psi_env.size();

  std::array<CVec, 2> out;
  for (int s = 0; s < 2; ++s) {
    CVec v = CVec::Zero(U.rows());
    for (Eigen::Index e = 0; e < d_env; ++e) {
      const std::uint64_t eu = static_cast<std::uint64_t>(e);
      const Eigen::Index g = static_cast<Eigen::Index>(
          ((eu & ~low_mask) << 1) | (static_cast<std::uint64_t>(s) << shift) | (eu & low_mask));
      v(g) = psi_env(e);
    }
    out[s] = U * v;
  }
  return out;
}

Eigen::Matrix<cxd, 2, Eigen::Dynamic> probe_reshape(const CVec& v, int L, int probe_site) {
  const int shift = site_bit_shift(L, probe_site);
  const std::uint64_t low_mask = (std::uint64_t(1) << shift) - 1;
  const Eigen::Index d_env = v.size() / 2;
  Eigen::Matrix<cxd, 2, Eigen::Dynamic> out(2, d_env);
  for (Eigen::Index e = 0; e < d_env; ++e) {
    const std::uint64_t eu = static_cast<std::uint64_t>(e);
    const std::uint64_t high = (eu & ~low_mask) << 1;
    const std::uint64_t low = eu & low_mask;
    out(0, e) = v(static_cast<Eigen::Index>(high | low));
    out(1, e) = v(static_cast<Eigen::Index>(high | (std::uint64_t(1) << shift) | low));
  }
  return out;
}

namespace {

QubitChannel choi_from_basis_images(const std::array<std::array<Eigen::Matrix2cd, 2>, 2>& E) {
  Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) choi(2 * a + i, 2 * ap + j) = 0.5 * E[i][j](a, ap);
  return QubitChannel::from_choi(choi);
}

}  // namespace

QubitChannel choi_from_unitary(const CMat& U, const CMat& rho_env, int probe_site) {
  const int L = sites_from_dim(U.rows(), "choi_from_unitary");
  if (rho_env.rows() * 2 != U.rows())
    throw std::invalid_argument("choi_from_unitary: environment dimension mismatch");
  if (std::abs(rho_env.trace() - cxd(1.0, 0.0)) > 1e-9)
    throw std::invalid_argument("choi_from_unitary: environment state is not unit trace");

  std::vector<int> env_sites;
  for (int s = 1; s <= L; ++s)
    if (s != probe_site) env_sites.push_back(s);

  std::array<std::array<Eigen::Matrix2cd, 2>, 2> images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd basis_op = Eigen::Matrix2cd::Zero();
      basis_op(i, j) = 1.0;
      CMat rho = embed_probe_env(basis_op, rho_env, L, probe_site);
      CMat evolved = U * rho * U.adjoint();
      images[i][j] = partial_trace(evolved, L, env_sites);
    }
  return choi_from_basis_images(images);
}

QubitChannel choi_from_unitary(const CMat& U, const ProductState& psi_env, int probe_site) {
  const int L = sites_from_dim(U.rows(), "choi_from_unitary");
  if (psi_env.amplitudes.size() * 2 != U.rows())
    throw std::invalid_argument("choi_from_unitary: environment dimension mismatch");
  if (std::abs(psi_env.amplitudes.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("choi_from_unitary: environment state is not normalized");

  const auto phi = evolve_probe_basis(U, psi_env.amplitudes, probe_site);
  std::array<Eigen::Matrix<cxd, 2, Eigen::Dynamic>, 2> F = {
      probe_reshape(phi[0], L, probe_site), probe_reshape(phi[1], L, probe_site)};

  std::array<std::array<Eigen::Matrix2cd, 2>, 2> images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) images[i][j] = F[i] * F[j].adjoint();
  return choi_from_basis_images(images);
}

double choi_purity(const QubitChannel& c) { return c.choi().squaredNorm(); }

double unitality_term(const QubitChannel& c) {
  const Eigen::Matrix2cd e_id = c.apply(Eigen::Matrix2cd::Identity());
  return (e_id * e_id).trace().real();
}

double haar_averaged_output_purity(const QubitChannel& c) {
  return (unitality_term(c) + 4.0 * choi_purity(c)) / 6.0;
}

PauliTransferMatrix pauli_transfer_matrix(const QubitChannel& c) {
  PauliTransferMatrix ptm;
  for (int nu = 0; nu < 4; ++nu) {
    const Eigen::Matrix2cd image = c.apply(pauli2(static_cast<Pauli>(nu)));
    for (int mu = 0; mu < 4; ++mu)
      ptm.R(mu, nu) = 0.5 * (pauli2(static_cast<Pauli>(mu)) * image).trace().real();
  }
  return ptm;
}

bool is_entanglement_breaking(const QubitChannel& c) {
  // partial transpose on the reference factor
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) pt(2 * a + bp, 2 * ap + b) = c.choi()(2 * a + b, 2 * ap + bp);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-10;
}

QubitChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("amplitude_damping_channel: gamma outside [0, 1]");
  Eigen::Matrix2cd K0 = Eigen::Matrix2cd::Zero(), K1 = Eigen::Matrix2cd::Zero();
  K0(0, 0) = 1.0;
  K0(1, 1) = std::sqrt(1.0 - gamma);
  K1(0, 1) = std::sqrt(gamma);
  std::array<std::array<Eigen::Matrix2cd, 2>, 2> images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd op = Eigen::Matrix2cd::Zero();
      op(i, j) = 1.0;
      images[i][j] = K0 * op * K0.adjoint() + K1 * op * K1.adjoint();
    }
  return choi_from_basis_images(images);
}

QubitChannel depolarizing_channel(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing_channel: p outside [0, 1]");
  std::array<std::array<Eigen::Matrix2cd, 2>, 2> images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd op = Eigen::Matrix2cd::Zero();
      op(i, j) = 1.0;
      images[i][j] = (1.0 - p) * op +
                     p * 0.5 * op.trace() * Eigen::Matrix2cd::Identity();
    }
  return choi_from_basis_images(images);
}

QubitChannel unitary_qubit_channel(const Eigen::Matrix2cd& u) {
  if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("unitary_qubit_channel: matrix is not unitary");
  std::array<std::array<Eigen::Matrix2cd, 2>, 2> images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Matrix2cd op = Eigen::Matrix2cd::Zero();
      op(i, j) = 1.0;
      images[i][j] = u * op * u.adjoint();
    }
  return choi_from_basis_images(images);
}

}  // namespace chaoslab
