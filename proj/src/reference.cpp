#include "chaoslab/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "chaoslab/channel.hpp"

namespace chaoslab::ref {

CMat kron_chain(const std::vector<CMat>& factors) {
  if (factors.empty()) throw std::invalid_argument("kron_chain: no factors");
  CMat out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

CMat pauli_string_dense(const PauliString& s) {
  if (s.size() < 1) throw std::invalid_argument("pauli_string_dense: empty string");
  std::vector<CMat> factors;
  factors.reserve(s.size());
  for (Pauli p : s.labels) factors.push_back(pauli2(p));
  return kron_chain(factors);
}

CMat partial_trace_naive(const CMat& rho, int L, const std::vector<int>& traced_sites) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_trace_naive: dimension mismatch");
  std::vector<bool> traced(L + 1, false);
  for (int s : traced_sites) {
    if (s < 1 || s > L) throw std::invalid_argument("partial_trace_naive: bad site");
    traced[s] = true;
  }
  std::vector<int> kept;
  for (int s = 1; s <= L; ++s)
    if (!traced[s]) kept.push_back(s);
  const Eigen::Index dk = Eigen::Index(1) << kept.size();

  // walk every pair of global indices and accumulate those agreeing on the
  // traced bits and matching (a, b) on the kept bits
  CMat out = CMat::Zero(dk, dk);
  for (Eigen::Index g = 0; g < dim; ++g)
    for (Eigen::Index gp = 0; gp < dim; ++gp) {
      bool diagonal_on_traced = true;
      for (int s = 1; s <= L && diagonal_on_traced; ++s)
        if (traced[s] && basis_bit(g, L, s) != basis_bit(gp, L, s)) diagonal_on_traced = false;
      if (!diagonal_on_traced) continue;
      Eigen::Index a = 0, b = 0;
      for (std::size_t j = 0; j < kept.size(); ++j) {
        a = (a << 1) | basis_bit(g, L, kept[j]);
        b = (b << 1) | basis_bit(gp, L, kept[j]);
      }
      out(a, b) += rho(g, gp);
    }
  return out;
}

double haar_echo_pauli_sum(const CMat& U, int probe_site) {
  int L = 0;
  while ((Eigen::Index(1) << L) < U.rows()) ++L;
  if ((Eigen::Index(1) << L) != U.rows())
    throw std::invalid_argument("haar_echo_pauli_sum: dimension is not a power of two");
  if (probe_site < 1 || probe_site > L)
    throw std::invalid_argument("haar_echo_pauli_sum: probe site out of range");
  const int n_env = L - 1;
  long n_strings = 1;
  for (int i = 0; i < n_env; ++i) n_strings *= 4;

  std::vector<int> env_sites;
  for (int s = 1; s <= L; ++s)
    if (s != probe_site) env_sites.push_back(s);

  double total = 0.0;
  for (long idx = 0; idx < n_strings; ++idx) {
    PauliString str;
    str.labels.assign(L, Pauli::I);
    long rem = idx;
    int weight = 0;
    for (int j = 0; j < n_env; ++j) {
      const int label = static_cast<int>(rem % 4);
      rem /= 4;
      str.labels[env_sites[j] - 1] = static_cast<Pauli>(label);
      weight += (label != 0);
    }
    const CMat sigma = pauli_string_dense(str);
    const CMat conjugated = U * sigma * U.adjoint();
    const CMat reduced = partial_trace_naive(conjugated, L, {probe_site});
    const double term = (reduced * reduced).trace().real();
    total += term / std::pow(3.0, weight);
  }
  return total / std::pow(4.0, L);
}

double haar_echo_pauli_sum(const EigenDecomposition& eig, double t, int probe_site) {
  return haar_echo_pauli_sum(propagator(eig, t), probe_site);
}

}  // namespace chaoslab::ref
