#include "chaoslab/spinops.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace chaoslab {

double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

const Eigen::Matrix2cd& pauli2(Pauli p) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    const cxd i(0.0, 1.0);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats[static_cast<int>(p)];
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : labels) w += (p != Pauli::I);
  return w;
}

std::uint64_t pauli_string_apply(const PauliString& s, std::uint64_t g, cxd& phase) {
  const int L = s.size();
  phase = 1.0;
  std::uint64_t out = g;
  for (int site = 1; site <= L; ++site) {
    const Pauli p = s.labels[site - 1];
    if (p == Pauli::I) continue;
    const int shift = site_bit_shift(L, site);
    const int b = static_cast<int>((g >> shift) & 1u);
    switch (p) {
      case Pauli::X:
        out ^= (std::uint64_t(1) << shift);
        break;
      case Pauli::Y:
        out ^= (std::uint64_t(1) << shift);
        phase *= b ? cxd(0, -1) : cxd(0, 1);
        break;
      case Pauli::Z:
        if (b) phase = -phase;
        break;
      default:
        break;
    }
  }
  return out;
}

CMat pauli_string_matrix(const PauliString& s, int max_sites) {
  const int L = s.size();
  if (L < 1 || L > max_sites)
    throw std::invalid_argument("pauli_string_matrix: length " + std::to_string(L) +
                                " outside [1, " + std::to_string(max_sites) + "]");
  const Eigen::Index dim = Eigen::Index(1) << L;
  CMat out = CMat::Zero(dim, dim);
  for (std::uint64_t g = 0; g < static_cast<std::uint64_t>(dim); ++g) {
    cxd phase;
    const std::uint64_t row = pauli_string_apply(s, g, phase);
    out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(g)) = phase;
  }
  return out;
}

CMat partial_trace(const CMat& rho, int L, const std::vector<int>& traced_sites) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_trace: matrix dimension does not match L");
  std::vector<bool> traced(L + 1, false);
  for (int s : traced_sites) {
    if (s < 1 || s > L) throw std::invalid_argument("partial_trace: site index out of range");
    if (traced[s]) throw std::invalid_argument("partial_trace: duplicate site index");
    traced[s] = true;
  }
  std::vector<int> kept;
  for (int s = 1; s <= L; ++s)
    if (!traced[s]) kept.push_back(s);

  const int nk = static_cast<int>(kept.size());
  const int nt = L - nk;
  const Eigen::Index dk = Eigen::Index(1) << nk;
  const Eigen::Index dt = Eigen::Index(1) << nt;

  // Scatter tables: reduced/traced sub-index -> bits at the original positions.
  std::vector<std::uint64_t> kept_scatter(dk, 0), traced_scatter(dt, 0);
  {
    std::vector<int> tsites;
    for (int s = 1; s <= L; ++s)
      if (traced[s]) tsites.push_back(s);
    for (Eigen::Index a = 0; a < dk; ++a) {
      std::uint64_t g = 0;
      for (int j = 0; j < nk; ++j)
        if ((a >> (nk - 1 - j)) & 1) g |= std::uint64_t(1) << site_bit_shift(L, kept[j]);
      kept_scatter[a] = g;
    }
    for (Eigen::Index s = 0; s < dt; ++s) {
      std::uint64_t g = 0;
      for (int j = 0; j < nt; ++j)
        if ((s >> (nt - 1 - j)) & 1) g |= std::uint64_t(1) << site_bit_shift(L, tsites[j]);
      traced_scatter[s] = g;
    }
  }

  CMat out = CMat::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cxd acc = 0.0;
      for (Eigen::Index s = 0; s < dt; ++s)
        acc += rho(static_cast<Eigen::Index>(kept_scatter[a] | traced_scatter[s]),
                   static_cast<Eigen::Index>(kept_scatter[b] | traced_scatter[s]));
      out(a, b) = acc;
    }
  return out;
}

double purity(const CMat& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("purity: matrix not square");
  const double tr = rho.trace().real();
  if (std::abs(rho.trace() - cxd(1.0, 0.0)) > 1e-9)
    throw std::invalid_argument("purity: trace deviates from 1 by more than 1e-9 (got " +
                                std::to_string(tr) + ")");
  return (rho * rho).trace().real();
}

ProductState random_product_state(int L, std::uint64_t seed) {
  if (L < 1) throw std::invalid_argument("random_product_state: L must be >= 1");
  Rng rng(seed);
  std::vector<Eigen::Vector2cd> sites(L);
  for (int i = 0; i < L; ++i) {
    Eigen::Vector2cd v;
    v(0) = rng.complex_normal();
    v(1) = rng.complex_normal();
    v /= v.norm();
    sites[i] = v;
  }
  ProductState out = product_state(sites);
  out.seed = seed;
  return out;
}

ProductState product_state(const std::vector<Eigen::Vector2cd>& site_states) {
  const int L = static_cast<int>(site_states.size());
  if (L < 1) throw std::invalid_argument("product_state: need at least one site");
  CVec amp = CVec::Ones(1);
  for (const auto& v : site_states) {
    // appended site is the least significant bit
    CVec next(amp.size() * 2);
    for (Eigen::Index g = 0; g < amp.size(); ++g) {
      next(2 * g) = amp(g) * v(0);
      next(2 * g + 1) = amp(g) * v(1);
    }
    amp.swap(next);
  }
  ProductState out;
  out.L = L;
  out.amplitudes = amp;
  return out;
}

std::uint32_t reflect_bits(std::uint32_t g, int L) {
  std::uint32_t out = 0;
  for (int i = 0; i < L; ++i)
    if ((g >> i) & 1u) out |= 1u << (L - 1 - i);
  return out;
}

CMat SectorBasis::dense() const {
  CMat out = CMat::Zero(full_dim(), dim());
  for (Eigen::Index j = 0; j < dim(); ++j)
    for (int k = 0; k < columns[j].nnz; ++k)
      out(static_cast<Eigen::Index>(columns[j].state[k]), j) = columns[j].coeff[k];
  return out;
}

SectorBasis sector_basis(int L, SectorKind kind, int n_up) {
  if (L < 1 || L > kMaxDenseSites + 6)
    throw std::invalid_argument("sector_basis: L out of supported range");
  SectorBasis basis;
  basis.L = L;
  basis.kind = kind;
  const std::uint32_t dim = 1u << L;

  switch (kind) {
    case SectorKind::Full:
      basis.columns.resize(dim);
      for (std::uint32_t g = 0; g < dim; ++g) basis.columns[g] = {{g, 0}, {1.0, 0.0}, 1};
      break;
    case SectorKind::Magnetization: {
      if (n_up < 0 || n_up > L)
        throw std::invalid_argument("sector_basis: N_up out of range [0, L]");
      basis.n_up = n_up;
      // sigma_z |0> = +|0>, so spins-up == zero bits
      const int target_ones = L - n_up;
      for (std::uint32_t g = 0; g < dim; ++g)
        if (std::popcount(g) == target_ones) basis.columns.push_back({{g, 0}, {1.0, 0.0}, 1});
      break;
    }
    case SectorKind::ParityEven:
    case SectorKind::ParityOdd: {
      if (L < 2) throw std::invalid_argument("sector_basis: parity sectors need L >= 2");
      const bool even = (kind == SectorKind::ParityEven);
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      for (std::uint32_t g = 0; g < dim; ++g) {
        const std::uint32_t r = reflect_bits(g, L);
        if (g == r) {
          if (even) basis.columns.push_back({{g, 0}, {1.0, 0.0}, 1});
        } else if (g < r) {
          basis.columns.push_back({{g, r}, {inv_sqrt2, even ? inv_sqrt2 : -inv_sqrt2}, 2});
        }
      }
      break;
    }
  }
  return basis;
}

}  // namespace chaoslab
