#include "chaoslab/models.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>

namespace chaoslab {

namespace {

void validate_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

// Apply one term factor to basis state g, accumulating the phase.
inline std::uint64_t apply_factor(Pauli p, int site, int L, std::uint64_t g, cxd& phase) {
  if (p == Pauli::I) return g;
  const int shift = site_bit_shift(L, site);
  const int b = static_cast<int>((g >> shift) & 1u);
  switch (p) {
    case Pauli::X:
      return g ^ (std::uint64_t(1) << shift);
    case Pauli::Y:
      phase *= b ? cxd(0, -1) : cxd(0, 1);
      return g ^ (std::uint64_t(1) << shift);
    case Pauli::Z:
      if (b) phase = -phase;
      return g;
    default:
      return g;
  }
}

inline std::uint64_t apply_term(const SpinTerm& t, int L, std::uint64_t g, cxd& amp) {
  amp = t.coeff;
  std::uint64_t out = apply_factor(t.op_b, t.site_b, L, g, amp);
  out = apply_factor(t.op_a, t.site_a, L, out, amp);
  return out;
}

}  // namespace

int default_defect_site(int L) { return L / 2; }

std::vector<SpinTerm> mixed_field_ising_terms(const IsingParams& p) {
  if (p.L < 2) throw std::invalid_argument("ising: L must be >= 2");
  validate_finite(p.hx, "hx");
  validate_finite(p.hz, "hz");
  validate_finite(p.J, "J");
  std::vector<SpinTerm> terms;
  for (int i = 1; i <= p.L; ++i) {
    terms.push_back({p.hx, Pauli::X, i, Pauli::I, 0});
    terms.push_back({p.hz, Pauli::Z, i, Pauli::I, 0});
  }
  // note the minus sign on the coupling
  for (int i = 1; i < p.L; ++i) terms.push_back({-p.J, Pauli::Z, i, Pauli::Z, i + 1});
  return terms;
}

std::vector<double> sample_disorder_fields(int L, double h, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> fields(L);
  for (int i = 0; i < L; ++i) fields[i] = h * (2.0 * rng.uniform01() - 1.0);
  return fields;
}

std::vector<SpinTerm> heisenberg_terms(int L, const std::vector<double>& fields) {
  if (L < 2) throw std::invalid_argument("heisenberg: L must be >= 2");
  if (static_cast<int>(fields.size()) != L)
    throw std::invalid_argument("heisenberg: need one field per site");
  std::vector<SpinTerm> terms;
  for (int i = 1; i < L; ++i) {
    terms.push_back({0.25, Pauli::X, i, Pauli::X, i + 1});
    terms.push_back({0.25, Pauli::Y, i, Pauli::Y, i + 1});
    terms.push_back({0.25, Pauli::Z, i, Pauli::Z, i + 1});
  }
  for (int i = 1; i <= L; ++i) terms.push_back({0.5 * fields[i - 1], Pauli::Z, i, Pauli::I, 0});
  return terms;
}

std::vector<SpinTerm> xxz_defect_terms(const XXZDefectParams& p) {
  if (p.L < 2) throw std::invalid_argument("xxz: L must be >= 2");
  if (p.defect < 1 || p.defect > p.L)
    throw std::invalid_argument("xxz: defect site out of range [1, L]");
  validate_finite(p.Jxy, "Jxy");
  validate_finite(p.Jz, "Jz");
  validate_finite(p.eps, "eps");
  if (p.eps != 0.0 && 2 * p.defect == p.L + 1)
    throw std::invalid_argument("xxz: defect on the reflection axis does not break parity");
  std::vector<SpinTerm> terms;
  for (int i = 1; i < p.L; ++i) {
    terms.push_back({0.25 * p.Jxy, Pauli::X, i, Pauli::X, i + 1});
    terms.push_back({0.25 * p.Jxy, Pauli::Y, i, Pauli::Y, i + 1});
    terms.push_back({0.25 * p.Jz, Pauli::Z, i, Pauli::Z, i + 1});
  }
  terms.push_back({0.5 * p.eps, Pauli::Z, p.defect, Pauli::I, 0});
  return terms;
}

CMat build_dense(const std::vector<SpinTerm>& terms, int L) {
  if (L > kMaxDenseSites)
    throw std::invalid_argument("build_dense: L exceeds dense limit " +
                                std::to_string(kMaxDenseSites));
  const Eigen::Index dim = Eigen::Index(1) << L;
  CMat H = CMat::Zero(dim, dim);
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    for (std::uint64_t g = 0; g < static_cast<std::uint64_t>(dim); ++g) {
      cxd amp;
      const std::uint64_t gp = apply_term(t, L, g, amp);
      H(static_cast<Eigen::Index>(gp), static_cast<Eigen::Index>(g)) += amp;
    }
  }
  return H;
}

CMat build_sector(const std::vector<SpinTerm>& terms, const SectorBasis& basis) {
  const int L = basis.L;
  // state -> (column, coefficient); parity columns own two states
  std::unordered_map<std::uint32_t, std::pair<Eigen::Index, double>> lookup;
  lookup.reserve(2 * basis.columns.size());
  for (Eigen::Index j = 0; j < basis.dim(); ++j)
    for (int k = 0; k < basis.columns[j].nnz; ++k)
      lookup.emplace(basis.columns[j].state[k], std::make_pair(j, basis.columns[j].coeff[k]));

  double term_scale = 0.0;
  for (const auto& t : terms) term_scale = std::max(term_scale, std::abs(t.coeff));
  const double tol = 1e-10 * std::max(1.0, term_scale);

  CMat H = CMat::Zero(basis.dim(), basis.dim());
  std::unordered_map<std::uint32_t, cxd> image;
  for (Eigen::Index j = 0; j < basis.dim(); ++j) {
    const auto& col = basis.columns[j];
    // w = H |v_j> over computational states, then projected onto the sector
    image.clear();
    for (int k = 0; k < col.nnz; ++k) {
      const std::uint32_t g = col.state[k];
      for (const auto& t : terms) {
        if (t.coeff == 0.0) continue;
        cxd amp;
        const std::uint64_t gp = apply_term(t, L, g, amp);
        image[static_cast<std::uint32_t>(gp)] += amp * col.coeff[k];
      }
    }
    for (const auto& [gp, amp] : image) {
      const auto it = lookup.find(gp);
      if (it == lookup.end()) {
        // amplitude escaping the sector must cancel for a symmetric H
        if (std::abs(amp) > tol)
          throw symmetry_error("build_sector: Hamiltonian leaves the requested sector");
        continue;
      }
      H(it->second.first, j) += it->second.second * amp;
    }
  }
  return H;
}

bool terms_reflection_symmetric(const std::vector<SpinTerm>& terms, int L) {
  // canonical key: (op_a, site_a, op_b, site_b) with sites ascending
  auto canonical = [](SpinTerm t) {
    if (t.op_b != Pauli::I && t.site_b < t.site_a) {
      std::swap(t.op_a, t.op_b);
      std::swap(t.site_a, t.site_b);
    }
    return std::tuple(static_cast<int>(t.op_a), t.site_a, static_cast<int>(t.op_b), t.site_b);
  };
  std::map<std::tuple<int, int, int, int>, double> coeffs;
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    coeffs[canonical(t)] += t.coeff;
  }
  for (const auto& [key, c] : coeffs) {
    SpinTerm r;
    r.op_a = static_cast<Pauli>(std::get<0>(key));
    r.site_a = L + 1 - std::get<1>(key);
    r.op_b = static_cast<Pauli>(std::get<2>(key));
    r.site_b = r.op_b == Pauli::I ? 0 : L + 1 - std::get<3>(key);
    const auto it = coeffs.find(canonical(r));
    if (it == coeffs.end() || std::abs(it->second - c) > 1e-12 * std::max(1.0, std::abs(c)))
      return false;
  }
  return true;
}

CMat build_mixed_field_ising(const IsingParams& p) {
  return build_dense(mixed_field_ising_terms(p), p.L);
}

std::pair<CMat, std::vector<double>> build_random_field_heisenberg(const HeisenbergParams& p) {
  if (p.h < 0.0) throw std::invalid_argument("heisenberg: disorder strength must be >= 0");
  auto fields = sample_disorder_fields(p.L, p.h, p.seed);
  return {build_dense(heisenberg_terms(p.L, fields), p.L), std::move(fields)};
}

CMat build_xxz_defect(const XXZDefectParams& p) { return build_dense(xxz_defect_terms(p), p.L); }

CMat project_to_sector(const CMat& H, const SectorBasis& basis) {
  const Eigen::Index full = basis.full_dim();
  if (H.rows() != full || H.cols() != full)
    throw std::invalid_argument("project_to_sector: dimension mismatch with sector basis");
  const double tol = 1e-10 * std::max(1.0, max_abs(H));
  const int L = basis.L;

  if (basis.kind == SectorKind::ParityEven || basis.kind == SectorKind::ParityOdd) {
    // [H, R] = 0 <=> H(a, R(b)) == H(R(a), b) for all a, b
    for (Eigen::Index a = 0; a < full; ++a) {
      const Eigen::Index ra = reflect_bits(static_cast<std::uint32_t>(a), L);
      for (Eigen::Index b = 0; b < full; ++b) {
        const Eigen::Index rb = reflect_bits(static_cast<std::uint32_t>(b), L);
        if (std::abs(H(a, rb) - H(ra, b)) > tol)
          throw symmetry_error("project_to_sector: H does not commute with reflection");
      }
    }
  } else if (basis.kind == SectorKind::Magnetization) {
    // [H, M_z] = 0 <=> no matrix elements between different popcounts
    for (Eigen::Index a = 0; a < full; ++a)
      for (Eigen::Index b = 0; b < full; ++b)
        if (std::popcount(static_cast<std::uint32_t>(a)) !=
                std::popcount(static_cast<std::uint32_t>(b)) &&
            std::abs(H(a, b)) > tol)
          throw symmetry_error("project_to_sector: H does not conserve total magnetization");
  }

  CMat out = CMat::Zero(basis.dim(), basis.dim());
  for (Eigen::Index j = 0; j < basis.dim(); ++j)
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
      cxd acc = 0.0;
      const auto& ci = basis.columns[i];
      const auto& cj = basis.columns[j];
      for (int a = 0; a < ci.nnz; ++a)
        for (int b = 0; b < cj.nnz; ++b)
          acc += ci.coeff[a] * cj.coeff[b] * H(ci.state[a], cj.state[b]);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace chaoslab
