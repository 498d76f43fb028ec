#ifndef MIRROR_MANY_BODY_HPP
#define MIRROR_MANY_BODY_HPP

#include "mirror/chain_models.hpp"
#include "mirror/single_particle.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mirror {

// Register bit strings: site l is bit l, so s_0 is the least significant bit.
using BitString = std::uint32_t;

inline constexpr int kMaxHamiltonianSites = 14;
inline constexpr int kMaxDensePropagatorSites = 12;
inline constexpr int kMaxMirrorCheckSites = 12;

/// Reverse the lowest n_sites bits: site l goes to site n_sites-1-l.
inline BitString reverse_bits(BitString b, int n_sites) {
  BitString r = 0;
  for (int l = 0; l < n_sites; ++l)
    if (b >> l & 1u) r |= BitString{1} << (n_sites - 1 - l);
  return r;
}

/// Occupied sites l_1 < ... < l_M of the M-excitation sector, lexicographic.
struct SectorBasis {
  int n_sites = 0;
  int m = 0;
  std::vector<std::vector<int>> configs;

  std::size_t size() const { return configs.size(); }

  static BitString mask(std::span<const int> sites) {
    BitString b = 0;
    for (int l : sites) b |= BitString{1} << l;
    return b;
  }
  BitString mask(std::size_t i) const { return mask(configs[i]); }
};

/// All binomial(N+1, M) configurations on sites 0..last_site.
inline SectorBasis sector_basis(int last_site, int m) {
  const int n_sites = last_site + 1;
  if (last_site < 0 || m < 0 || m > n_sites) throw std::out_of_range("sector_basis: M outside 0..N+1");
  SectorBasis basis{n_sites, m, {}};
  std::vector<int> current(m);
  for (int i = 0; i < m; ++i) current[i] = i;
  while (true) {
    basis.configs.push_back(current);
    int i = m - 1;
    while (i >= 0 && current[i] == n_sites - m + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < m; ++j) current[j] = current[j - 1] + 1;
  }
  return basis;
}

/// Phi_{k_1..k_M}(l_1..l_M) = det[phi_{k_a}(l_b)] / sqrt(M!).
template <typename Scalar>
Scalar slater_eigenfunction(const Eigensystem<Scalar>& es, std::span<const int> orbitals, std::span<const int> sites) {
  if (orbitals.size() != sites.size()) throw std::invalid_argument("slater_eigenfunction: size mismatch");
  const auto m = static_cast<Eigen::Index>(orbitals.size());
  if (m == 0) return Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(m, m);
  Scalar factorial(1);
  for (Eigen::Index i = 0; i < m; ++i) {
    factorial *= Scalar(i + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (orbitals[i] < 0 || orbitals[i] >= es.size() || sites[j] < 0 || sites[j] >= es.size())
        throw std::out_of_range("slater_eigenfunction: index outside 0..N");
      a(i, j) = es.vectors(orbitals[i], sites[j]);
    }
  }
  return a.determinant() / std::sqrt(factorial);
}

/// Register amplitudes of the Slater eigenstate over an ordered sector basis,
/// rescaled by sqrt(M!) so the vector has unit norm.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> slater_state(const Eigensystem<Scalar>& es, std::span<const int> orbitals,
                                                      const SectorBasis& basis) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> psi(basis.size());
  Scalar scale(1);
  for (int i = 2; i <= basis.m; ++i) scale *= Scalar(i);
  scale = std::sqrt(scale);
  for (std::size_t i = 0; i < basis.size(); ++i)
    psi[i] = scale * slater_eigenfunction(es, orbitals, std::span<const int>(basis.configs[i]));
  return psi;
}

/// <l'|exp(-iHt)|l> = det[U(t)_{l'_a, l_b}] for free fermions, in the
/// lexicographic sector basis.
template <typename Scalar>
ComplexMatrix<Scalar> sector_propagator(const Eigensystem<Scalar>& es, int m, Scalar t) {
  const int last = static_cast<int>(es.size()) - 1;
  const SectorBasis basis = sector_basis(last, m);
  const ComplexMatrix<Scalar> u = propagator(es, t).entries;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix<Scalar> out(dim, dim);
  ComplexMatrix<Scalar> minor(m, m);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto& from = basis.configs[col];
    for (Eigen::Index row = 0; row < dim; ++row) {
      if (m == 0) {
        out(row, col) = 1;
        continue;
      }
      const auto& to = basis.configs[row];
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) minor(a, b) = u(to[a], from[b]);
      out(row, col) = minor.determinant();
    }
  }
  return out;
}

namespace detail {

enum class Pauli { X, Y, Z };

// P_site |b> = factor |b'>, with sigma^z |0> = |0>, sigma^z |1> = -|1>.
template <typename Scalar>
std::pair<BitString, std::complex<Scalar>> apply_pauli(Pauli op, int site, BitString b) {
  const bool one = b >> site & 1u;
  const BitString flipped = b ^ (BitString{1} << site);
  switch (op) {
    case Pauli::X:
      return {flipped, Scalar(1)};
    case Pauli::Y:
      return {flipped, one ? std::complex<Scalar>(0, -1) : std::complex<Scalar>(0, 1)};
    case Pauli::Z:
      return {b, one ? Scalar(-1) : Scalar(1)};
  }
  return {b, Scalar(0)};
}

}  // namespace detail

/// H = 1/2 sum J_l (X_l X_{l+1} + Y_l Y_{l+1}) - 1/2 sum h_l (Z_l - 1),
/// assembled term by term from Pauli actions on the computational basis.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> full_register_hamiltonian(const ChainSpec<Scalar>& spec) {
  using Complex = std::complex<Scalar>;
  using detail::Pauli;
  const int n_sites = static_cast<int>(spec.n_sites());
  if (n_sites > kMaxHamiltonianSites) throw std::length_error("full_register_hamiltonian: more than 14 sites");
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(dim, dim);

  for (BitString b = 0; b < BitString(dim); ++b) {
    for (int l = 0; l + 1 < n_sites; ++l) {
      for (Pauli op : {Pauli::X, Pauli::Y}) {
        const auto [b1, f1] = detail::apply_pauli<Scalar>(op, l, b);
        const auto [b2, f2] = detail::apply_pauli<Scalar>(op, l + 1, b1);
        h(b2, b) += Scalar(0.5) * spec.couplings[l] * f1 * f2;
      }
    }
    for (int l = 0; l < n_sites; ++l) {
      const auto [b1, f1] = detail::apply_pauli<Scalar>(Pauli::Z, l, b);
      h(b1, b) += Scalar(-0.5) * spec.fields[l] * (f1 - Complex(1));
    }
  }
  if (h.imag().cwiseAbs().maxCoeff() != Scalar(0))
    throw std::logic_error("full_register_hamiltonian: XY Hamiltonian acquired imaginary entries");
  return h.real();
}

/// True when every matrix element between different excitation numbers is exactly zero.
template <typename Derived>
bool conserves_excitations(const Eigen::MatrixBase<Derived>& h) {
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (std::popcount(BitString(i)) != std::popcount(BitString(j)) && h(i, j) != 0) return false;
  return true;
}

/// Exact diagonalisation of a register Hamiltonian. When the Hamiltonian
/// conserves the excitation number each sector is diagonalised on its own,
/// with its states in SectorBasis order; otherwise a single dense block.
template <typename Scalar>
class RegisterSpectrum {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Block {
    std::vector<BitString> states;
    Vector energies;
    Matrix vectors;  // columns are eigenvectors over `states`
  };

  explicit RegisterSpectrum(const Matrix& h) : dim_(h.rows()) {
    if (h.rows() != h.cols() || dim_ == 0 || (dim_ & (dim_ - 1)) != 0)
      throw std::invalid_argument("RegisterSpectrum: expected a square 2^n matrix");
    n_sites_ = std::countr_zero(static_cast<std::uint64_t>(dim_));
    block_diagonal_ = conserves_excitations(h);
    if (block_diagonal_) {
      for (int m = 0; m <= n_sites_; ++m) {
        const SectorBasis basis = sector_basis(n_sites_ - 1, m);
        std::vector<BitString> states(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) states[i] = basis.mask(i);
        blocks_.push_back(diagonalise(h, std::move(states)));
      }
    } else {
      std::vector<BitString> states(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) states[i] = BitString(i);
      blocks_.push_back(diagonalise(h, std::move(states)));
    }
  }

  int n_sites() const { return n_sites_; }
  bool block_diagonal() const { return block_diagonal_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// exp(-iHt) restricted to sector m, SectorBasis order.
  ComplexMatrix<Scalar> sector_block(int m, Scalar t) const {
    if (!block_diagonal_) throw std::logic_error("RegisterSpectrum: Hamiltonian does not conserve excitations");
    if (m < 0 || m > n_sites_) throw std::out_of_range("RegisterSpectrum: sector outside 0..N+1");
    return evolve(blocks_[m], t);
  }

  /// Dense exp(-iHt) on the whole register.
  ComplexMatrix<Scalar> propagator(Scalar t) const {
    if (n_sites_ > kMaxDensePropagatorSites)
      throw std::length_error("RegisterSpectrum: dense propagator limited to 12 sites");
    ComplexMatrix<Scalar> u = ComplexMatrix<Scalar>::Zero(dim_, dim_);
    for (const auto& block : blocks_) {
      const auto local = evolve(block, t);
      for (std::size_t j = 0; j < block.states.size(); ++j)
        for (std::size_t i = 0; i < block.states.size(); ++i) u(block.states[i], block.states[j]) = local(i, j);
    }
    return u;
  }

 private:
  static Block diagonalise(const Matrix& h, std::vector<BitString> states) {
    const auto d = static_cast<Eigen::Index>(states.size());
    Matrix local(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) local(i, j) = h(states[i], states[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(local);
    if (solver.info() != Eigen::Success) throw std::runtime_error("RegisterSpectrum: diagonalisation failed");
    return {std::move(states), solver.eigenvalues(), solver.eigenvectors()};
  }

  static ComplexMatrix<Scalar> evolve(const Block& block, Scalar t) {
    using Complex = std::complex<Scalar>;
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> phases(block.energies.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(Scalar(1), -block.energies[k] * t);
    const ComplexMatrix<Scalar> v = block.vectors.template cast<Complex>();
    return v * phases.asDiagonal() * v.transpose();
  }

  Eigen::Index dim_;
  int n_sites_ = 0;
  bool block_diagonal_ = false;
  std::vector<Block> blocks_;
};

/// Dense exp(-iHt) via exact diagonalisation.
template <typename Scalar>
ComplexMatrix<Scalar> full_register_propagator(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& h,
                                               Scalar t) {
  return RegisterSpectrum<Scalar>(h).propagator(t);
}

/// Rows and columns of a register operator belonging to `basis`, in its order.
template <typename Scalar>
ComplexMatrix<Scalar> restrict_to_sector(const ComplexMatrix<Scalar>& u, const SectorBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix<Scalar> out(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) out(i, j) = u(basis.mask(i), basis.mask(j));
  return out;
}

/// Outcome of comparing exp(-iHT)|b> with phase_M |rev(b)> for every b.
template <typename Scalar>
struct MirrorCertificate {
  Scalar time{};
  std::vector<std::complex<Scalar>> per_sector_phase;  // index M = 0..N+1
  Scalar max_deviation{};
  Scalar phase_spread{};  // worst |arg-aligned phase - sector phase| within a sector
  bool phase_uniform_in_sector = false;

  bool passed(Scalar tolerance = Scalar(kMirrorTolerance)) const { return max_deviation <= tolerance; }
};

template <typename Scalar>
MirrorCertificate<Scalar> mirror_check(const RegisterSpectrum<Scalar>& spectrum, Scalar t) {
  const int n_sites = spectrum.n_sites();
  MirrorCertificate<Scalar> cert;
  cert.time = t;
  std::vector<std::size_t> position(std::size_t{1} << n_sites);

  for (int m = 0; m <= n_sites; ++m) {
    const auto& states = spectrum.blocks()[m].states;
    for (std::size_t i = 0; i < states.size(); ++i) position[states[i]] = i;
    const auto v = spectrum.sector_block(m, t);

    std::complex<Scalar> phase(1);
    for (std::size_t col = 0; col < states.size(); ++col) {
      const std::size_t target = position[reverse_bits(states[col], n_sites)];
      const auto amp = v(target, col);
      if (col == 0) phase = std::abs(amp) > 0 ? amp / std::abs(amp) : std::complex<Scalar>(1);
      const auto unit = std::abs(amp) > 0 ? amp / std::abs(amp) : std::complex<Scalar>(0);
      cert.phase_spread = std::max(cert.phase_spread, std::abs(unit - phase));
      cert.max_deviation = std::max(cert.max_deviation, std::abs(amp - phase));
      for (std::size_t row = 0; row < states.size(); ++row)
        if (row != target) cert.max_deviation = std::max(cert.max_deviation, std::abs(v(row, col)));
    }
    cert.per_sector_phase.push_back(phase);
  }
  cert.phase_uniform_in_sector = cert.phase_spread <= Scalar(kMirrorTolerance);
  return cert;
}

/// Full-register check that exp(-iHT) reverses every basis state up to a
/// phase that depends on the excitation number only.
template <typename Scalar>
MirrorCertificate<Scalar> mirror_check(const ChainSpec<Scalar>& spec, Scalar t) {
  if (spec.n_sites() > kMaxMirrorCheckSites) throw std::length_error("mirror_check: more than 12 sites");
  return mirror_check(RegisterSpectrum<Scalar>(full_register_hamiltonian(spec)), t);
}

}  // namespace mirror

#endif  // MIRROR_MANY_BODY_HPP
