#ifndef MIRROR_SINGLE_PARTICLE_HPP
#define MIRROR_SINGLE_PARTICLE_HPP

#include "mirror/chain_models.hpp"
#include "mirror/polynomials.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mirror {

enum class EigenSource { Analytic, Numeric };

/// Sorted single-particle spectrum; vectors.row(k) belongs to energies[k].
template <typename Scalar>
struct Eigensystem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector energies;
  Matrix vectors;
  EigenSource source = EigenSource::Numeric;

  Eigen::Index size() const { return energies.size(); }
};

using Eigensystemd = Eigensystem<double>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct PropagatorMatrix {
  ComplexMatrix<Scalar> entries;
  Scalar time{};
};

/// Best mirror alignment of U(t) with the antidiagonal permutation.
template <typename Scalar>
struct MirrorReport {
  Scalar mirror_time{};
  std::complex<Scalar> global_phase{1};
  Scalar residual{};
  bool found = false;
};

namespace detail {

template <typename Scalar>
void sort_ascending(Eigensystem<Scalar>& es) {
  std::vector<Eigen::Index> order(es.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return es.energies[a] < es.energies[b]; });
  Eigensystem<Scalar> sorted{es.energies, es.vectors, es.source};
  for (Eigen::Index k = 0; k < es.size(); ++k) {
    sorted.energies[k] = es.energies[order[k]];
    sorted.vectors.row(k) = es.vectors.row(order[k]);
  }
  es = std::move(sorted);
}

}  // namespace detail

/// Implicit-shift symmetric QR on the tridiagonal matrix (Eigen).
template <typename Scalar>
Eigensystem<Scalar> numeric_eigensystem(const SymmetricTridiagonal<Scalar>& m) {
  using Matrix = typename Eigensystem<Scalar>::Matrix;
  if (m.size() == 0 || m.off_diagonal.size() != m.size() - 1)
    throw std::invalid_argument("numeric_eigensystem: malformed tridiagonal matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(m.diagonal, m.off_diagonal, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("numeric_eigensystem: QR iteration failed");
  Eigensystem<Scalar> es{solver.eigenvalues(), solver.eigenvectors().transpose(), EigenSource::Numeric};
  normalize_row_signs(es.vectors);
  return es;
}

template <typename Scalar>
Eigensystem<Scalar> numeric_eigensystem(const ChainSpec<Scalar>& spec) {
  return numeric_eigensystem(single_particle_matrix(spec));
}

/// Eigenvectors of the chain matrix built from the closed-form table.
///
/// The Hahn table diagonalises the matrix with negated couplings; the
/// staggering (-1)^l maps it onto the chain matrix and leaves the spectrum
/// k(k+2a+1) unchanged. Krawtchouk energies are taken as Rayleigh quotients.
template <typename Scalar>
Eigensystem<Scalar> analytic_chain_eigensystem(const ChainSpec<Scalar>& spec,
                                               const EigenfunctionTable<Scalar>& table) {
  const int n = spec.last_site();
  if (table.last_site() != n) throw std::invalid_argument("analytic_chain_eigensystem: size mismatch");
  Eigensystem<Scalar> es{typename Eigensystem<Scalar>::Vector(n + 1), table.values, EigenSource::Analytic};

  if (const auto* hahn = std::get_if<Hahn>(&spec.family)) {
    const Scalar alpha = hahn->template alpha<Scalar>();
    for (int l = 1; l <= n; l += 2) es.vectors.col(l) *= Scalar(-1);
    for (int k = 0; k <= n; ++k) es.energies[k] = Scalar(k) * (Scalar(k) + 2 * alpha + 1);
  } else if (std::holds_alternative<Krawtchouk>(spec.family)) {
    const auto m = single_particle_matrix(spec).dense();
    for (int k = 0; k <= n; ++k) {
      const auto v = es.vectors.row(k).transpose();
      es.energies[k] = v.dot(m * v) / v.squaredNorm();
    }
  } else {
    throw UnsupportedFamily("analytic_chain_eigensystem: no closed form for custom chains");
  }
  normalize_row_signs(es.vectors);
  detail::sort_ascending(es);
  return es;
}

template <typename Scalar>
Eigensystem<Scalar> analytic_chain_eigensystem(const ChainSpec<Scalar>& spec) {
  return analytic_chain_eigensystem(spec, analytic_eigensystem(spec));
}

/// Worst eigenvalue and sign-aligned eigenvector (inf-norm) differences,
/// pairing each row of `a` with the row of `b` of largest overlap.
template <typename Scalar>
struct EigenAgreement {
  Scalar value_error{};
  Scalar vector_error{};
};

template <typename Scalar>
EigenAgreement<Scalar> compare_eigensystems(const Eigensystem<Scalar>& a, const Eigensystem<Scalar>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_eigensystems: size mismatch");
  EigenAgreement<Scalar> out;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    Eigen::Index best = 0;
    (b.vectors * a.vectors.row(k).transpose()).cwiseAbs().maxCoeff(&best);
    const Scalar sign = a.vectors.row(k).dot(b.vectors.row(best)) < 0 ? Scalar(-1) : Scalar(1);
    out.value_error = std::max(out.value_error, std::abs(a.energies[k] - b.energies[best]));
    out.vector_error =
        std::max(out.vector_error, (a.vectors.row(k) - sign * b.vectors.row(best)).cwiseAbs().maxCoeff());
  }
  return out;
}

/// U(t) = sum_k exp(-i E_k t) |phi_k><phi_k|.
template <typename Scalar>
PropagatorMatrix<Scalar> propagator(const Eigensystem<Scalar>& es, Scalar t) {
  using Complex = std::complex<Scalar>;
  if (!std::isfinite(t)) throw std::invalid_argument("propagator: time must be finite");
  const ComplexMatrix<Scalar> v = es.vectors.template cast<Complex>();
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> phases(es.size());
  for (Eigen::Index k = 0; k < es.size(); ++k) phases[k] = std::polar(Scalar(1), -es.energies[k] * t);
  return {v.transpose() * phases.asDiagonal() * v, t};
}

/// |<N| U(t) |0>|, the end-to-end transfer amplitude.
template <typename Scalar>
Scalar transfer_fidelity(const Eigensystem<Scalar>& es, Scalar t) {
  const Eigen::Index last = es.size() - 1;
  std::complex<Scalar> amp{};
  for (Eigen::Index k = 0; k <= last; ++k)
    amp += es.vectors(k, last) * es.vectors(k, 0) * std::polar(Scalar(1), -es.energies[k] * t);
  return std::abs(amp);
}

template <typename Scalar>
Scalar transfer_fidelity(const ChainSpec<Scalar>& spec, Scalar t) {
  return transfer_fidelity(numeric_eigensystem(spec), t);
}

/// Distance of U from phase * antidiagonal, phase read off the largest
/// antidiagonal entry.
template <typename Scalar>
MirrorReport<Scalar> mirror_residual(const ComplexMatrix<Scalar>& u, Scalar t) {
  const Eigen::Index n = u.rows();
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(u(i, n - 1 - i)) > std::abs(u(pivot, n - 1 - pivot))) pivot = i;
  const auto corner = u(pivot, n - 1 - pivot);
  const std::complex<Scalar> phase =
      std::abs(corner) > 0 ? corner / std::abs(corner) : std::complex<Scalar>(1);

  Scalar residual(0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto target = i + j == n - 1 ? phase : std::complex<Scalar>(0);
      residual = std::max(residual, std::abs(u(i, j) - target));
    }
  return {t, phase, residual, false};
}

template <typename Scalar>
MirrorReport<Scalar> mirror_residual(const Eigensystem<Scalar>& es, Scalar t) {
  return mirror_residual(propagator(es, t).entries, t);
}

inline constexpr double kMirrorTolerance = 1e-8;

/// Scan residual(t) on a uniform grid over (0, t_max], refine each grid-local
/// minimum by golden-section search within +-2 steps, and return the earliest
/// refined time with residual <= 1e-8. Otherwise the best point found, with
/// found = false.
template <typename Scalar>
MirrorReport<Scalar> find_mirror_time(const Eigensystem<Scalar>& es, Scalar t_max, int grid = 10000) {
  if (!(t_max > 0) || !std::isfinite(t_max)) throw std::invalid_argument("find_mirror_time: t_max must be positive");
  if (grid < 100) throw std::invalid_argument("find_mirror_time: grid must be >= 100");

  const Scalar step = t_max / Scalar(grid);
  std::vector<Scalar> coarse(grid + 1);
  for (int i = 0; i <= grid; ++i) coarse[i] = mirror_residual(es, step * Scalar(i)).residual;

  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  auto refine = [&](int i) {
    Scalar a = std::max(Scalar(0), step * Scalar(i - 2));
    Scalar b = std::min(t_max, step * Scalar(i + 2));
    Scalar c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    Scalar fc = mirror_residual(es, c).residual, fd = mirror_residual(es, d).residual;
    for (int it = 0; it < 200 && b - a > std::numeric_limits<Scalar>::epsilon() * std::max(b, Scalar(1)); ++it) {
      if (fc < fd) {
        b = d, d = c, fd = fc;
        c = b - inv_phi * (b - a);
        fc = mirror_residual(es, c).residual;
      } else {
        a = c, c = d, fc = fd;
        d = a + inv_phi * (b - a);
        fd = mirror_residual(es, d).residual;
      }
    }
    auto best = mirror_residual(es, (a + b) / 2);
    const auto at_grid = mirror_residual(es, step * Scalar(i));
    return at_grid.residual < best.residual ? at_grid : best;
  };

  MirrorReport<Scalar> best{t_max, std::complex<Scalar>(1), std::numeric_limits<Scalar>::infinity(), false};
  for (int i = 1; i <= grid; ++i) {
    const bool left = coarse[i] <= coarse[i - 1];
    const bool right = i == grid || coarse[i] <= coarse[i + 1];
    if (!left || !right) continue;
    auto candidate = refine(i);
    if (candidate.residual <= Scalar(kMirrorTolerance)) {
      candidate.found = true;
      return candidate;
    }
    if (candidate.residual < best.residual) best = candidate;
  }
  return best;
}

template <typename Scalar>
MirrorReport<Scalar> find_mirror_time(const ChainSpec<Scalar>& spec, Scalar t_max, int grid = 10000) {
  return find_mirror_time(numeric_eigensystem(spec), t_max, grid);
}

}  // namespace mirror

#endif  // MIRROR_SINGLE_PARTICLE_HPP
