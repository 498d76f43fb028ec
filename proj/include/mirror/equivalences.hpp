#ifndef MIRROR_EQUIVALENCES_HPP
#define MIRROR_EQUIVALENCES_HPP

#include "mirror/chain_models.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mirror {

/// Angular-momentum quantum number stored as twice its value.
struct HalfInteger {
  int twice = 0;

  static constexpr HalfInteger from_twice(int twice) { return HalfInteger{twice}; }
  static constexpr HalfInteger whole(int value) { return HalfInteger{2 * value}; }

  constexpr bool is_half_odd() const { return twice % 2 != 0; }
  template <typename Scalar = double>
  constexpr Scalar value() const {
    return Scalar(twice) / Scalar(2);
  }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return {a.twice - b.twice}; }
};

template <typename Scalar>
struct EquivalenceReport {
  Scalar max_entry_difference{};
  Scalar scale{1};
  Scalar shift{};
  Scalar shift_spread{};
  bool pass = false;
};

inline constexpr double kEquivalenceTolerance = 1e-12;

/// 2 s_x over |m>, m = s, s-1, ..., -s (row i holds m = s - i).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> spin_x_matrix(HalfInteger s) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (s.twice < 0) throw std::invalid_argument("spin_x_matrix: s must be nonnegative");
  const int dim = s.twice + 1;
  const Scalar ss = s.value<Scalar>();
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Scalar m = ss - Scalar(i);
    // R(m) lowers to m-1 (row i+1), L(m) raises to m+1 (row i-1).
    if (i + 1 < dim) h(i + 1, i) = std::sqrt(ss * (ss + 1) - m * (m - 1));
    if (i > 0) h(i - 1, i) = std::sqrt(ss * (ss + 1) - m * (m + 1));
  }
  return h;
}

template <typename Scalar = double>
EquivalenceReport<Scalar> verify_krawtchouk_spin_equivalence(int n) {
  const auto chain = single_particle_matrix(krawtchouk_chain<Scalar>(n)).dense();
  const auto spin = spin_x_matrix<Scalar>(HalfInteger::from_twice(n));
  EquivalenceReport<Scalar> report;
  report.max_entry_difference = (spin - chain).cwiseAbs().maxCoeff();
  report.pass = report.max_entry_difference <= Scalar(kEquivalenceTolerance);
  return report;
}

/// L.S in the M_L + M_S = 0 sector over |M_S>, M_S = S down to -S.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ls_block_matrix(HalfInteger l_qn, HalfInteger s_qn) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (!s_qn.is_half_odd()) throw std::invalid_argument("ls_block_matrix: S must be a half-integer");
  if (!(s_qn < l_qn)) throw std::invalid_argument("ls_block_matrix: requires S < L");
  const int dim = s_qn.twice + 1;
  const Scalar big_l = l_qn.value<Scalar>(), big_s = s_qn.value<Scalar>();
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Scalar ms = big_s - Scalar(i);
    h(i, i) = -ms * ms;
    if (i + 1 < dim)
      h(i + 1, i) = std::sqrt((big_l + ms) * (big_l - ms + 1)) * std::sqrt((big_s + ms) * (big_s - ms + 1)) / 2;
    if (i > 0)
      h(i - 1, i) = std::sqrt((big_l - ms) * (big_l + ms + 1)) * std::sqrt((big_s - ms) * (big_s + ms + 1)) / 2;
  }
  return h;
}

/// Fit L.S = H_hahn / 2 + c I with N = 2S, alpha = L - S (q = 1). The shift
/// is the mean of the diagonal offsets; its spread is reported.
template <typename Scalar = double>
EquivalenceReport<Scalar> verify_hahn_ls_equivalence(HalfInteger l_qn, HalfInteger s_qn) {
  const HalfInteger alpha = l_qn - s_qn;
  if (!alpha.is_half_odd()) throw std::invalid_argument("verify_hahn_ls_equivalence: L - S must be a half-integer");
  const auto ls = ls_block_matrix<Scalar>(l_qn, s_qn);
  // alpha = (2p+1)/2 with q = 1
  const int p = (alpha.twice - 1) / 2;
  const auto hahn = single_particle_matrix(hahn_chain<Scalar>(s_qn.twice, p, 1)).dense();

  EquivalenceReport<Scalar> report;
  report.scale = Scalar(0.5);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> offsets = ls.diagonal() - report.scale * hahn.diagonal();
  report.shift = offsets.mean();
  report.shift_spread = offsets.maxCoeff() - offsets.minCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fitted = report.scale * hahn;
  fitted.diagonal().array() += report.shift;
  report.max_entry_difference = (ls - fitted).cwiseAbs().maxCoeff();
  report.pass = report.max_entry_difference <= Scalar(kEquivalenceTolerance) &&
                report.shift_spread <= Scalar(kEquivalenceTolerance);
  return report;
}

}  // namespace mirror

#endif  // MIRROR_EQUIVALENCES_HPP
