#ifndef MIRROR_POLYNOMIALS_HPP
#define MIRROR_POLYNOMIALS_HPP

#include "mirror/chain_models.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mirror {

class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rising factorial x(x+1)...(x+k-1), with (x)_0 = 1.
template <typename Scalar>
Scalar pochhammer(Scalar x, int k) {
  Scalar r(1);
  for (int i = 0; i < k; ++i) r *= x + Scalar(i);
  return r;
}

/// How a terminating hypergeometric polynomial is evaluated.
enum class Evaluation {
  Series,      ///< term-ratio summation of the hypergeometric series
  Recurrence,  ///< three-term recurrence in the degree k
  Automatic,   ///< series, falling back to the recurrence on cancellation
};

namespace detail {

// Accumulation type for the series: at least long double.
template <typename Scalar>
using Wide = std::conditional_t<(sizeof(Scalar) < sizeof(long double)), long double, Scalar>;

template <typename Scalar>
struct SeriesValue {
  Scalar value;
  Scalar abs_sum;  // sum of |terms|, a bound on the rounding amplification
};

inline void check_indices(int k, int l, int n) {
  if (n < 0 || k < 0 || l < 0 || k > n || l > n)
    throw std::out_of_range("polynomial index outside 0..N");
}

// 2F1(-k, -l; -N | 2). Terms from term_{j+1} = term_j * ratio.
template <typename Scalar>
SeriesValue<Scalar> krawtchouk_series(int k, int l, int n) {
  using W = Wide<Scalar>;
  W term(1), sum(1), abs_sum(1);
  for (int j = 0; j < std::min(k, l); ++j) {
    term *= W(j - k) * W(j - l) / (W(j - n) * W(j + 1)) * W(2);
    sum += term;
    abs_sum += std::abs(term);
  }
  return {Scalar(sum), Scalar(abs_sum)};
}

// 3F2(-k, k+2a+1, -l; a+1, -N | 1).
template <typename Scalar>
SeriesValue<Scalar> hahn_series(int k, int l, Scalar alpha, int n) {
  using W = Wide<Scalar>;
  const W a(alpha);
  W term(1), sum(1), abs_sum(1);
  for (int j = 0; j < std::min(k, l); ++j) {
    term *= W(j - k) * (W(k + j + 1) + 2 * a) * W(j - l) / ((a + W(j + 1)) * W(j - n) * W(j + 1));
    sum += term;
    abs_sum += std::abs(term);
  }
  return {Scalar(sum), Scalar(abs_sum)};
}

// K_0..K_N at fixed site l, p = 1/2:
// (N-k) K_{k+1} = (N-2l) K_k - k K_{k-1}.
template <typename Scalar>
std::vector<Scalar> krawtchouk_recurrence(int l, int n) {
  using W = Wide<Scalar>;
  std::vector<W> out(n + 1);
  out[0] = 1;
  if (n >= 1) out[1] = 1 - W(2 * l) / W(n);
  for (int k = 1; k < n; ++k)
    out[k + 1] = (W(n - 2 * l) * out[k] - W(k) * out[k - 1]) / W(n - k);
  return {out.begin(), out.end()};
}

// Q_0..Q_N at fixed site l, alpha = beta:
// -l Q_k = A_k Q_{k+1} - (A_k + C_k) Q_k + C_k Q_{k-1}.
template <typename Scalar>
std::vector<Scalar> hahn_recurrence(int l, Scalar alpha, int n) {
  using W = Wide<Scalar>;
  const W a(alpha), s = 2 * W(alpha);
  const W x(l);
  std::vector<W> out(n + 1);
  out[0] = 1;
  for (int k = 0; k < n; ++k) {
    const W kk(k);
    const W ak = (kk + s + 1) * (kk + a + 1) * W(n - k) / ((2 * kk + s + 1) * (2 * kk + s + 2));
    const W ck = k == 0 ? W(0) : kk * (kk + s + W(n) + 1) * (kk + a) / ((2 * kk + s) * (2 * kk + s + 1));
    const W prev = k == 0 ? W(0) : out[k - 1];
    out[k + 1] = ((ak + ck - x) * out[k] - ck * prev) / ak;
  }
  return {out.begin(), out.end()};
}

// Series result is kept when its rounding bound is small next to the value.
template <typename Scalar>
bool series_trustworthy(const SeriesValue<Scalar>& s) {
  using W = Wide<Scalar>;
  const W bound = W(s.abs_sum) * std::numeric_limits<W>::epsilon() * 16;
  return bound <= W(1e-13) * std::max<W>(std::abs(W(s.value)), W(1));
}

template <typename Scalar>
Scalar log_binomial(Scalar top, Scalar bottom) {
  using W = Wide<Scalar>;
  return Scalar(std::lgamma(W(top) + 1) - std::lgamma(W(top) - W(bottom) + 1) - std::lgamma(W(bottom) + 1));
}

}  // namespace detail

/// Krawtchouk polynomial K_k(l; 1/2, N).
template <typename Scalar = double>
Scalar krawtchouk_K(int k, int l, int n, Evaluation how = Evaluation::Automatic) {
  detail::check_indices(k, l, n);
  if (how != Evaluation::Recurrence) {
    const auto s = detail::krawtchouk_series<Scalar>(k, l, n);
    if (how == Evaluation::Series || detail::series_trustworthy(s)) return s.value;
  }
  return detail::krawtchouk_recurrence<Scalar>(l, n)[k];
}

/// Hahn polynomial Q_k(l; alpha, alpha, N), site argument entering as -l.
template <typename Scalar = double>
Scalar hahn_Q(int k, int l, Scalar alpha, int n, Evaluation how = Evaluation::Automatic) {
  detail::check_indices(k, l, n);
  if (!(2 * alpha + 1 > 0)) throw std::invalid_argument("hahn_Q: alpha must exceed -1/2");
  if (how != Evaluation::Recurrence) {
    const auto s = detail::hahn_series<Scalar>(k, l, alpha, n);
    if (how == Evaluation::Series || detail::series_trustworthy(s)) return s.value;
  }
  return detail::hahn_recurrence<Scalar>(l, alpha, n)[k];
}

/// Krawtchouk weight 2^-N binomial(N, l).
template <typename Scalar = double>
Scalar krawtchouk_weight(int l, int n) {
  return std::exp(detail::log_binomial<Scalar>(Scalar(n), Scalar(l)) - Scalar(n) * std::log(Scalar(2)));
}

/// Hahn weight binomial(alpha+l, l) binomial(alpha+N-l, N-l), Gamma-function binomials.
template <typename Scalar = double>
Scalar hahn_weight(int l, Scalar alpha, int n) {
  return std::exp(detail::log_binomial<Scalar>(alpha + Scalar(l), Scalar(l)) +
                  detail::log_binomial<Scalar>(alpha + Scalar(n - l), Scalar(n - l)));
}

template <typename Scalar = double>
Scalar krawtchouk_norm(int k, int n) {
  // sqrt((-N)_k / ((-1)^k k!)) == sqrt(binomial(N, k))
  return std::exp(detail::log_binomial<Scalar>(Scalar(n), Scalar(k)) / 2);
}

template <typename Scalar = double>
Scalar hahn_norm(int k, Scalar alpha, int n) {
  using W = detail::Wide<Scalar>;
  const W a(alpha);
  const W kk(k), nn(n);
  // (k+2a+1)_{N+1} = Gamma(k+2a+N+2) / Gamma(k+2a+1)
  const W log_c2 = std::log(2 * kk + 2 * a + 1) + 2 * std::lgamma(nn + 1) -
                   (std::lgamma(kk + 2 * a + nn + 2) - std::lgamma(kk + 2 * a + 1)) -
                   std::lgamma(kk + 1) - std::lgamma(nn - kk + 1);
  return Scalar(std::exp(log_c2 / 2));
}

/// Closed-form eigenfunctions phi_k(l) = c_k sqrt(w(l)) P_k(l), row k.
template <typename Scalar>
struct EigenfunctionTable {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix values;
  Family family;
  std::optional<Scalar> alpha;

  int last_site() const { return static_cast<int>(values.rows()) - 1; }
};

using EigenfunctionTabled = EigenfunctionTable<double>;

/// Flip rows so that the first entry above `floor` in magnitude is positive.
template <typename Derived>
void normalize_row_signs(Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    const Scalar floor = rows.row(k).cwiseAbs().maxCoeff() * Scalar(1e-8);
    for (Eigen::Index l = 0; l < rows.cols(); ++l) {
      if (std::abs(rows(k, l)) > floor) {
        if (rows(k, l) < 0) rows.row(k) *= Scalar(-1);
        break;
      }
    }
  }
}

template <typename Scalar>
EigenfunctionTable<Scalar> analytic_eigensystem(const ChainSpec<Scalar>& spec,
                                                Evaluation how = Evaluation::Automatic) {
  const int n = spec.last_site();
  EigenfunctionTable<Scalar> table{typename EigenfunctionTable<Scalar>::Matrix(n + 1, n + 1), spec.family, std::nullopt};

  if (std::holds_alternative<Krawtchouk>(spec.family)) {
    for (int l = 0; l <= n; ++l) {
      const Scalar root_w = std::sqrt(krawtchouk_weight<Scalar>(l, n));
      for (int k = 0; k <= n; ++k)
        table.values(k, l) = krawtchouk_norm<Scalar>(k, n) * root_w * krawtchouk_K<Scalar>(k, l, n, how);
    }
  } else if (const auto* hahn = std::get_if<Hahn>(&spec.family)) {
    const Scalar alpha = hahn->template alpha<Scalar>();
    table.alpha = alpha;
    for (int l = 0; l <= n; ++l) {
      const Scalar root_w = std::sqrt(hahn_weight<Scalar>(l, alpha, n));
      for (int k = 0; k <= n; ++k)
        table.values(k, l) = hahn_norm<Scalar>(k, alpha, n) * root_w * hahn_Q<Scalar>(k, l, alpha, n, how);
    }
  } else {
    throw UnsupportedFamily("analytic_eigensystem: no closed form for custom chains");
  }
  normalize_row_signs(table.values);
  return table;
}

/// Largest |phi_k(N-l) - (-1)^k phi_k(l)| over the table.
template <typename Scalar>
Scalar reflection_defect(const EigenfunctionTable<Scalar>& table) {
  const auto& v = table.values;
  const Eigen::Index n = v.cols() - 1;
  Scalar worst(0);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const Scalar sign = k % 2 == 0 ? Scalar(1) : Scalar(-1);
    for (Eigen::Index l = 0; l <= n; ++l) worst = std::max(worst, std::abs(v(k, n - l) - sign * v(k, l)));
  }
  return worst;
}

}  // namespace mirror

#endif  // MIRROR_POLYNOMIALS_HPP
