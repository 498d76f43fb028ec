#ifndef MIRROR_CHAIN_MODELS_HPP
#define MIRROR_CHAIN_MODELS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace mirror {

struct Krawtchouk {};

/// Hahn family with alpha = (2p+1)/(2q).
struct Hahn {
  int p = 0;
  int q = 1;

  template <typename Scalar = double>
  Scalar alpha() const {
    return Scalar(2 * p + 1) / Scalar(2 * q);
  }
};

struct Custom {};

using Family = std::variant<Krawtchouk, Hahn, Custom>;

inline std::string family_name(const Family& family) {
  if (std::holds_alternative<Krawtchouk>(family)) return "krawtchouk";
  if (std::holds_alternative<Hahn>(family)) return "hahn";
  return "custom";
}

/// Nearest-neighbour XY chain on n_sites = N+1 qubits.
///
/// couplings[l] joins sites l and l+1, fields[l] is the Zeeman energy of site l.
/// predicted_period is only set when the family carries a closed-form claim.
template <typename Scalar>
struct ChainSpec {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector couplings;
  Vector fields;
  Family family = Custom{};
  std::optional<Scalar> predicted_period;

  Eigen::Index n_sites() const { return fields.size(); }
  /// Largest site index N.
  int last_site() const { return static_cast<int>(fields.size()) - 1; }
};

using ChainSpecd = ChainSpec<double>;

/// Real symmetric tridiagonal matrix: the single-excitation block of the chain.
template <typename Scalar>
struct SymmetricTridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector diagonal;
  Vector off_diagonal;

  Eigen::Index size() const { return diagonal.size(); }

  Matrix dense() const {
    const Eigen::Index n = size();
    Matrix m = Matrix::Zero(n, n);
    m.diagonal() = diagonal;
    if (n > 1) {
      m.diagonal(1) = off_diagonal;
      m.diagonal(-1) = off_diagonal;
    }
    return m;
  }

  /// Largest absolute entry.
  Scalar max_abs() const {
    Scalar r = diagonal.cwiseAbs().maxCoeff();
    if (off_diagonal.size() > 0) r = std::max(r, off_diagonal.cwiseAbs().maxCoeff());
    return r;
  }
};

using SymmetricTridiagonald = SymmetricTridiagonal<double>;

template <typename Scalar>
bool is_mirror_symmetric(const ChainSpec<Scalar>& spec) {
  const auto& j = spec.couplings;
  const auto& h = spec.fields;
  for (Eigen::Index l = 0; l < j.size(); ++l)
    if (j[l] != j[j.size() - 1 - l]) return false;
  for (Eigen::Index l = 0; l < h.size(); ++l)
    if (h[l] != h[h.size() - 1 - l]) return false;
  return true;
}

/// J_l = sqrt((l+1)(N-l)), zero fields. No period is predicted here: the
/// mirror time of this normalisation is found numerically.
template <typename Scalar = double>
ChainSpec<Scalar> krawtchouk_chain(int n) {
  if (n < 1) throw std::invalid_argument("krawtchouk_chain: N must be >= 1");
  ChainSpec<Scalar> spec;
  spec.couplings.resize(n);
  for (int l = 0; l < n; ++l) {
    // Product is symmetric under l -> N-1-l, so mirror symmetry is exact.
    spec.couplings[l] = std::sqrt(Scalar((l + 1) * (n - l)));
  }
  spec.fields = ChainSpec<Scalar>::Vector::Zero(n + 1);
  spec.family = Krawtchouk{};
  return spec;
}

template <typename Scalar = double>
ChainSpec<Scalar> hahn_chain(int n, int p, int q) {
  if (n < 1) throw std::invalid_argument("hahn_chain: N must be >= 1");
  if (q == 0) throw std::invalid_argument("hahn_chain: q must be nonzero");
  const Hahn family{p, q};
  const Scalar alpha = family.alpha<Scalar>();
  // alpha + l + 1 and alpha + N - l are smallest at the chain ends.
  if (!(2 * alpha + 1 > 0))
    throw std::invalid_argument("hahn_chain: alpha = (2p+1)/(2q) must exceed -1/2");

  ChainSpec<Scalar> spec;
  spec.couplings.resize(n);
  spec.fields.resize(n + 1);
  const Scalar big_n = Scalar(n);
  for (int l = 0; l < n; ++l) {
    // Pair the factors so the product is bitwise symmetric under l -> N-1-l.
    const Scalar a = Scalar((l + 1) * (n - l));
    const Scalar b = (alpha + Scalar(n - l)) * (alpha + Scalar(l + 1));
    spec.couplings[l] = std::sqrt(a * b);
  }
  for (int l = 0; l <= n; ++l) {
    const Scalar x = Scalar(l) - big_n / 2;
    spec.fields[l] = big_n * big_n / 2 + (alpha + 1) * big_n - 2 * x * x;
  }
  spec.family = family;
  spec.predicted_period = Scalar(std::abs(q)) * std::numbers::pi_v<Scalar>;
  return spec;
}

template <typename Scalar = double>
ChainSpec<Scalar> custom_chain(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& couplings,
                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& fields) {
  if (couplings.size() == 0) throw std::invalid_argument("custom_chain: need at least one coupling");
  if (fields.size() != couplings.size() + 1)
    throw std::invalid_argument("custom_chain: fields must have one more entry than couplings");
  if (!couplings.allFinite() || !fields.allFinite())
    throw std::invalid_argument("custom_chain: non-finite entry");
  ChainSpec<Scalar> spec;
  spec.couplings = couplings;
  spec.fields = fields;
  spec.family = Custom{};
  return spec;
}

template <typename Scalar>
SymmetricTridiagonal<Scalar> single_particle_matrix(const ChainSpec<Scalar>& spec) {
  return {spec.fields, spec.couplings};
}

}  // namespace mirror

#endif  // MIRROR_CHAIN_MODELS_HPP
