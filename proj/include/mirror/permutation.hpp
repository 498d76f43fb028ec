#ifndef MIRROR_PERMUTATION_HPP
#define MIRROR_PERMUTATION_HPP

#include "mirror/chain_models.hpp"
#include "mirror/many_body.hpp"
#include "mirror/single_particle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace mirror {

inline constexpr int kMaxSegmentSites = 10;
inline constexpr int kMaxSimulatedPlanSites = 8;

/// mapping[i] is the destination site of the qubit that starts on site i.
class SitePermutation {
 public:
  explicit SitePermutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (int d : mapping_) {
      if (d < 0 || d >= static_cast<int>(mapping_.size()) || seen[d])
        throw std::invalid_argument("SitePermutation: mapping is not a bijection");
      seen[d] = true;
    }
  }

  /// From the final layout: arrangement[pos] is the qubit that ends on site pos.
  static SitePermutation from_arrangement(const std::vector<int>& arrangement) {
    SitePermutation check(arrangement);
    std::vector<int> mapping(arrangement.size());
    for (std::size_t pos = 0; pos < arrangement.size(); ++pos) mapping[arrangement[pos]] = static_cast<int>(pos);
    return SitePermutation(std::move(mapping));
  }

  static SitePermutation identity(int n_sites) {
    std::vector<int> m(n_sites);
    std::iota(m.begin(), m.end(), 0);
    return SitePermutation(std::move(m));
  }

  int n_sites() const { return static_cast<int>(mapping_.size()); }
  const std::vector<int>& mapping() const { return mapping_; }

  std::vector<int> arrangement() const {
    std::vector<int> arr(mapping_.size());
    for (std::size_t q = 0; q < mapping_.size(); ++q) arr[mapping_[q]] = static_cast<int>(q);
    return arr;
  }

  /// Move every bit of b from site i to site mapping[i].
  BitString apply(BitString b) const {
    BitString out = 0;
    for (std::size_t q = 0; q < mapping_.size(); ++q)
      if (b >> q & 1u) out |= BitString{1} << mapping_[q];
    return out;
  }

  friend bool operator==(const SitePermutation&, const SitePermutation&) = default;

 private:
  std::vector<int> mapping_;
};

/// Ordered substring reversals; each step reverses sites start..end inclusive.
struct ReversalPlan {
  int n_sites = 0;
  std::vector<std::pair<int, int>> steps;
};

/// Compose the plan's reversals on the identity layout (index arithmetic only).
inline SitePermutation compose_plan(const ReversalPlan& plan) {
  std::vector<int> arrangement(plan.n_sites);
  std::iota(arrangement.begin(), arrangement.end(), 0);
  for (const auto& [start, end] : plan.steps) {
    if (start < 0 || end >= plan.n_sites || start >= end)
      throw std::invalid_argument("compose_plan: segment outside the register");
    std::reverse(arrangement.begin() + start, arrangement.begin() + end + 1);
  }
  return SitePermutation::from_arrangement(arrangement);
}

/// Selection by reversal: for each position in turn, reverse the segment that
/// brings the required qubit into place. At most N steps.
inline ReversalPlan plan_reversals(const SitePermutation& target) {
  const std::vector<int> wanted = target.arrangement();
  std::vector<int> current(wanted.size());
  std::iota(current.begin(), current.end(), 0);
  ReversalPlan plan{target.n_sites(), {}};
  for (int i = 0; i + 1 < target.n_sites(); ++i) {
    const auto it = std::find(current.begin() + i, current.end(), wanted[i]);
    const int j = static_cast<int>(it - current.begin());
    if (j > i) {
      plan.steps.emplace_back(i, j);
      std::reverse(current.begin() + i, current.begin() + j + 1);
    }
  }
  return plan;
}

using SegmentFamily = std::variant<Krawtchouk, Hahn>;

template <typename Scalar>
struct SegmentMirror {
  ComplexMatrix<Scalar> unitary;
  Scalar time{};
};

/// Register chain with the family's couplings on bonds inside start..end and
/// everything outside switched off (zero couplings, zero fields).
template <typename Scalar = double>
ChainSpec<Scalar> segment_chain(int n_sites, int start, int end, const SegmentFamily& family) {
  if (n_sites < 2 || start < 0 || end >= n_sites || start >= end)
    throw std::invalid_argument("segment_chain: invalid segment");
  const int length = end - start;
  const ChainSpec<Scalar> local = std::holds_alternative<Krawtchouk>(family)
                                      ? krawtchouk_chain<Scalar>(length)
                                      : hahn_chain<Scalar>(length, std::get<Hahn>(family).p, std::get<Hahn>(family).q);
  using Vector = typename ChainSpec<Scalar>::Vector;
  Vector couplings = Vector::Zero(n_sites - 1), fields = Vector::Zero(n_sites);
  couplings.segment(start, length) = local.couplings;
  fields.segment(start, length + 1) = local.fields;
  return custom_chain<Scalar>(couplings, fields);
}

/// Certified mirror time of the isolated segment: the predicted period for
/// Hahn, the mirror-time search for Krawtchouk.
template <typename Scalar = double>
Scalar segment_mirror_time(int length, const SegmentFamily& family) {
  if (const auto* hahn = std::get_if<Hahn>(&family)) {
    const auto spec = hahn_chain<Scalar>(length, hahn->p, hahn->q);
    const Scalar t = *spec.predicted_period;
    if (mirror_residual(numeric_eigensystem(spec), t).residual > Scalar(kMirrorTolerance))
      throw std::runtime_error("segment_mirror_time: Hahn segment is not mirror periodic at q*pi");
    return t;
  }
  const auto report = find_mirror_time(krawtchouk_chain<Scalar>(length), Scalar(4), 2000);
  if (!report.found) throw std::runtime_error("segment_mirror_time: no mirror time found");
  return report.mirror_time;
}

template <typename Scalar = double>
SegmentMirror<Scalar> segment_mirror_unitary(int n_sites, int start, int end,
                                             const SegmentFamily& family = Krawtchouk{}) {
  if (n_sites > kMaxSegmentSites) throw std::length_error("segment_mirror_unitary: more than 10 sites");
  const auto spec = segment_chain<Scalar>(n_sites, start, end, family);
  const Scalar t = segment_mirror_time<Scalar>(end - start, family);
  return {full_register_propagator(full_register_hamiltonian(spec), t), t};
}

template <typename Scalar>
struct PlanVerification {
  bool verified = false;
  Scalar min_concentration{};                  // worst |<P b|U|b>| over basis states
  std::vector<std::complex<Scalar>> phases;    // <P b|U|b> for b = 0..2^n-1
  std::vector<Scalar> segment_times;
};

inline constexpr double kConcentrationTolerance = 1e-6;

/// Multiply the segment mirrors in plan order and check that each basis state
/// lands on its site-permuted image.
template <typename Scalar = double>
PlanVerification<Scalar> simulate_plan(const ReversalPlan& plan, const SegmentFamily& family = Krawtchouk{}) {
  if (plan.n_sites > kMaxSimulatedPlanSites) throw std::length_error("simulate_plan: more than 8 sites");
  const SitePermutation target = compose_plan(plan);
  const Eigen::Index dim = Eigen::Index{1} << plan.n_sites;

  PlanVerification<Scalar> out;
  std::map<std::pair<int, int>, SegmentMirror<Scalar>> cache;
  ComplexMatrix<Scalar> composite = ComplexMatrix<Scalar>::Identity(dim, dim);
  for (const auto& step : plan.steps) {
    auto it = cache.find(step);
    if (it == cache.end())
      it = cache.emplace(step, segment_mirror_unitary<Scalar>(plan.n_sites, step.first, step.second, family)).first;
    composite = (it->second.unitary * composite).eval();
    out.segment_times.push_back(it->second.time);
  }

  out.min_concentration = Scalar(1);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto amp = composite(target.apply(BitString(b)), b);
    out.phases.push_back(amp);
    out.min_concentration = std::min(out.min_concentration, std::abs(amp));
  }
  out.verified = out.min_concentration >= Scalar(1 - kConcentrationTolerance);
  return out;
}

}  // namespace mirror

#endif  // MIRROR_PERMUTATION_HPP
