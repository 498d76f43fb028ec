#include "mirror/single_particle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace mirror;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double unitarity_defect(const ComplexMatrix<double>& u) {
  return (u * u.adjoint() - ComplexMatrix<double>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(NumericEigensystem, ClosedFormSmallChains) {
  const auto k1 = numeric_eigensystem(krawtchouk_chain(1));
  EXPECT_NEAR(k1.energies[0], -1, 1e-14);
  EXPECT_NEAR(k1.energies[1], 1, 1e-14);

  const auto k2 = numeric_eigensystem(krawtchouk_chain(2));
  EXPECT_NEAR(k2.energies[0], -2, 1e-14);
  EXPECT_NEAR(k2.energies[1], 0, 1e-14);
  EXPECT_NEAR(k2.energies[2], 2, 1e-14);
  // E = -2: (1, -sqrt2, 1)/2, first component positive
  EXPECT_NEAR(k2.vectors(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(k2.vectors(0, 1), -std::sqrt(0.5), 1e-14);

  const auto h2 = numeric_eigensystem(hahn_chain(2, 0, 1));
  EXPECT_NEAR(h2.energies[0], 0, 1e-13);
  EXPECT_NEAR(h2.energies[1], 3, 1e-13);
  EXPECT_NEAR(h2.energies[2], 8, 1e-13);
}

TEST(NumericEigensystem, OrthonormalAndEigen) {
  for (int n = 1; n <= 20; ++n) {
    for (const auto& spec : {krawtchouk_chain(n), hahn_chain(n, 1, 3)}) {
      const auto es = numeric_eigensystem(spec);
      const auto m = single_particle_matrix(spec);
      EXPECT_LT((es.vectors * es.vectors.transpose() - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(),
                1e-10);
      for (int k = 0; k <= n; ++k) {
        const Eigen::VectorXd v = es.vectors.row(k).transpose();
        EXPECT_LT((m.dense() * v - es.energies[k] * v).cwiseAbs().maxCoeff(), 1e-8 * m.max_abs());
      }
      for (int k = 1; k <= n; ++k) EXPECT_LE(es.energies[k - 1], es.energies[k]);
    }
  }
}

TEST(AnalyticChainEigensystem, KrawtchoukSpectrumIsTwoKMinusN) {
  // The closed-form eigenfunctions of J_l = sqrt((l+1)(N-l)) carry N - 2k,
  // not -k; energies here are Rayleigh quotients.
  for (int n = 1; n <= 20; ++n) {
    const auto es = analytic_chain_eigensystem(krawtchouk_chain(n));
    for (int k = 0; k <= n; ++k) EXPECT_NEAR(es.energies[k], 2 * k - n, 1e-9);
  }
}

TEST(AnalyticChainEigensystem, HahnEigenEquationWithStaggering) {
  for (int n = 1; n <= 20; ++n) {
    for (auto [p, q] : {std::pair{0, 1}, {1, 1}, {0, 2}, {1, 3}}) {
      const auto spec = hahn_chain(n, p, q);
      const auto m = single_particle_matrix(spec);
      const double alpha = (2.0 * p + 1) / (2.0 * q);
      const auto es = analytic_chain_eigensystem(spec);
      for (int k = 0; k <= n; ++k) {
        EXPECT_DOUBLE_EQ(es.energies[k], k * (k + 2 * alpha + 1));
        const Eigen::VectorXd v = es.vectors.row(k).transpose();
        EXPECT_LT((m.dense() * v - es.energies[k] * v).cwiseAbs().maxCoeff(), 1e-8 * m.max_abs());
      }
    }
  }
}

TEST(AnalyticChainEigensystem, AgreesWithNumeric) {
  for (int n = 1; n <= 20; ++n) {
    std::vector<ChainSpecd> chains{krawtchouk_chain(n)};
    for (auto [p, q] : {std::pair{0, 1}, {1, 1}, {0, 2}, {1, 3}}) chains.push_back(hahn_chain(n, p, q));
    for (const auto& spec : chains) {
      const auto agreement = compare_eigensystems(analytic_chain_eigensystem(spec), numeric_eigensystem(spec));
      EXPECT_LT(agreement.value_error, 1e-8) << family_name(spec.family) << n;
      EXPECT_LT(agreement.vector_error, 1e-8) << family_name(spec.family) << n;
    }
  }
}

TEST(Propagator, IdentityAtZero) {
  const auto es = numeric_eigensystem(hahn_chain(4, 0, 1));
  const auto u = propagator(es, 0.0);
  EXPECT_LT((u.entries - ComplexMatrix<double>::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Propagator, KrawtchoukTwoSiteQuarterPeriod) {
  const auto u = propagator(numeric_eigensystem(krawtchouk_chain(1)), kPi / 2).entries;
  ComplexMatrix<double> expected(2, 2);
  expected << 0, cd(0, -1), cd(0, -1), 0;
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Propagator, GroupPropertyAndUnitarity) {
  for (const auto& spec : {krawtchouk_chain(9), hahn_chain(7, 1, 3)}) {
    const auto es = numeric_eigensystem(spec);
    for (double t : {0.3, 1.7, 11.0}) {
      const auto u = propagator(es, t).entries;
      const auto v = propagator(es, -t).entries;
      EXPECT_LT((u * v - ComplexMatrix<double>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(unitarity_defect(u), 1e-10);
    }
  }
  EXPECT_THROW(propagator(numeric_eigensystem(krawtchouk_chain(2)), std::nan("")), std::invalid_argument);
}

TEST(TransferFidelity, KnownPoints) {
  EXPECT_NEAR(transfer_fidelity(krawtchouk_chain(1), kPi / 2), 1.0, 1e-14);
  EXPECT_NEAR(transfer_fidelity(hahn_chain(4, 0, 1), kPi), 1.0, 1e-9);
  for (const auto& spec : {krawtchouk_chain(5), hahn_chain(3, 0, 1)})
    EXPECT_NEAR(transfer_fidelity(spec, 0.0), 0.0, 1e-14);
  // expm oracle, Krawtchouk N = 2, t = 0.7
  EXPECT_NEAR(transfer_fidelity(krawtchouk_chain(2), 0.7), 0.41501642854987952, 1e-14);
}

TEST(FindMirrorTime, KrawtchoukQuarterPeriod) {
  const auto report = find_mirror_time(krawtchouk_chain(2), 4.0, 10000);
  EXPECT_TRUE(report.found);
  EXPECT_NEAR(report.mirror_time, kPi / 2, 1e-8);
  EXPECT_LE(report.residual, 1e-8);
  EXPECT_NEAR(std::abs(report.global_phase), 1.0, 1e-12);
}

TEST(FindMirrorTime, HahnPeriodQPi) {
  const auto report = find_mirror_time(hahn_chain(3, 0, 1), 4.0, 10000);
  EXPECT_TRUE(report.found);
  EXPECT_NEAR(report.mirror_time, kPi, 1e-8);

  const auto q2 = find_mirror_time(hahn_chain(4, 0, 2), 7.0, 5000);
  EXPECT_TRUE(q2.found);
  EXPECT_NEAR(q2.mirror_time, 2 * kPi, 1e-8);
}

TEST(FindMirrorTime, IncommensurateChainNotFound) {
  Eigen::VectorXd j(2);
  j << 1, 2;
  const auto report = find_mirror_time(custom_chain<double>(j, Eigen::VectorXd::Zero(3)), 20.0, 10000);
  EXPECT_FALSE(report.found);
  EXPECT_GT(report.residual, 1e-3);
}

TEST(FindMirrorTime, RejectsBadArguments) {
  const auto spec = krawtchouk_chain(2);
  EXPECT_THROW(find_mirror_time(spec, 0.0, 1000), std::invalid_argument);
  EXPECT_THROW(find_mirror_time(spec, 1.0, 99), std::invalid_argument);
}

TEST(MirrorProperties, FidelityAndDoublePeriod) {
  for (int n = 1; n <= 12; ++n) {
    const auto es = numeric_eigensystem(krawtchouk_chain(n));
    const auto report = find_mirror_time(es, 4.0, 2000);
    ASSERT_TRUE(report.found) << n;
    EXPECT_NEAR(report.mirror_time, kPi / 2, 1e-8);
    EXPECT_NEAR(transfer_fidelity(es, report.mirror_time), 1.0, 1e-9);

    const auto u2 = propagator(es, 2 * report.mirror_time).entries;
    const cd scalar = u2(0, 0);
    EXPECT_LT((u2 - scalar * ComplexMatrix<double>::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 1e-8);
  }
}
