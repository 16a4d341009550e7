#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "podrom/pod.hpp"
#include "testing_util.hpp"

using namespace podrom;

namespace {

SimResult case1_sim() {
  SimConfig c;
  c.t_final = 0.5;
  c.nu = 0.01;
  return simulate(c);
}

double truncated_reconstruction_error(const SvdFactors& f, std::size_t i,
                                      const DenseMatrix& a) {
  const PodBasis b = truncate(f, i);
  DenseMatrix scaled = b.phi;
  for (std::size_t r = 0; r < scaled.rows(); ++r) {
    for (std::size_t k = 0; k < i; ++k) scaled(r, k) *= b.sigma[k];
  }
  return testutil::frobenius_diff(a, matmul(scaled, b.psi_t));
}

}  // namespace

TEST_CASE("energy_spectrum conventions") {
  const auto one = energy_spectrum({1.0}, EnergyConvention::SigmaSquared);
  CHECK(one.r == std::vector<double>{1.0});
  CHECK(one.cumulative == std::vector<double>{1.0});
  const auto one_lin = energy_spectrum({1.0}, EnergyConvention::SigmaLinear);
  CHECK(one_lin.r == std::vector<double>{1.0});

  // Hand-computed: [2, 1] -> squared [0.8, 0.2], linear [2/3, 1/3].
  const auto sq = energy_spectrum({2.0, 1.0}, EnergyConvention::SigmaSquared);
  CHECK(sq.r[0] == Catch::Approx(0.8).epsilon(1e-14));
  CHECK(sq.r[1] == Catch::Approx(0.2).epsilon(1e-14));
  CHECK(sq.cumulative[1] == Catch::Approx(1.0).epsilon(1e-14));
  const auto lin = energy_spectrum({2.0, 1.0}, EnergyConvention::SigmaLinear);
  CHECK(lin.r[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(lin.r[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("energy_spectrum preconditions") {
  CHECK_THROWS_AS(energy_spectrum({3.0, 4.0}, EnergyConvention::SigmaSquared),
                  SpectrumError);
  CHECK_THROWS_AS(energy_spectrum({0.0, 0.0}, EnergyConvention::SigmaSquared),
                  SpectrumError);
  CHECK_THROWS_AS(energy_spectrum({1.0, -0.5}, EnergyConvention::SigmaLinear),
                  SpectrumError);
  CHECK_THROWS_AS(energy_spectrum({}, EnergyConvention::SigmaSquared),
                  SpectrumError);
}

TEST_CASE("energy shares sum to one") {
  auto gen = testutil::rng(31);
  std::vector<double> sigma(12);
  double v = 10.0;
  for (double& s : sigma) {
    v *= 0.6;
    s = v;
  }
  for (auto conv : {EnergyConvention::SigmaSquared, EnergyConvention::SigmaLinear}) {
    const auto spec = energy_spectrum(sigma, conv);
    double sum = 0.0;
    for (double r : spec.r) {
      CHECK(r >= 0.0);
      sum += r;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(std::abs(spec.cumulative.back() - 1.0) < 1e-12);
    for (std::size_t k = 1; k < spec.cumulative.size(); ++k) {
      CHECK(spec.cumulative[k] >= spec.cumulative[k - 1]);
    }
  }
  (void)gen;
}

TEST_CASE("truncate keeps the leading factors verbatim") {
  auto gen = testutil::rng(37);
  const DenseMatrix a = testutil::random_matrix(8, 12, gen);
  const SvdFactors f = svd(a);
  const PodBasis b = truncate(f, 3);
  CHECK(b.mode_count == 3);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t k = 0; k < 3; ++k) CHECK(b.phi(r, k) == f.phi(r, k));
  }
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(b.sigma[k] == f.sigma[k]);
    for (std::size_t j = 0; j < 12; ++j) CHECK(b.psi_t(k, j) == f.psi_t(k, j));
  }
  const auto spec = energy_spectrum(f.sigma, EnergyConvention::SigmaSquared);
  CHECK(b.captured_energy == spec.cumulative[2]);
  CHECK(orthonormality_deviation(b.phi) < 1e-10);

  // Full truncation reconstructs the input.
  CHECK(truncated_reconstruction_error(f, 8, a) < 1e-10 * frobenius_norm(a) + 1e-12);

  CHECK_THROWS_AS(truncate(f, 0), TruncationError);
  CHECK_THROWS_AS(truncate(f, 9), TruncationError);
}

TEST_CASE("POD truncation is the optimal rank-i projection") {
  auto gen = testutil::rng(41);
  const DenseMatrix a = testutil::random_matrix(6, 20, gen);
  const SvdFactors f = svd(a);
  for (std::size_t i = 1; i <= 6; ++i) {
    double tail = 0.0;
    for (std::size_t k = i; k < 6; ++k) tail += f.sigma[k] * f.sigma[k];
    const double expected = std::sqrt(tail);
    const double got = truncated_reconstruction_error(f, i, a);
    CHECK(got == Catch::Approx(expected).margin(1e-9));

    // No random rank-i orthonormal projection does better.
    for (int trial = 0; trial < 100; ++trial) {
      const DenseMatrix q = testutil::random_orthonormal(6, i, gen);
      const DenseMatrix proj = matmul(q, matmul(transpose(q), a));
      CHECK(testutil::frobenius_diff(a, proj) >= got - 1e-9);
    }
  }
}

TEST_CASE("case 1 energy concentrates in the leading modes") {
  const SimResult sim = case1_sim();
  const SvdFactors f = svd(sim.snapshots.data);
  CHECK(truncate(f, 1).captured_energy >= 0.9);
  CHECK(truncate(f, 5).captured_energy >= 0.99);
}

TEST_CASE("covariance crosscheck on a rank-1 matrix") {
  auto gen = testutil::rng(43);
  const auto u = testutil::random_vector(6, gen);
  const auto v = testutil::random_vector(9, gen);
  DenseMatrix a(6, 9);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 9; ++j) a(i, j) = u[i] * v[j];
  }
  const CrosscheckReport rep = covariance_crosscheck(a);
  CHECK(rep.rank == 1);
  CHECK(rep.max_value_deviation < 1e-10);
  CHECK(rep.subspace_angle < 1e-7);
}

TEST_CASE("covariance crosscheck on case 1 snapshots") {
  const SimResult sim = case1_sim();
  const CrosscheckReport rep = covariance_crosscheck(sim.snapshots);
  CHECK(rep.max_value_deviation <= 1e-8);
  CHECK(rep.subspace_angle <= 1e-6);
  CHECK(rep.rank >= 1);

  // Cutting deeper keeps the report honest: once the retained eigenvalues
  // reach the covariance route's absolute noise floor (~eps * lambda_1), the
  // compared directions are no longer meaningful and the angle grows.
  const CrosscheckReport deep = covariance_crosscheck(sim.snapshots, 1e-32);
  CHECK(deep.rank >= rep.rank);
  CHECK(std::isfinite(deep.subspace_angle));
}

TEST_CASE("covariance crosscheck rejects the zero matrix") {
  CHECK_THROWS_AS(covariance_crosscheck(DenseMatrix(4, 5, 0.0)), SpectrumError);
}
