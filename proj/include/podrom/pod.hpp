#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "podrom/errors.hpp"
#include "podrom/fdsolver.hpp"
#include "podrom/linalg.hpp"

namespace podrom {

/// How relative mode significance is computed from the singular values:
/// r_k = sigma_k^2 / sum(sigma^2) or r_k = sigma_k / sum(sigma).
enum class EnergyConvention { SigmaSquared, SigmaLinear };

struct EnergySpectrum {
  std::vector<double> r;           // relative significance, sums to 1
  std::vector<double> cumulative;  // prefix sums of r
  EnergyConvention convention = EnergyConvention::SigmaSquared;
};

inline EnergySpectrum energy_spectrum(const std::vector<double>& sigma,
                                      EnergyConvention convention) {
  if (sigma.empty()) throw SpectrumError("empty singular value list");
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] < 0.0) throw SpectrumError("negative singular value");
    if (k > 0 && sigma[k] > sigma[k - 1]) {
      throw SpectrumError("singular values are not descending");
    }
  }
  double total = 0.0;
  for (double s : sigma) {
    total += (convention == EnergyConvention::SigmaSquared) ? s * s : s;
  }
  if (total == 0.0) {
    throw SpectrumError("degenerate spectrum: all singular values are zero");
  }

  EnergySpectrum spec;
  spec.convention = convention;
  spec.r.resize(sigma.size());
  spec.cumulative.resize(sigma.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const double w =
        (convention == EnergyConvention::SigmaSquared) ? sigma[k] * sigma[k]
                                                       : sigma[k];
    spec.r[k] = w / total;
    acc += spec.r[k];
    spec.cumulative[k] = acc;
  }
  return spec;
}

/// Truncated POD basis: the first `mode_count` spatial modes with their
/// singular values and temporal coefficients. captured_energy is always the
/// SigmaSquared cumulative share, independent of any convention used to pick
/// the mode count.
struct PodBasis {
  DenseMatrix phi;            // m x i
  std::vector<double> sigma;  // i
  DenseMatrix psi_t;          // i x n
  std::size_t mode_count = 0;
  double captured_energy = 0.0;
};

inline PodBasis truncate(const SvdFactors& f, std::size_t i) {
  const std::size_t p = f.sigma.size();
  if (i < 1 || i > p) {
    throw TruncationError("mode count " + std::to_string(i) +
                          " out of range [1, " + std::to_string(p) + "]");
  }
  PodBasis b;
  b.mode_count = i;
  b.phi = DenseMatrix(f.phi.rows(), i);
  for (std::size_t r = 0; r < f.phi.rows(); ++r) {
    for (std::size_t k = 0; k < i; ++k) b.phi(r, k) = f.phi(r, k);
  }
  b.sigma.assign(f.sigma.begin(), f.sigma.begin() + static_cast<long>(i));
  b.psi_t = DenseMatrix(i, f.psi_t.cols());
  for (std::size_t k = 0; k < i; ++k) {
    for (std::size_t j = 0; j < f.psi_t.cols(); ++j) {
      b.psi_t(k, j) = f.psi_t(k, j);
    }
  }
  b.captured_energy =
      energy_spectrum(f.sigma, EnergyConvention::SigmaSquared).cumulative[i - 1];
  return b;
}

/// Agreement between the two factorization routes: eigenpairs of the spatial
/// covariance U U^T versus the left singular factors of U.
struct CrosscheckReport {
  /// max_k |lambda_k - sigma_k^2| / sigma_1^2 over k < min(m, n).
  double max_value_deviation = 0.0;
  /// Largest principal angle (radians) between the top-k eigenvector span
  /// and the top-k left singular vector span.
  double subspace_angle = 0.0;
  /// Number of covariance eigenvalues above the relative cutoff (the
  /// compared rank k).
  std::size_t rank = 0;
};

/// The subspace comparison keeps only modes whose covariance eigenvalue
/// sigma_k^2 exceeds eigenvalue_cutoff * sigma_1^2. Cutting deeper than
/// roughly machine epsilon relative to lambda_1 would compare eigenvector
/// directions the covariance route cannot resolve at all.
inline CrosscheckReport covariance_crosscheck(const DenseMatrix& u,
                                              double eigenvalue_cutoff = 1e-8) {
  const SvdFactors f = svd(u);
  if (f.sigma[0] == 0.0) {
    throw SpectrumError("degenerate spectrum: zero snapshot matrix");
  }
  const DenseMatrix cov = matmul(u, transpose(u));
  const EigenSym eg = eigen_sym(cov);

  CrosscheckReport rep;
  const double s1sq = f.sigma[0] * f.sigma[0];
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    const double dev = std::abs(eg.values[k] - f.sigma[k] * f.sigma[k]) / s1sq;
    rep.max_value_deviation = std::max(rep.max_value_deviation, dev);
  }

  std::size_t rank = 0;
  while (rank < f.sigma.size() &&
         f.sigma[rank] * f.sigma[rank] > eigenvalue_cutoff * s1sq) {
    ++rank;
  }
  rep.rank = rank;

  // cos of principal angles = singular values of Phi_k^T V_k.
  DenseMatrix overlap(rank, rank);
  for (std::size_t a = 0; a < rank; ++a) {
    for (std::size_t b = 0; b < rank; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < u.rows(); ++i) {
        d += f.phi(i, a) * eg.vectors(i, b);
      }
      overlap(a, b) = d;
    }
  }
  const SvdFactors of = svd(overlap);
  const double c = std::clamp(of.sigma.back(), -1.0, 1.0);
  rep.subspace_angle = std::acos(c);
  return rep;
}

inline CrosscheckReport covariance_crosscheck(const SnapshotMatrix& u,
                                              double eigenvalue_cutoff = 1e-8) {
  return covariance_crosscheck(u.data, eigenvalue_cutoff);
}

}  // namespace podrom
