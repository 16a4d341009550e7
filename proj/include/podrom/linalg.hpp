#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "podrom/errors.hpp"

namespace podrom {

// ===========================================================================
// DenseMatrix: row-major dense real matrix.
// ===========================================================================

class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
      throw ShapeError("matrix dimensions must be positive");
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix a(n, n);
    for (std::size_t k = 0; k < n; ++k) a(k, k) = 1.0;
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  /// Pointer to the start of row i (contiguous, cols() entries).
  double* row(std::size_t i) { return entries_.data() + i * cols_; }
  const double* row(std::size_t i) const { return entries_.data() + i * cols_; }

  std::vector<double>& entries() noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, const std::vector<double>& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  bool all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](double v) { return std::isfinite(v); });
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

inline double max_abs(const DenseMatrix& a) {
  double v = 0.0;
  for (double e : a.entries()) v = std::max(v, std::abs(e));
  return v;
}

inline double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double e : a.entries()) s += e * e;
  return std::sqrt(s);
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " * " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  DenseMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        ci[j] += aik * bk[j];
      }
    }
  }
  return c;
}

inline std::vector<double> matvec(const DenseMatrix& a,
                                  const std::vector<double>& v) {
  if (a.cols() != v.size()) {
    throw ShapeError("matvec: matrix has " + std::to_string(a.cols()) +
                     " cols, vector has " + std::to_string(v.size()));
  }
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += ai[j] * v[j];
    out[i] = s;
  }
  return out;
}

/// max |a^T a - I|; zero for a matrix with orthonormal columns.
inline double orthonormality_deviation(const DenseMatrix& a) {
  double dev = 0.0;
  for (std::size_t p = 0; p < a.cols(); ++p) {
    for (std::size_t q = p; q < a.cols(); ++q) {
      double d = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) d += a(i, p) * a(i, q);
      dev = std::max(dev, std::abs(d - (p == q ? 1.0 : 0.0)));
    }
  }
  return dev;
}

// ===========================================================================
// Thin SVD via one-sided Jacobi.
// ===========================================================================

/// Thin SVD factors of an m x n matrix, p = min(m, n):
///   a = phi * diag(sigma) * psi_t
/// phi is m x p with orthonormal columns, psi_t is p x n with orthonormal
/// rows, sigma is descending and non-negative. Sign convention: in each
/// column of phi the entry of largest magnitude is non-negative (ties broken
/// by lowest row index).
struct SvdFactors {
  DenseMatrix phi;
  std::vector<double> sigma;
  DenseMatrix psi_t;
};

namespace detail {

struct OneSidedJacobiResult {
  DenseMatrix u;              // r x c, orthonormal columns (normalized work)
  std::vector<double> sigma;  // c, descending
  DenseMatrix v;              // c x c, orthonormal (accumulated rotations)
};

/// Orthogonalizes the columns of b (r x c) by plane rotations:
/// b * V = W with mutually orthogonal columns, so b = U * diag(sigma) * V^T.
/// Deterministic: fixed cyclic sweep order, fixed tolerance.
inline OneSidedJacobiResult one_sided_jacobi(const DenseMatrix& b) {
  const std::size_t r = b.rows();
  const std::size_t c = b.cols();
  DenseMatrix w = b;
  DenseMatrix v = DenseMatrix::identity(c);

  constexpr double kTol = 1.0e-15;
  constexpr int kMaxSweeps = 64;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          alpha += wp * wp;
          beta += wq * wq;
          gamma += wp * wq;
        }
        if (alpha == 0.0 || beta == 0.0) continue;  // zero column, nothing to do
        if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < r; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = sn * wp + cs * wq;
        }
        for (std::size_t i = 0; i < c; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = sn * vp + cs * vq;
        }
      }
    }
  }
  if (!converged) {
    throw FactorizationError("one-sided Jacobi SVD did not converge");
  }

  std::vector<double> norms(c);
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r; ++i) s += w(i, j) * w(i, j);
    norms[j] = std::sqrt(s);
  }

  // Descending order, ties by original index.
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
    return norms[a] > norms[b2];
  });

  OneSidedJacobiResult res{DenseMatrix(r, c), std::vector<double>(c),
                           DenseMatrix(c, c)};
  for (std::size_t j = 0; j < c; ++j) {
    const std::size_t src = order[j];
    res.sigma[j] = norms[src];
    for (std::size_t i = 0; i < c; ++i) res.v(i, j) = v(i, src);
    if (norms[src] > 0.0) {
      const double inv = 1.0 / norms[src];
      for (std::size_t i = 0; i < r; ++i) res.u(i, j) = w(i, src) * inv;
    }
  }

  // Exactly-zero singular values leave empty directions in u; fill them with
  // a deterministic orthonormal completion so u keeps orthonormal columns.
  for (std::size_t j = 0; j < c; ++j) {
    if (res.sigma[j] > 0.0) continue;
    std::vector<double> cand(r, 0.0);
    for (std::size_t seed = 0; seed < r; ++seed) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[seed] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          double d = 0.0;
          for (std::size_t i = 0; i < r; ++i) d += cand[i] * res.u(i, k);
          for (std::size_t i = 0; i < r; ++i) cand[i] -= d * res.u(i, k);
        }
      }
      double nrm = 0.0;
      for (double x : cand) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < r; ++i) res.u(i, j) = cand[i] / nrm;
        break;
      }
    }
  }
  return res;
}

inline void apply_svd_sign_convention(DenseMatrix& phi, DenseMatrix& psi_t) {
  for (std::size_t k = 0; k < phi.cols(); ++k) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      const double v = std::abs(phi(i, k));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (phi(arg, k) < 0.0) {
      for (std::size_t i = 0; i < phi.rows(); ++i) phi(i, k) = -phi(i, k);
      for (std::size_t j = 0; j < psi_t.cols(); ++j) psi_t(k, j) = -psi_t(k, j);
    }
  }
}

}  // namespace detail

inline SvdFactors svd(const DenseMatrix& a) {
  if (!a.all_finite()) throw ContractError("svd: input has non-finite entries");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  SvdFactors f;
  if (m >= n) {
    auto j = detail::one_sided_jacobi(a);
    f.phi = std::move(j.u);
    f.sigma = std::move(j.sigma);
    f.psi_t = transpose(j.v);
  } else {
    // a^T = u s v^T  =>  a = v s u^T; the rotation-accumulated factor lands
    // on the wide side and the normalized columns on the tall side.
    auto j = detail::one_sided_jacobi(transpose(a));
    f.phi = std::move(j.v);
    f.sigma = std::move(j.sigma);
    f.psi_t = transpose(j.u);
  }
  detail::apply_svd_sign_convention(f.phi, f.psi_t);
  return f;
}

/// phi * diag(sigma) * psi_t.
inline DenseMatrix svd_reconstruct(const SvdFactors& f) {
  DenseMatrix scaled = f.phi;  // m x p, column k scaled by sigma_k
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    for (std::size_t k = 0; k < scaled.cols(); ++k) {
      scaled(i, k) *= f.sigma[k];
    }
  }
  return matmul(scaled, f.psi_t);
}

// ===========================================================================
// Symmetric eigendecomposition via cyclic Jacobi rotations.
// ===========================================================================

/// Eigen factorization a = V diag(values) V^T of a symmetric matrix,
/// values descending, columns of V orthonormal.
struct EigenSym {
  std::vector<double> values;
  DenseMatrix vectors;
};

inline EigenSym eigen_sym(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ContractError("eigen_sym: matrix is not square");
  }
  const std::size_t n = a.rows();
  const double scale = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1.0e-12 * scale) {
        throw ContractError("eigen_sym: matrix is not symmetric");
      }
    }
  }

  DenseMatrix d = a;
  DenseMatrix v = DenseMatrix::identity(n);
  constexpr int kMaxSweeps = 64;
  constexpr double kTol = 1.0e-15;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
    }
    if (std::sqrt(2.0 * off) <= kTol * scale * n) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (apq == 0.0) continue;
        const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double dkp = d(k, p), dkq = d(k, q);
          d(k, p) = cs * dkp - sn * dkq;
          d(k, q) = sn * dkp + cs * dkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double dpk = d(p, k), dqk = d(q, k);
          d(p, k) = cs * dpk - sn * dqk;
          d(q, k) = sn * dpk + cs * dqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = cs * vkp - sn * vkq;
          v(k, q) = sn * vkp + cs * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return d(i, i) > d(j, j);
  });

  EigenSym res{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    res.values[j] = d(src, src);
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, src);
  }
  // Same sign convention as svd's left factor, for reproducible output.
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = std::abs(res.vectors(i, k));
      if (av > best) {
        best = av;
        arg = i;
      }
    }
    if (res.vectors(arg, k) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = -res.vectors(i, k);
    }
  }
  return res;
}

}  // namespace podrom
