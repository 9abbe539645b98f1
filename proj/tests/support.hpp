// Shared test-only helpers: dense matrices, a Jacobi eigensolver, and the
// dense brute-force machinery backing the operator-identity oracles. All of
// this is independent of the library's O(n) computation paths.
#ifndef SLOWBOND_TESTS_SUPPORT_HPP
#define SLOWBOND_TESTS_SUPPORT_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slowbond/green.hpp"
#include "slowbond/heat.hpp"

namespace testsupport {

inline double pi() { return std::acos(-1.0); }

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(int n) { return Matrix(n, std::vector<double>(n, 0.0)); }

inline Matrix identity(int n) {
  Matrix m = zeros(n);
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  const int n = static_cast<int>(a.size());
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// The weighted lattice Laplacian as a dense matrix (row x of semidiscrete_rhs).
inline Matrix conductance_laplacian(const slowbond::BondRates& rates) {
  const int n = rates.n;
  const double n2 = static_cast<double>(n) * n;
  Matrix L = zeros(n);
  for (int x = 0; x < n; ++x) {
    const double cl = rates.conductance[(x + n - 1) % n];
    const double cr = rates.conductance[x];
    L[x][(x + n - 1) % n] += n2 * cl;
    L[x][(x + 1) % n] += n2 * cr;
    L[x][x] -= n2 * (cl + cr);
  }
  return L;
}

/// Cyclic Jacobi eigensolver for symmetric matrices. Eigenvectors are the
/// columns of V.
inline void jacobi_eigen(Matrix a, std::vector<double>& w, Matrix& V) {
  const int n = static_cast<int>(a.size());
  V = identity(n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V[k][p], vkq = V[k][q];
          V[k][p] = c * vkp - s * vkq;
          V[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  w.resize(n);
  for (int i = 0; i < n; ++i) w[i] = a[i][i];
}

/// Eigendecomposition-backed exact propagator exp(tL) rho0 and the companion
/// closed-form time integrals; L must be symmetric.
struct DensePropagator {
  std::vector<double> eigenvalues;
  Matrix V;  // columns are eigenvectors
  std::vector<double> coeffs;

  DensePropagator(const Matrix& L, const std::vector<double>& rho0) {
    jacobi_eigen(L, eigenvalues, V);
    const int n = static_cast<int>(rho0.size());
    coeffs.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) coeffs[k] += V[i][k] * rho0[i];
  }

  std::vector<double> at(double t) const {
    const int n = static_cast<int>(coeffs.size());
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < n; ++k) {
      const double amp = coeffs[k] * std::exp(eigenvalues[k] * t);
      for (int i = 0; i < n; ++i) out[i] += amp * V[i][k];
    }
    return out;
  }

  /// h * int_0^t <rho_s, rho_s> ds, exact in the eigenbasis.
  double l2_time_integral(double t, double h) const {
    double s = 0.0;
    for (size_t k = 0; k < coeffs.size(); ++k) {
      const double lam = eigenvalues[k];
      const double c2 = coeffs[k] * coeffs[k];
      s += std::abs(lam) < 1e-9 ? c2 * t : c2 * (std::exp(2.0 * lam * t) - 1.0) / (2.0 * lam);
    }
    return s * h;
  }

  /// Pseudo-inverse of -L restricted to the non-constant modes.
  Matrix neg_pseudo_inverse() const {
    const int n = static_cast<int>(coeffs.size());
    Matrix A = zeros(n);
    for (int k = 0; k < n; ++k) {
      const double lam = eigenvalues[k];
      if (std::abs(lam) < 1e-9) continue;
      const double inv = 1.0 / (-lam);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] += inv * V[i][k] * V[j][k];
    }
    return A;
  }
};

/// Midpoint-quadrature matrix of the Green kernel: A[i][j] = h G(u_i, u_j).
inline Matrix kernel_matrix(double alpha, const slowbond::Grid& grid) {
  Matrix A = zeros(grid.n);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      A[i][j] = grid.h() * slowbond::kernel_value(alpha, grid.center(i), grid.center(j));
  return A;
}

/// Dense Gaussian elimination with partial pivoting (reference linear solver).
inline std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (a[col][col] == 0.0) throw std::runtime_error("dense_solve: singular");
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace testsupport

#endif
