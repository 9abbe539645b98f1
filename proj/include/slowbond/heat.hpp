#ifndef SLOWBOND_HEAT_HPP
#define SLOWBOND_HEAT_HPP

#include <utility>
#include <vector>

#include "slowbond/grid.hpp"

namespace slowbond {

/// Per-bond conductances on the discrete torus: rate 1 everywhere except the
/// slow bond {n-1, 0}, which carries alpha * n^(-beta). beta = +infinity is a
/// distinguished value meaning the bond is blocked (rate exactly 0).
struct BondRates {
  int n = 0;
  double alpha = 1.0;
  double beta = 0.0;
  std::vector<double> conductance;
};

BondRates build_conductances(int n, double alpha, double beta);

struct SolverSpec {
  double theta = 0.5;
  double dt = 0.0;
  double T = 0.0;
  int snapshot_stride = 1;
  /// Number of leading steps replaced by two implicit-Euler half-steps each.
  /// Damps the non-smooth content of jump initial data that the trapezoidal
  /// scheme would otherwise carry as a slowly decaying oscillation.
  int rannacher_steps = 2;
};

/// Action of the weighted lattice Laplacian:
/// g(x) = n^2 [ c(x-1) (f(x-1) - f(x)) + c(x) (f(x+1) - f(x)) ], indices mod n.
/// The flux form telescopes, so sum_x g(x) = 0.
Field semidiscrete_rhs(const Field& f, const BondRates& rates);

/// One theta-scheme step: solves (I - theta dt L) f_new = (I + (1-theta) dt L) f
/// by direct cyclic-tridiagonal elimination. Conserves mass to roundoff.
Field step_theta(const Field& f, const BondRates& rates, double dt, double theta);

/// Integrates the semi-discrete equation from the projected profile, recording
/// a frame every snapshot_stride steps (frame 0 is the initial field).
Trajectory solve(const std::function<double(double)>& profile, const BondRates& rates,
                 const SolverSpec& spec);
Trajectory solve(Field initial, const BondRates& rates, const SolverSpec& spec);

/// Direct solver for tridiagonal systems with two cyclic corner entries
/// (Thomas elimination plus a Sherman-Morrison rank-1 correction).
/// diag[i] = A[i][i], upper[i] = A[i][i+1], lower[i] = A[i][i-1],
/// corner_ur = A[0][n-1], corner_ll = A[n-1][0].
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper, double corner_ur,
                                             double corner_ll, const std::vector<double>& rhs);

/// Truncated Fourier series a0 + sum_k (a_k cos(2 pi k u) + b_k sin(2 pi k u)).
struct FourierSeries {
  double mean = 0.0;
  std::vector<double> cos_coeff;
  std::vector<double> sin_coeff;
};

/// Truncated cosine series c0 + sum_k c_k cos(k pi u).
struct CosineSeries {
  double mean = 0.0;
  std::vector<double> coeff;
};

/// Exact solution of the periodic heat equation: mode k decays as exp(-4 k^2 pi^2 t).
Field spectral_periodic(const FourierSeries& series, double t, const Grid& grid);

/// Exact solution of the Neumann heat equation: mode k decays as exp(-k^2 pi^2 t).
Field spectral_neumann(const CosineSeries& series, double t, const Grid& grid);

/// Per-frame Robin boundary residuals (r0, r1):
/// r0 = d_u rho(0+) - alpha (rho(0+) - rho(1-)), r1 likewise at u = 1, with
/// second-order one-sided derivatives and the extrapolated boundary traces.
std::vector<std::pair<double, double>> robin_bc_residual(const Trajectory& traj, double alpha);

}  // namespace slowbond

#endif
