#ifndef SLOWBOND_GREEN_HPP
#define SLOWBOND_GREEN_HPP

#include "slowbond/grid.hpp"

namespace slowbond {

/// Green kernel of the inverse Laplacian on [0,1] with the alpha-coupled ends:
/// G(u,r) = alpha/(alpha+1) u (1-r) - (u-r) 1{0 <= r <= u <= 1}.
double kernel_value(double alpha, double u, double r);

/// A field whose discrete mean h * sum values is zero to 1e-12 absolute.
/// checked() rejects inputs that miss the tolerance; centered() subtracts the
/// mean explicitly (never silently).
struct ZeroMeanField {
  Field field;

  static ZeroMeanField checked(Field f);
  static ZeroMeanField centered(Field f);

 private:
  explicit ZeroMeanField(Field f) : field(std::move(f)) {}
};

/// Inverse Laplacian applied through the antiderivative form
/// f(u) = alpha/(alpha+1) u I1 - u int_0^u g + int_0^u r g(r) dr,
/// with I1 = int_0^1 (1-r) g(r) dr, all by cumulative midpoint sums (O(n)).
/// The result vanishes at the left boundary trace to O(h^2).
Field apply_inverse(const ZeroMeanField& g, double alpha);

/// Derivative of the inverse: alpha/(alpha+1) I1 - int_0^u g, per cell.
Field inverse_derivative(const ZeroMeanField& g, double alpha);

/// Max-norm, over interior cells 1..n-2, of the plain 3-point (-Laplacian) of
/// apply_inverse(g) minus g. Decays at second order for smooth g.
double check_left_inverse(const ZeroMeanField& g, double alpha);

/// <g, apply_inverse(g)>; symmetric and non-negative on zero-mean inputs.
double quadratic_form(const ZeroMeanField& g, double alpha);

/// Deviation from the dissipation identity along a trajectory: with
/// Q(t) = <rho_bar_t, A rho_bar_t> for the zero-mean part rho_bar, returns
/// max_t | Q(t) - Q(0) + 2 int_0^t <rho_bar_s, rho_bar_s> ds |
/// (trapezoidal time integral). Tends to zero under space-time refinement.
double lyapunov_residual(const Trajectory& traj, double alpha);

}  // namespace slowbond

#endif
