#ifndef SLOWBOND_ENERGY_HPP
#define SLOWBOND_ENERGY_HPP

#include <optional>
#include <vector>

#include "slowbond/grid.hpp"

namespace slowbond {

/// Weighted Sobolev energy of a trajectory, split into its interior and
/// boundary-coupling parts:
///   bulk  = int_0^T || d_u rho_t ||^2 dt          (bond differences on the cut interval)
///   atom  = int_0^T alpha (rho_t(0+) - rho_t(1-))^2 dt
///   total = (bulk + atom) / (4 kappa)
/// bound_check = ||rho_0||^2 / 16 is what total may never exceed (kappa = 2)
/// for trajectories produced by the conservative solver.
struct EnergyReport {
  double alpha = 0.0;
  double bulk = 0.0;
  double atom = 0.0;
  double total = 0.0;
  double bound_check = 0.0;
};

/// alpha (f(0+) - f(1-)): the atom value of the weighted derivative at the cut.
double walpha_boundary_derivative(const Field& f, double alpha);

EnergyReport energy_functional(const Trajectory& traj, double alpha, double kappa = 2.0);

/// max over the family of <<rho, d_u H>> - 2 <<H, H>>_alpha, a one-sided probe
/// of the variational characterization of the energy. Static members are held
/// constant in time; the Trajectory overload pairs frame k of each member with
/// frame k of rho.
double variational_energy(const Trajectory& traj, double alpha, const std::vector<Field>& family);
double variational_energy(const Trajectory& traj, double alpha,
                          const std::vector<Trajectory>& family);

/// The variational maximizer at kappa = 2: H_t = -scale * d_u rho_t / 4,
/// realized cellwise with the torus cut at 0 (one-sided stencils there).
Trajectory gradient_test_function(const Trajectory& rho, double scale = 1.0);

/// Test function H(u) = a + int_(0,u] (b + int_0^v h) W_alpha(dv) realized on
/// the open interval as a + b u + int_0^u int_0^v h; carries its admissibility
/// data. Satisfies d_u H(0) = d_u H(1) = alpha (H(0) - H(1)) up to O(h^2).
struct WalphaTestFn {
  double a_tilde;
  double b_tilde;
  Field h;
  double alpha;
  Field field;
};

/// Builds the test function. h must have zero mean (to 1e-10). When b_tilde is
/// absent it is solved from the closure condition b (1 + 1/alpha) + I = 0 with
/// I = int_0^1 int_0^v h; when given, that condition is checked instead.
WalphaTestFn build_walpha_test_function(double a_tilde, std::optional<double> b_tilde,
                                        const Field& h, double alpha);

/// max(|d_u H(0) - D|, |d_u H(1) - D|) with D = alpha (H(0+) - H(1-)).
double test_function_bc_residual(const WalphaTestFn& fn);

}  // namespace slowbond

#endif
