#include "slowbond/energy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace slowbond {

double walpha_boundary_derivative(const Field& f, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("walpha_boundary_derivative: alpha must be > 0");
  return alpha * (trace_left(f) - trace_right(f));
}

namespace {

// || d_u f ||^2 over the cut interval: wrap bond excluded.
double gradient_sq_norm(const Field& f) {
  const int n = f.n();
  const double h = f.grid.h();
  double s = 0.0;
  for (int x = 0; x + 1 < n; ++x) {
    const double d = n * (f[x + 1] - f[x]);
    s += h * d * d;
  }
  return s;
}

// Trapezoidal in time, except that the first subinterval uses its right
// endpoint: frame 0 is initial data, and for jump data its instantaneous
// dissipation is never attained at positive times (the evolution collapses
// it below frame resolution), so the t = 0 endpoint value must not be
// weighted into the integral.
double time_quadrature(const std::vector<double>& samples, double dt) {
  if (samples.size() < 2) return 0.0;
  double s = dt * samples[1];
  for (size_t k = 1; k + 1 < samples.size(); ++k)
    s += 0.5 * dt * (samples[k] + samples[k + 1]);
  return s;
}

}  // namespace

EnergyReport energy_functional(const Trajectory& traj, double alpha, double kappa) {
  if (!(alpha > 0.0)) throw std::invalid_argument("energy_functional: alpha must be > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("energy_functional: kappa must be > 0");
  if (traj.frames.size() < 2) throw std::invalid_argument("energy_functional: need >= 2 frames");

  std::vector<double> bulk_t, atom_t;
  bulk_t.reserve(traj.frames.size());
  atom_t.reserve(traj.frames.size());
  for (const Field& f : traj.frames) {
    bulk_t.push_back(gradient_sq_norm(f));
    const double jump = trace_left(f) - trace_right(f);
    atom_t.push_back(alpha * jump * jump);
  }

  EnergyReport report;
  report.alpha = alpha;
  report.bulk = time_quadrature(bulk_t, traj.dt);
  report.atom = time_quadrature(atom_t, traj.dt);
  report.total = (report.bulk + report.atom) / (4.0 * kappa);
  report.bound_check = l2_inner(traj.frames.front(), traj.frames.front()) / 16.0;
  return report;
}

namespace {

// <rho, d_u H> on the torus: bond differences of H against bond-averaged rho.
double gradient_pairing(const Field& rho, const Field& H) {
  const int n = rho.n();
  double s = 0.0;
  for (int x = 0; x < n; ++x) {
    const int y = (x + 1) % n;
    s += 0.5 * (rho[x] + rho[y]) * static_cast<double>(n) * (H[y] - H[x]);
  }
  return s * rho.grid.h();
}

void check_test_field(const Trajectory& traj, const Field& H) {
  if (H.grid.n != traj.grid.n || H.grid.topology != Topology::torus)
    throw std::invalid_argument("variational_energy: test fields must be torus fields on the trajectory grid");
}

}  // namespace

double variational_energy(const Trajectory& traj, double alpha,
                          const std::vector<Field>& family) {
  std::vector<Trajectory> promoted;
  promoted.reserve(family.size());
  for (const Field& H : family) {
    check_test_field(traj, H);
    Trajectory constant{traj.grid, traj.dt, {}};
    constant.frames.assign(traj.frames.size(), H);
    promoted.push_back(std::move(constant));
  }
  return variational_energy(traj, alpha, promoted);
}

double variational_energy(const Trajectory& traj, double alpha,
                          const std::vector<Trajectory>& family) {
  if (!(alpha > 0.0)) throw std::invalid_argument("variational_energy: alpha must be > 0");
  double best = 0.0;  // H = 0 is always admissible and scores 0
  for (const Trajectory& Ht : family) {
    if (Ht.frames.size() != traj.frames.size())
      throw std::invalid_argument("variational_energy: test trajectory frame count mismatch");
    std::vector<double> integrand;
    integrand.reserve(traj.frames.size());
    for (size_t k = 0; k < traj.frames.size(); ++k) {
      const Field& H = Ht.frames[k];
      check_test_field(traj, H);
      integrand.push_back(gradient_pairing(traj.frames[k], H) -
                          2.0 * walpha_inner(H, H, alpha));
    }
    best = std::max(best, time_quadrature(integrand, traj.dt));
  }
  return best;
}

Trajectory gradient_test_function(const Trajectory& rho, double scale) {
  if (rho.grid.n < 3)
    throw std::invalid_argument("gradient_test_function: need n >= 3");
  Trajectory out{rho.grid, rho.dt, {}};
  out.frames.reserve(rho.frames.size());
  const int n = rho.grid.n;
  for (const Field& f : rho.frames) {
    Field H(Grid(n, Topology::torus), 0.0, f.time);
    for (int x = 1; x + 1 < n; ++x) H[x] = 0.5 * n * (f[x + 1] - f[x - 1]);
    H[0] = 0.5 * n * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
    H[n - 1] = 0.5 * n * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
    for (double& v : H.values) v *= -scale / 4.0;
    out.frames.push_back(std::move(H));
  }
  return out;
}

WalphaTestFn build_walpha_test_function(double a_tilde, std::optional<double> b_tilde,
                                        const Field& h, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("build_walpha_test_function: alpha must be > 0");
  const double h_mean = mass(h);
  if (std::abs(h_mean) > 1e-10) {
    std::ostringstream msg;
    msg << "build_walpha_test_function: h must have zero mean, got " << h_mean;
    throw std::invalid_argument(msg.str());
  }

  const int n = h.n();
  const double cell = h.grid.h();
  // P(v) = int_0^v h at cell centers, and I = int_0^1 P.
  std::vector<double> P(static_cast<size_t>(n));
  double full = 0.0, I = 0.0;
  for (int x = 0; x < n; ++x) {
    P[x] = full + 0.5 * cell * h[x];
    full += cell * h[x];
    I += cell * P[x];
  }

  double b;
  if (b_tilde) {
    b = *b_tilde;
    const double residual = b * (1.0 + 1.0 / alpha) + I;
    if (std::abs(residual) > 1e-10) {
      std::ostringstream msg;
      msg << "build_walpha_test_function: closure condition violated, residual " << residual;
      throw std::invalid_argument(msg.str());
    }
  } else {
    b = -I / (1.0 + 1.0 / alpha);
  }

  Field H(h.grid, 0.0, 0.0);
  double Q = 0.0;  // int_0^u P by the same cumulative midpoint rule
  for (int x = 0; x < n; ++x) {
    const double q_at_center = Q + 0.5 * cell * P[x];
    H[x] = a_tilde + b * h.grid.center(x) + q_at_center;
    Q += cell * P[x];
  }
  return WalphaTestFn{a_tilde, b, h, alpha, std::move(H)};
}

double test_function_bc_residual(const WalphaTestFn& fn) {
  const Field& H = fn.field;
  const double d = fn.alpha * (trace_left(H) - trace_right(H));
  return std::max(std::abs(boundary_derivative_left(H) - d),
                  std::abs(boundary_derivative_right(H) - d));
}

}  // namespace slowbond
