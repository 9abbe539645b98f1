#include "slowbond/heat.hpp"

#include <cmath>
#include <stdexcept>

namespace slowbond {

BondRates build_conductances(int n, double alpha, double beta) {
  if (n < 2) throw std::invalid_argument("build_conductances: n must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("build_conductances: alpha must be > 0");
  if (std::isnan(beta) || beta < 0.0)
    throw std::invalid_argument("build_conductances: beta must be in [0, +inf]");
  BondRates rates;
  rates.n = n;
  rates.alpha = alpha;
  rates.beta = beta;
  rates.conductance.assign(static_cast<size_t>(n), 1.0);
  rates.conductance[n - 1] = std::isinf(beta) ? 0.0 : alpha * std::pow(n, -beta);
  return rates;
}

Field semidiscrete_rhs(const Field& f, const BondRates& rates) {
  const int n = f.n();
  if (rates.n != n) throw std::invalid_argument("semidiscrete_rhs: dimension mismatch");
  const double n2 = static_cast<double>(n) * n;
  Field g(f.grid, 0.0, f.time);
  for (int x = 0; x < n; ++x) {
    const double cl = rates.conductance[(x + n - 1) % n];
    const double cr = rates.conductance[x];
    g[x] = n2 * (cl * (f[(x + n - 1) % n] - f[x]) + cr * (f[(x + 1) % n] - f[x]));
  }
  return g;
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& lower,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& upper, double corner_ur,
                                             double corner_ll, const std::vector<double>& rhs) {
  const size_t n = diag.size();
  if (n < 3) throw std::invalid_argument("solve_cyclic_tridiagonal: need n >= 3");

  auto thomas = [&](const std::vector<double>& b, std::vector<double> d) {
    std::vector<double> c(upper), x(n);
    c[0] = upper[0] / b[0];
    d[0] = d[0] / b[0];
    for (size_t i = 1; i < n; ++i) {
      double m = b[i] - lower[i] * c[i - 1];
      if (m == 0.0) throw std::runtime_error("solve_cyclic_tridiagonal: singular system");
      if (i + 1 < n) c[i] = upper[i] / m;
      d[i] = (d[i] - lower[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  };

  if (corner_ur == 0.0 && corner_ll == 0.0) return thomas(diag, rhs);

  // Sherman-Morrison: A = A' + u v^T with u = (gamma, 0...0, corner_ll),
  // v = (1, 0...0, corner_ur/gamma); gamma = -diag[0] keeps A' well conditioned.
  const double gamma = -diag[0];
  std::vector<double> b(diag);
  b[0] = diag[0] - gamma;
  b[n - 1] = diag[n - 1] - corner_ll * corner_ur / gamma;

  std::vector<double> y = thomas(b, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_ll;
  std::vector<double> z = thomas(b, u);

  const double vy = y[0] + corner_ur / gamma * y[n - 1];
  const double vz = z[0] + corner_ur / gamma * z[n - 1];
  const double factor = vy / (1.0 + vz);
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
  return x;
}

Field step_theta(const Field& f, const BondRates& rates, double dt, double theta) {
  const int n = f.n();
  if (rates.n != n) throw std::invalid_argument("step_theta: dimension mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("step_theta: dt must be > 0");
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("step_theta: theta must be in [0,1]");

  Field rhs(f.grid, 0.0, f.time);
  if (theta < 1.0) {
    Field lf = semidiscrete_rhs(f, rates);
    for (int x = 0; x < n; ++x) rhs[x] = f[x] + (1.0 - theta) * dt * lf[x];
  } else {
    rhs.values = f.values;
  }

  Field out(f.grid, 0.0, f.time + dt);
  if (theta == 0.0) {
    out.values = std::move(rhs.values);
  } else {
    const double n2 = static_cast<double>(n) * n;
    const double s = theta * dt * n2;
    if (n == 2) {
      // Both bonds join the same pair of cells; solve the 2x2 directly.
      const double o = -s * (rates.conductance[0] + rates.conductance[1]);
      const double a00 = 1.0 - o, a11 = 1.0 - o;
      const double det = a00 * a11 - o * o;
      if (det == 0.0) throw std::runtime_error("step_theta: singular system");
      out[0] = (a11 * rhs[0] - o * rhs[1]) / det;
      out[1] = (a00 * rhs[1] - o * rhs[0]) / det;
    } else {
      std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0);
      for (int x = 0; x < n; ++x) {
        const double cl = rates.conductance[(x + n - 1) % n];
        const double cr = rates.conductance[x];
        diag[x] = 1.0 + s * (cl + cr);
        if (x + 1 < n) upper[x] = -s * cr;
        if (x > 0) lower[x] = -s * cl;
      }
      const double corner = -s * rates.conductance[n - 1];
      out.values =
          solve_cyclic_tridiagonal(lower, diag, upper, corner, corner, rhs.values);
    }
  }
  require_finite(out, "step_theta");
  return out;
}

Trajectory solve(Field initial, const BondRates& rates, const SolverSpec& spec) {
  if (!(spec.dt > 0.0) || !(spec.T > 0.0) || spec.dt > spec.T * (1.0 + 1e-12))
    throw std::invalid_argument("solve: need 0 < dt <= T");
  if (spec.snapshot_stride < 1) throw std::invalid_argument("solve: snapshot_stride must be >= 1");
  const long long steps = std::llround(spec.T / spec.dt);
  if (steps < 1 || std::abs(steps * spec.dt - spec.T) > 1e-9 * std::max(spec.T, 1.0))
    throw std::invalid_argument("solve: T must be an integer multiple of dt");
  if (steps % spec.snapshot_stride != 0)
    throw std::invalid_argument("solve: snapshot_stride must divide T/dt");

  Trajectory traj{initial.grid, spec.dt * spec.snapshot_stride, {}};
  initial.time = 0.0;
  traj.frames.reserve(static_cast<size_t>(steps / spec.snapshot_stride) + 1);
  traj.frames.push_back(initial);

  Field f = std::move(initial);
  for (long long k = 0; k < steps; ++k) {
    if (k < spec.rannacher_steps && spec.theta < 1.0) {
      f = step_theta(f, rates, spec.dt / 2.0, 1.0);
      f = step_theta(f, rates, spec.dt / 2.0, 1.0);
    } else {
      f = step_theta(f, rates, spec.dt, spec.theta);
    }
    f.time = (k + 1) * spec.dt;
    if ((k + 1) % spec.snapshot_stride == 0) traj.frames.push_back(f);
  }
  return traj;
}

Trajectory solve(const std::function<double(double)>& profile, const BondRates& rates,
                 const SolverSpec& spec) {
  Grid grid(rates.n, Topology::torus);
  return solve(project_profile(profile, grid), rates, spec);
}

Field spectral_periodic(const FourierSeries& series, double t, const Grid& grid) {
  Field out(grid, series.mean, t);
  const double pi = std::acos(-1.0);
  const size_t K = std::max(series.cos_coeff.size(), series.sin_coeff.size());
  for (size_t k = 1; k <= K; ++k) {
    const double decay = std::exp(-4.0 * pi * pi * static_cast<double>(k) * k * t);
    const double a = k <= series.cos_coeff.size() ? series.cos_coeff[k - 1] : 0.0;
    const double b = k <= series.sin_coeff.size() ? series.sin_coeff[k - 1] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    for (int x = 0; x < grid.n; ++x) {
      const double arg = 2.0 * pi * k * grid.center(x);
      out[x] += decay * (a * std::cos(arg) + b * std::sin(arg));
    }
  }
  return out;
}

Field spectral_neumann(const CosineSeries& series, double t, const Grid& grid) {
  Field out(grid, series.mean, t);
  const double pi = std::acos(-1.0);
  for (size_t k = 1; k <= series.coeff.size(); ++k) {
    const double c = series.coeff[k - 1];
    if (c == 0.0) continue;
    const double decay = std::exp(-pi * pi * static_cast<double>(k) * k * t);
    for (int x = 0; x < grid.n; ++x) out[x] += c * decay * std::cos(k * pi * grid.center(x));
  }
  return out;
}

std::vector<std::pair<double, double>> robin_bc_residual(const Trajectory& traj, double alpha) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.frames.size());
  for (const Field& f : traj.frames) {
    const double jump = alpha * (trace_left(f) - trace_right(f));
    out.emplace_back(boundary_derivative_left(f) - jump, boundary_derivative_right(f) - jump);
  }
  return out;
}

}  // namespace slowbond
