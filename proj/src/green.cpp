#include "slowbond/green.hpp"

#include <cmath>
#include <stdexcept>

namespace slowbond {

double kernel_value(double alpha, double u, double r) {
  if (!(alpha > 0.0)) throw std::invalid_argument("kernel_value: alpha must be > 0");
  if (u < 0.0 || u > 1.0 || r < 0.0 || r > 1.0)
    throw std::invalid_argument("kernel_value: u, r must lie in [0,1]");
  double v = alpha / (alpha + 1.0) * u * (1.0 - r);
  if (r <= u) v -= u - r;
  return v;
}

ZeroMeanField ZeroMeanField::checked(Field f) {
  if (std::abs(mass(f)) > 1e-12)
    throw std::invalid_argument("ZeroMeanField: input mean exceeds 1e-12");
  return ZeroMeanField(std::move(f));
}

ZeroMeanField ZeroMeanField::centered(Field f) {
  const double m = mass(f);
  for (double& v : f.values) v -= m;
  return ZeroMeanField(std::move(f));
}

namespace {

struct Antiderivatives {
  double i1 = 0.0;               // int_0^1 (1-r) g(r) dr
  std::vector<double> cum_g;     // int_0^{u_x} g, at cell centers
  std::vector<double> cum_rg;    // int_0^{u_x} r g(r) dr, at cell centers
};

// Cumulative midpoint sums: the integral up to a cell center covers the full
// cells before it plus half of its own cell.
Antiderivatives accumulate(const Field& g) {
  const int n = g.n();
  const double h = g.grid.h();
  Antiderivatives a;
  a.cum_g.resize(static_cast<size_t>(n));
  a.cum_rg.resize(static_cast<size_t>(n));
  double full_g = 0.0, full_rg = 0.0;
  for (int x = 0; x < n; ++x) {
    const double r = g.grid.center(x);
    a.cum_g[x] = full_g + 0.5 * h * g[x];
    a.cum_rg[x] = full_rg + 0.5 * h * r * g[x];
    full_g += h * g[x];
    full_rg += h * r * g[x];
    a.i1 += h * (1.0 - r) * g[x];
  }
  return a;
}

}  // namespace

Field apply_inverse(const ZeroMeanField& g, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("apply_inverse: alpha must be > 0");
  const Field& gf = g.field;
  const Antiderivatives a = accumulate(gf);
  const double slope = alpha / (alpha + 1.0) * a.i1;
  Field f(gf.grid, 0.0, gf.time);
  for (int x = 0; x < gf.n(); ++x) {
    const double u = gf.grid.center(x);
    f[x] = slope * u - u * a.cum_g[x] + a.cum_rg[x];
  }
  return f;
}

Field inverse_derivative(const ZeroMeanField& g, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("inverse_derivative: alpha must be > 0");
  const Field& gf = g.field;
  const Antiderivatives a = accumulate(gf);
  const double slope = alpha / (alpha + 1.0) * a.i1;
  Field d(gf.grid, 0.0, gf.time);
  for (int x = 0; x < gf.n(); ++x) d[x] = slope - a.cum_g[x];
  return d;
}

double check_left_inverse(const ZeroMeanField& g, double alpha) {
  const Field f = apply_inverse(g, alpha);
  const int n = f.n();
  const double n2 = static_cast<double>(n) * n;
  double worst = 0.0;
  for (int x = 1; x + 1 < n; ++x) {
    const double neg_lap = -n2 * (f[x + 1] - 2.0 * f[x] + f[x - 1]);
    worst = std::max(worst, std::abs(neg_lap - g.field[x]));
  }
  return worst;
}

double quadratic_form(const ZeroMeanField& g, double alpha) {
  return l2_inner(g.field, apply_inverse(g, alpha));
}

double lyapunov_residual(const Trajectory& traj, double alpha) {
  if (traj.frames.size() < 2)
    throw std::invalid_argument("lyapunov_residual: need >= 2 frames");
  double q0 = 0.0, integral = 0.0, prev_p = 0.0, worst = 0.0;
  for (size_t k = 0; k < traj.frames.size(); ++k) {
    ZeroMeanField bar = ZeroMeanField::centered(traj.frames[k]);
    const double q = l2_inner(bar.field, apply_inverse(bar, alpha));
    const double p = l2_inner(bar.field, bar.field);
    if (k == 0) {
      q0 = q;
    } else {
      integral += 0.5 * traj.dt * (prev_p + p);
      worst = std::max(worst, std::abs(q - q0 + 2.0 * integral));
    }
    prev_p = p;
  }
  return worst;
}

}  // namespace slowbond
