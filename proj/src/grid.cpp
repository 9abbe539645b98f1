#include "slowbond/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace slowbond {

Grid::Grid(int n_, Topology topology_) : n(n_), topology(topology_) {
  if (n < 2) throw std::invalid_argument("grid: n must be >= 2 (no bond structure below that)");
}

Field::Field(Grid g, std::vector<double> v, double t) : grid(g), values(std::move(v)), time(t) {
  if (static_cast<int>(values.size()) != grid.n)
    throw std::invalid_argument("field: values length must equal grid.n");
}

Field::Field(Grid g, double fill, double t)
    : grid(g), values(static_cast<size_t>(g.n), fill), time(t) {}

void require_finite(const Field& f, const char* where) {
  for (double v : f.values)
    if (!std::isfinite(v)) throw std::runtime_error(std::string(where) + ": non-finite field value");
}

Field project_profile(const std::function<double(double)>& profile, const Grid& grid) {
  Field out(grid);
  for (int x = 0; x < grid.n; ++x) {
    double v = profile(grid.center(x));
    if (!std::isfinite(v))
      throw std::invalid_argument("project_profile: profile is non-finite at a sampled point");
    out[x] = v;
  }
  return out;
}

static void check_same_grid(const Field& f, const Field& g, const char* where) {
  if (!(f.grid == g.grid)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

double l2_inner(const Field& f, const Field& g) {
  check_same_grid(f, g, "l2_inner");
  double s = 0.0;
  for (int x = 0; x < f.n(); ++x) s += f[x] * g[x];
  return s * f.grid.h();
}

double mass(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.h();
}

double trace_left(const Field& f) { return (3.0 * f[0] - f[1]) / 2.0; }

double trace_right(const Field& f) {
  int n = f.n();
  return (3.0 * f[n - 1] - f[n - 2]) / 2.0;
}

double walpha_inner(const Field& f, const Field& g, double alpha) {
  check_same_grid(f, g, "walpha_inner");
  if (f.grid.topology != Topology::torus)
    throw std::invalid_argument("walpha_inner: fields must live on a torus grid");
  if (!(alpha > 0.0)) throw std::invalid_argument("walpha_inner: alpha must be > 0");
  return l2_inner(f, g) + trace_left(f) * trace_left(g) / alpha;
}

std::vector<double> discrete_gradient(const Field& f) {
  const int n = f.n();
  const int nb = f.grid.bond_count();
  std::vector<double> b(static_cast<size_t>(nb));
  for (int x = 0; x < nb; ++x) b[x] = n * (f[(x + 1) % n] - f[x]);
  return b;
}

std::vector<double> bond_divergence(const Grid& grid, const std::vector<double>& bonds) {
  const int n = grid.n;
  if (static_cast<int>(bonds.size()) != grid.bond_count())
    throw std::invalid_argument("bond_divergence: bond vector length mismatch");
  std::vector<double> d(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    double right = (x < static_cast<int>(bonds.size())) ? bonds[x] : 0.0;
    double left;
    if (x > 0)
      left = bonds[x - 1];
    else
      left = grid.topology == Topology::torus ? bonds[n - 1] : 0.0;
    d[x] = n * (right - left);
  }
  return d;
}

Field cellwise_gradient(const Field& f) {
  const int n = f.n();
  Field out(f.grid, 0.0, f.time);
  for (int x = 1; x + 1 < n; ++x) out[x] = 0.5 * n * (f[x + 1] - f[x - 1]);
  if (f.grid.topology == Topology::torus) {
    out[0] = 0.5 * n * (f[1] - f[n - 1]);
    out[n - 1] = 0.5 * n * (f[0] - f[n - 2]);
  } else if (n == 2) {
    out[0] = out[1] = n * (f[1] - f[0]);
  } else {
    out[0] = 0.5 * n * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
    out[n - 1] = 0.5 * n * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
  }
  return out;
}

double boundary_derivative_left(const Field& f) {
  if (f.n() < 3) throw std::invalid_argument("boundary_derivative: need n >= 3");
  const double h = f.grid.h();
  return (-2.0 * f[0] + 3.0 * f[1] - f[2]) / h;
}

double boundary_derivative_right(const Field& f) {
  const int n = f.n();
  if (n < 3) throw std::invalid_argument("boundary_derivative: need n >= 3");
  const double h = f.grid.h();
  return (2.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3]) / h;
}

double spacetime_l2_distance(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid == b.grid) || a.frames.size() != b.frames.size())
    throw std::invalid_argument("spacetime_l2_distance: trajectory shape mismatch");
  if (a.frames.size() < 2) throw std::invalid_argument("spacetime_l2_distance: need >= 2 frames");
  double dtol = 1e-12 * (std::abs(a.dt) + std::abs(b.dt));
  if (std::abs(a.dt - b.dt) > dtol)
    throw std::invalid_argument("spacetime_l2_distance: dt mismatch");
  const size_t K = a.frames.size();
  const double h = a.grid.h();
  double acc = 0.0;
  for (size_t k = 0; k < K; ++k) {
    const Field& fa = a.frames[k];
    const Field& fb = b.frames[k];
    double sq = 0.0;
    for (int x = 0; x < a.grid.n; ++x) {
      double d = fa[x] - fb[x];
      sq += d * d;
    }
    double w = (k == 0 || k + 1 == K) ? 0.5 : 1.0;
    acc += w * a.dt * sq * h;
  }
  return std::sqrt(acc);
}

std::string field_csv_row(const Field& f) {
  char buf[32];
  std::string row;
  row.reserve(static_cast<size_t>(f.n() + 1) * 20);
  std::snprintf(buf, sizeof buf, "%.17g", f.time);
  row += buf;
  for (double v : f.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    row += ',';
    row += buf;
  }
  return row;
}

}  // namespace slowbond
