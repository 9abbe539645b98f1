#ifndef SLOWBOND_GRID_HPP
#define SLOWBOND_GRID_HPP

#include <functional>
#include <string>
#include <vector>

namespace slowbond {

enum class Topology { interval, torus };

/// Uniform cell-centered discretization of [0,1] (or the unit torus) into n
/// cells of width 1/n. Cell x covers [x/n, (x+1)/n), center at (x+1/2)/n.
struct Grid {
  int n;
  Topology topology;

  Grid(int n_, Topology topology_);

  double h() const { return 1.0 / n; }
  double center(int x) const { return (x + 0.5) / n; }
  /// Bонds are {x, x+1}; the torus has a wrap bond {n-1, 0}, the interval does not.
  int bond_count() const { return topology == Topology::torus ? n : n - 1; }

  bool operator==(const Grid&) const = default;
};

/// Real-valued function on grid cells, tagged with a (macroscopic) time.
struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  Field(Grid g, std::vector<double> v, double t = 0.0);
  Field(Grid g, double fill = 0.0, double t = 0.0);

  double& operator[](int x) { return values[x]; }
  double operator[](int x) const { return values[x]; }
  int n() const { return grid.n; }
};

/// Time-indexed sequence of fields at uniform spacing dt, frames[k].time = k*dt.
struct Trajectory {
  Grid grid;
  double dt = 0.0;
  std::vector<Field> frames;
};

/// Midpoint-rule sampling of a profile at cell centers. Rejects non-finite values.
Field project_profile(const std::function<double(double)>& profile, const Grid& grid);

/// h * sum_x f(x) g(x), the Riemann-sum inner product. Grids must match.
double l2_inner(const Field& f, const Field& g);

/// h * sum_x f(x), the discrete total mass.
double mass(const Field& f);

/// Boundary traces by second-order extrapolation from the two nearest cells:
/// f(0+) = (3 v[0] - v[1]) / 2, f(1-) = (3 v[n-1] - v[n-2]) / 2.
double trace_left(const Field& f);
double trace_right(const Field& f);

/// l2_inner(f,g) + (1/alpha) f(0+) g(0+): the inner product weighted by
/// Lebesgue measure plus an atom of mass 1/alpha at the torus origin.
double walpha_inner(const Field& f, const Field& g, double alpha);

/// Per-bond forward differences b_x = n (f(x+1) - f(x)); the wrap bond is
/// included on the torus and absent on the interval.
std::vector<double> discrete_gradient(const Field& f);

/// Conservative divergence of per-bond values: cell x gets n (b_x - b_{x-1}).
/// On the interval the ends see zero exterior flux.
std::vector<double> bond_divergence(const Grid& grid, const std::vector<double>& bonds);

/// Cell-centered derivative: centered differences inside, second-order
/// one-sided stencils at interval ends (torus wraps).
Field cellwise_gradient(const Field& f);

/// One-sided second-order derivatives at the ends of a cell-centered field
/// (or at the cut of a torus field).
double boundary_derivative_left(const Field& f);
double boundary_derivative_right(const Field& f);

/// sqrt( sum_k w_k dt ||a_k - b_k||_{L2}^2 ) with trapezoidal weights w_k.
double spacetime_l2_distance(const Trajectory& a, const Trajectory& b);

/// "t, v0, v1, ..., v{n-1}" with 17 significant digits.
std::string field_csv_row(const Field& f);

/// Throws std::runtime_error if any value is non-finite.
void require_finite(const Field& f, const char* where);

}  // namespace slowbond

#endif
