#ifndef SLOWBOND_EXPERIMENTS_HPP
#define SLOWBOND_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slowbond/energy.hpp"
#include "slowbond/green.hpp"
#include "slowbond/heat.hpp"
#include "slowbond/ssep.hpp"

namespace slowbond {

enum class Experiment { solve, sweep_alpha, simulate, hydro_compare, green_check, energy };

std::string experiment_name(Experiment e);

/// Fully validated experiment configuration. Every field has a recorded
/// default; `defaulted` lists the keys the user did not set, so they can be
/// echoed into output metadata.
struct RunSpec {
  Experiment experiment = Experiment::solve;
  int n = 256;
  double alpha = 1.0;
  double alpha_min = 1e-3;
  double alpha_max = 1e3;
  int alphas_per_decade = 4;
  std::vector<double> alpha_list;  // overrides the geometric grid when set
  double beta = 1.0;               // +inf means the blocked bond
  double dt = 0.0;                 // resolved to 1/n when not given
  double theta = 0.5;
  double T = 0.1;
  int snapshot_stride = 1;
  int rannacher_steps = 2;
  std::string profile = "halfcos";
  double profile_c = 0.5;
  std::uint64_t seed = 42;
  int replicas = 200;
  double epsilon = 0.05;
  int threads = 1;
  std::string output;  // resolved to "<experiment>.csv" when not given
  std::vector<double> snapshot_times;  // simulate; resolved to {T}
  bool aggregate = true;               // simulate: site stats vs long form
  std::vector<int> n_list = {64, 128, 256};            // hydro-compare
  std::vector<double> beta_list;                       // hydro-compare; default {0.5,1,2,inf}
  double t_compare = 0.05;                             // hydro-compare
  double kappa = 2.0;                                  // energy
  std::vector<std::string> defaulted;
};

/// All recognized configuration keys (the CLI mirrors them as --<key> flags).
const std::vector<std::string>& config_keys();

/// Validates a flat key=value map against the schema above; unknown keys and
/// constraint violations are rejected with the offending key named.
RunSpec parse_config(const std::map<std::string, std::string>& kv);

/// Flat `key = value` UTF-8 file with '#' comments.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// The sweep's alpha values, ascending (geometric grid or explicit list).
std::vector<double> alpha_grid(const RunSpec& spec);

struct SweepRow {
  double alpha = 0.0;
  double dist_to_neumann = 0.0;
  double dist_to_periodic = 0.0;
  double energy_total = 0.0;
  double mass_drift = 0.0;
  double max_robin_residual = 0.0;
};

/// For each alpha: solve the beta=1 system and measure the space-time L2
/// distances to the blocked-bond (Neumann) and all-ones (periodic) solutions,
/// plus energy and conservation diagnostics. Rows ascend in alpha.
std::vector<SweepRow> sweep_alpha(const RunSpec& spec);

/// Distance between the two reference solutions themselves (triangle checks).
double reference_distance(const RunSpec& spec);

struct HydroRow {
  int n = 0;
  double beta = 0.0;
  double alpha = 0.0;
  int h_index = 0;
  double t = 0.0;
  double discrepancy = 0.0;
  double stderr_ = 0.0;
  bool underpowered = false;
};

/// Test functions paired against the empirical measure: index -> (name, H).
const std::vector<std::pair<std::string, std::function<double(double)>>>& hydro_test_functions();

/// Ensemble means against the regime's limiting equation: beta < 1 compares
/// to the periodic solution, beta = 1 to the alpha-coupled one, beta > 1
/// (including the blocked bond) to the Neumann solution.
std::vector<HydroRow> hydro_compare(const RunSpec& spec);

/// max over dyadic frame pairs of |<rho_t,H> - <rho_s,H>| / sqrt(t-s).
double holder_check(const Trajectory& traj, const Field& H);

struct GreenCheckRow {
  double alpha = 0.0;
  int n = 0;
  double symmetry = 0.0;             // worst |<g1,Ag2> - <g2,Ag1>|
  double min_quadratic_form = 0.0;   // most negative <g,Ag> observed
  double left_inverse_residual = 0.0;
  double boundary_residual = 0.0;    // property-(b) deviation on smooth inputs
};

std::vector<GreenCheckRow> green_check(const RunSpec& spec);

std::vector<EnergyReport> energy_sweep(const RunSpec& spec);

/// CSV emitters (metadata prologue + header + rows). Deterministic functions
/// of their inputs, so identical RunSpecs give byte-identical files.
std::string trajectory_csv(const RunSpec& spec, const Trajectory& traj);
std::string sweep_csv(const RunSpec& spec, const std::vector<SweepRow>& rows);
std::string hydro_csv(const RunSpec& spec, const std::vector<HydroRow>& rows);
std::string green_check_csv(const RunSpec& spec, const std::vector<GreenCheckRow>& rows);
std::string energy_csv(const RunSpec& spec, const std::vector<EnergyReport>& rows);
std::string ensemble_csv_long(const RunSpec& spec, const ReplicaSnapshots& snaps);
std::string ensemble_csv_aggregate(const RunSpec& spec, const EnsembleStats& stats);

/// Runs the configured experiment and writes its CSV; returns the output path.
std::string run_experiment(const RunSpec& spec);

/// splitmix64 finalizer, used to derive per-(n,beta) streams in hydro-compare.
std::uint64_t hash_mix(std::uint64_t v);

}  // namespace slowbond

#endif
