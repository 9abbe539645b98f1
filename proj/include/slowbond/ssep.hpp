#ifndef SLOWBOND_SSEP_HPP
#define SLOWBOND_SSEP_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "slowbond/heat.hpp"

namespace slowbond {

/// xoshiro256++ with splitmix64 seeding. Replica streams are derived by the
/// documented mix  splitmix64(seed) xor (replica+1) * 0x9E3779B97F4A7C15,
/// expanded into the four state words by splitmix64. Fully portable: no
/// standard-library distributions are involved anywhere.
struct Xoshiro256pp {
  std::array<std::uint64_t, 4> state;

  explicit Xoshiro256pp(std::uint64_t seed);
  static Xoshiro256pp for_replica(std::uint64_t seed, std::uint64_t replica);

  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Exponential with the given rate (rate > 0).
  double exponential(double rate);
};

/// Algorithm identity recorded in every stochastic output's metadata.
inline constexpr const char* kRngAlgorithm =
    "xoshiro256++/splitmix64(seed,replica)";

/// Walker-Vose alias table: O(1) categorical sampling from fixed weights.
struct AliasTable {
  std::vector<double> prob;
  std::vector<int> alias;

  explicit AliasTable(const std::vector<double>& weights);
  int sample(Xoshiro256pp& rng) const;
};

/// Occupation variables eta(x) in {0,1} on the discrete torus.
struct LatticeConfig {
  int n = 0;
  std::vector<std::uint8_t> eta;

  int particle_count() const;
};

struct SimSpec {
  int n = 0;
  double alpha = 1.0;
  double beta = 1.0;
  double t_max = 0.0;                  // macroscopic horizon
  std::vector<double> snapshot_times;  // sorted, within [0, t_max]
  std::uint64_t seed = 0;
  int replicas = 1;
};

/// Independent draws eta(x) ~ Bernoulli(profile(x/n)). Profile values must lie
/// in [0,1].
LatticeConfig init_bernoulli(const std::function<double(double)>& profile, int n,
                             Xoshiro256pp& rng);
LatticeConfig init_bernoulli(const std::function<double(double)>& profile, int n,
                             std::uint64_t seed);

struct ChainResult {
  std::vector<double> times;  // macroscopic snapshot times
  std::vector<LatticeConfig> snapshots;
  std::uint64_t total_events = 0;
  std::uint64_t slow_bond_rings = 0;      // clock rings on bond {n-1, 0}
  std::uint64_t slow_bond_exchanges = 0;  // rings that swapped unequal values
};

/// Exact event-driven realization of the exchange dynamics: waiting times are
/// Exp(sum of rates) in microscopic time, the bond is drawn from the alias
/// table, and macroscopic time is microscopic time / n^2 (diffusive scaling).
/// Snapshots record the configuration at each requested macroscopic time.
ChainResult simulate(const LatticeConfig& init, const BondRates& rates,
                     const std::vector<double>& macro_times, Xoshiro256pp& rng);
ChainResult simulate(const LatticeConfig& init, const SimSpec& spec);

/// (1/n) sum_x H(x/n) eta(x).
double empirical_pairing(const LatticeConfig& config,
                         const std::function<double(double)>& H);

/// Box averages of m = floor(eps n) sites on each side of the slow bond:
/// left  = (1/m) sum_{y=1..m} eta(y)          (just right of the bond),
/// right = (1/m) sum_{y=n-m..n-1} eta(y)      (just left of it).
std::pair<double, double> boxcar_averages(const LatticeConfig& config, double epsilon);

/// All replica snapshots, kept per replica so that any statistic can be folded
/// deterministically by replica index afterwards.
struct ReplicaSnapshots {
  std::vector<double> times;
  std::vector<ChainResult> by_replica;
};

ReplicaSnapshots run_replicas(const SimSpec& spec, const std::function<double(double)>& profile,
                              int threads = 1);

/// Site-wise mean and standard error per snapshot time.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<std::vector<double>> mean;      // [time][site]
  std::vector<std::vector<double>> stderr_;   // [time][site]
  int replicas = 0;
};

EnsembleStats aggregate(const ReplicaSnapshots& snaps);

/// run_replicas + aggregate. Identical (seed, spec) gives bit-identical output
/// at any thread count: per-replica streams are independent and the fold is
/// ordered by replica index.
EnsembleStats ensemble_run(const SimSpec& spec, const std::function<double(double)>& profile,
                           int threads = 1);

}  // namespace slowbond

#endif
