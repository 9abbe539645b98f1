#include "slowbond/ssep.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace slowbond {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : state) w = splitmix64(x);
}

Xoshiro256pp Xoshiro256pp::for_replica(std::uint64_t seed, std::uint64_t replica) {
  std::uint64_t x = seed;
  const std::uint64_t mixed = splitmix64(x) ^ ((replica + 1) * 0x9E3779B97F4A7C15ull);
  return Xoshiro256pp(mixed);
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl(state[0] + state[3], 23) + state[0];
  const std::uint64_t t = state[1] << 17;
  state[2] ^= state[0];
  state[3] ^= state[1];
  state[1] ^= state[2];
  state[0] ^= state[3];
  state[2] ^= t;
  state[3] = rotl(state[3], 45);
  return result;
}

double Xoshiro256pp::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  return -std::log1p(-uniform01()) / rate;
}

AliasTable::AliasTable(const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw std::invalid_argument("AliasTable: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("AliasTable: weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("AliasTable: total weight must be > 0");

  prob.assign(weights.size(), 0.0);
  alias.assign(weights.size(), 0);
  std::vector<double> scaled(weights.size());
  std::vector<int> small, large;
  for (int i = 0; i < n; ++i) {
    scaled[i] = weights[i] * n / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    small.pop_back();
    const int l = large.back();
    prob[s] = scaled[s];
    alias[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (int i : large) prob[i] = 1.0;
  for (int i : small) prob[i] = 1.0;  // numerical leftovers
}

int AliasTable::sample(Xoshiro256pp& rng) const {
  const int n = static_cast<int>(prob.size());
  int k = static_cast<int>(rng.uniform01() * n);
  if (k >= n) k = n - 1;
  return rng.uniform01() < prob[k] ? k : alias[k];
}

int LatticeConfig::particle_count() const {
  int c = 0;
  for (auto v : eta) c += v;
  return c;
}

LatticeConfig init_bernoulli(const std::function<double(double)>& profile, int n,
                             Xoshiro256pp& rng) {
  if (n < 2) throw std::invalid_argument("init_bernoulli: n must be >= 2");
  LatticeConfig config;
  config.n = n;
  config.eta.resize(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    const double p = profile(static_cast<double>(x) / n);
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("init_bernoulli: profile values must lie in [0,1]");
    config.eta[x] = rng.uniform01() < p ? 1 : 0;
  }
  return config;
}

LatticeConfig init_bernoulli(const std::function<double(double)>& profile, int n,
                             std::uint64_t seed) {
  Xoshiro256pp rng = Xoshiro256pp::for_replica(seed, 0);
  return init_bernoulli(profile, n, rng);
}

ChainResult simulate(const LatticeConfig& init, const BondRates& rates,
                     const std::vector<double>& macro_times, Xoshiro256pp& rng) {
  const int n = init.n;
  if (n != rates.n) throw std::invalid_argument("simulate: rates dimension mismatch");
  if (static_cast<int>(init.eta.size()) != n)
    throw std::invalid_argument("simulate: configuration length mismatch");
  for (size_t i = 0; i < macro_times.size(); ++i) {
    if (macro_times[i] < 0.0 || (i > 0 && macro_times[i] < macro_times[i - 1]))
      throw std::invalid_argument("simulate: snapshot times must be sorted and >= 0");
  }

  ChainResult result;
  result.times = macro_times;
  result.snapshots.reserve(macro_times.size());

  double total_rate = 0.0;
  for (double c : rates.conductance) total_rate += c;

  LatticeConfig config = init;
  const double n2 = static_cast<double>(n) * n;

  if (!(total_rate > 0.0)) {
    for (size_t i = 0; i < macro_times.size(); ++i) result.snapshots.push_back(config);
    return result;
  }

  const AliasTable table(rates.conductance);
  double event_micro = rng.exponential(total_rate);
  for (double t_macro : macro_times) {
    const double target_micro = t_macro * n2;
    while (event_micro <= target_micro) {
      const int bond = table.sample(rng);
      const int next_site = bond + 1 == n ? 0 : bond + 1;
      if (bond == n - 1) {
        ++result.slow_bond_rings;
        if (config.eta[bond] != config.eta[next_site]) ++result.slow_bond_exchanges;
      }
      std::swap(config.eta[bond], config.eta[next_site]);
      ++result.total_events;
      event_micro += rng.exponential(total_rate);
    }
    result.snapshots.push_back(config);
  }
  return result;
}

ChainResult simulate(const LatticeConfig& init, const SimSpec& spec) {
  for (double t : spec.snapshot_times)
    if (t > spec.t_max * (1.0 + 1e-12))
      throw std::invalid_argument("simulate: snapshot time beyond t_max");
  const BondRates rates = build_conductances(spec.n, spec.alpha, spec.beta);
  Xoshiro256pp rng = Xoshiro256pp::for_replica(spec.seed, 0);
  return simulate(init, rates, spec.snapshot_times, rng);
}

double empirical_pairing(const LatticeConfig& config,
                         const std::function<double(double)>& H) {
  double s = 0.0;
  for (int x = 0; x < config.n; ++x)
    if (config.eta[x]) s += H(static_cast<double>(x) / config.n);
  return s / config.n;
}

std::pair<double, double> boxcar_averages(const LatticeConfig& config, double epsilon) {
  const int n = config.n;
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("boxcar_averages: epsilon must lie in (0, 1/2)");
  const int m = static_cast<int>(std::floor(epsilon * n));
  if (m < 1) throw std::invalid_argument("boxcar_averages: need epsilon * n >= 1");
  double left = 0.0, right = 0.0;
  for (int y = 1; y <= m; ++y) left += config.eta[y];
  for (int y = n - m; y < n; ++y) right += config.eta[y];
  return {left / m, right / m};
}

ReplicaSnapshots run_replicas(const SimSpec& spec, const std::function<double(double)>& profile,
                              int threads) {
  if (spec.replicas < 1) throw std::invalid_argument("run_replicas: replicas must be >= 1");
  if (threads < 1) threads = 1;
  const BondRates rates = build_conductances(spec.n, spec.alpha, spec.beta);
  for (double t : spec.snapshot_times)
    if (t > spec.t_max * (1.0 + 1e-12))
      throw std::invalid_argument("run_replicas: snapshot time beyond t_max");

  ReplicaSnapshots out;
  out.times = spec.snapshot_times;
  out.by_replica.resize(static_cast<size_t>(spec.replicas));

  std::atomic<int> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const int r = cursor.fetch_add(1);
      if (r >= spec.replicas) return;
      Xoshiro256pp rng = Xoshiro256pp::for_replica(spec.seed, static_cast<std::uint64_t>(r));
      LatticeConfig config = init_bernoulli(profile, spec.n, rng);
      out.by_replica[r] = simulate(config, rates, spec.snapshot_times, rng);
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

EnsembleStats aggregate(const ReplicaSnapshots& snaps) {
  const int R = static_cast<int>(snaps.by_replica.size());
  if (R < 2) throw std::invalid_argument("aggregate: need >= 2 replicas for standard errors");
  const size_t T = snaps.times.size();
  const int n = snaps.by_replica.front().snapshots.empty()
                    ? 0
                    : snaps.by_replica.front().snapshots.front().n;

  EnsembleStats stats;
  stats.times = snaps.times;
  stats.replicas = R;
  stats.mean.assign(T, std::vector<double>(static_cast<size_t>(n), 0.0));
  stats.stderr_.assign(T, std::vector<double>(static_cast<size_t>(n), 0.0));

  for (size_t t = 0; t < T; ++t) {
    for (int x = 0; x < n; ++x) {
      long long count = 0;  // eta is 0/1 so the sum determines the variance
      for (int r = 0; r < R; ++r) count += snaps.by_replica[r].snapshots[t].eta[x];
      const double m = static_cast<double>(count) / R;
      const double var = (static_cast<double>(count) - static_cast<double>(count) * m) / (R - 1);
      stats.mean[t][x] = m;
      stats.stderr_[t][x] = std::sqrt(var / R);
    }
  }
  return stats;
}

EnsembleStats ensemble_run(const SimSpec& spec, const std::function<double(double)>& profile,
                           int threads) {
  return aggregate(run_replicas(spec, profile, threads));
}

}  // namespace slowbond
