#include "slowbond/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slowbond/csv.hpp"
#include "slowbond/profiles.hpp"

namespace slowbond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_key(const std::string& key, const std::string& constraint) {
  throw std::invalid_argument("key '" + key + "': " + constraint);
}

double parse_double(const std::string& key, const std::string& text, bool allow_inf = false) {
  std::string t = text;
  if (allow_inf && (t == "inf" || t == "infinity" || t == "+inf")) return kInf;
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) bad_key(key, "not a number: '" + text + "'");
  if (!allow_inf && std::isinf(v)) bad_key(key, "must be finite");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') bad_key(key, "not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') bad_key(key, "not an unsigned integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  bad_key(key, "expected true/false");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    items.push_back(item.substr(a, b - a + 1));
  }
  return items;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  const auto b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "n",       "alpha",          "alpha-min",      "alpha-max",
      "alphas-per-decade",     "alpha-list",     "beta",           "dt",
      "theta",      "T",       "snapshot-stride", "rannacher-steps", "profile",
      "profile-c",  "seed",    "replicas",       "epsilon",        "threads",
      "output",     "snapshot-times",            "aggregate",      "n-list",
      "beta-list",  "t-compare",                 "kappa"};
  return keys;
}

namespace {
const std::vector<std::string>& schema_keys() { return config_keys(); }
}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::solve: return "solve";
    case Experiment::sweep_alpha: return "sweep-alpha";
    case Experiment::simulate: return "simulate";
    case Experiment::hydro_compare: return "hydro-compare";
    case Experiment::green_check: return "green-check";
    case Experiment::energy: return "energy";
  }
  return "unknown";
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                 ": empty key");
    if (kv.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

RunSpec parse_config(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    (void)value;
    if (std::find(schema_keys().begin(), schema_keys().end(), key) == schema_keys().end())
      throw std::invalid_argument("unknown key '" + key + "'");
  }

  RunSpec spec;
  auto has = [&](const char* key) { return kv.count(key) > 0; };
  auto get = [&](const char* key) { return kv.at(key); };

  if (has("experiment")) {
    const std::string name = get("experiment");
    bool found = false;
    for (Experiment e : {Experiment::solve, Experiment::sweep_alpha, Experiment::simulate,
                         Experiment::hydro_compare, Experiment::green_check, Experiment::energy}) {
      if (experiment_name(e) == name) {
        spec.experiment = e;
        found = true;
        break;
      }
    }
    if (!found) bad_key("experiment", "unknown experiment '" + name + "'");
  }

  if (has("n")) spec.n = static_cast<int>(parse_int("n", get("n")));
  if (spec.n < 2) bad_key("n", "must be >= 2");

  if (has("alpha")) spec.alpha = parse_double("alpha", get("alpha"));
  if (!(spec.alpha > 0.0)) bad_key("alpha", "must be > 0");

  if (has("alpha-min")) spec.alpha_min = parse_double("alpha-min", get("alpha-min"));
  if (!(spec.alpha_min > 0.0)) bad_key("alpha-min", "must be > 0");
  if (has("alpha-max")) spec.alpha_max = parse_double("alpha-max", get("alpha-max"));
  if (!(spec.alpha_max >= spec.alpha_min)) bad_key("alpha-max", "must be >= alpha-min");
  if (has("alphas-per-decade"))
    spec.alphas_per_decade = static_cast<int>(parse_int("alphas-per-decade", get("alphas-per-decade")));
  if (spec.alphas_per_decade < 1) bad_key("alphas-per-decade", "must be >= 1");

  if (has("alpha-list")) {
    for (const std::string& item : split_list(get("alpha-list"))) {
      const double a = parse_double("alpha-list", item);
      if (!(a > 0.0)) bad_key("alpha-list", "entries must be > 0");
      spec.alpha_list.push_back(a);
    }
    std::sort(spec.alpha_list.begin(), spec.alpha_list.end());
    if (spec.alpha_list.empty()) bad_key("alpha-list", "must not be empty");
  }

  if (has("beta")) spec.beta = parse_double("beta", get("beta"), /*allow_inf=*/true);
  if (spec.beta < 0.0) bad_key("beta", "must be in [0, inf]");

  if (has("dt")) {
    spec.dt = parse_double("dt", get("dt"));
    if (!(spec.dt > 0.0)) bad_key("dt", "must be > 0");
  }
  if (has("theta")) spec.theta = parse_double("theta", get("theta"));
  if (spec.theta < 0.0 || spec.theta > 1.0) bad_key("theta", "must be in [0,1]");
  if (has("T")) spec.T = parse_double("T", get("T"));
  if (!(spec.T > 0.0)) bad_key("T", "must be > 0");

  if (has("snapshot-stride"))
    spec.snapshot_stride = static_cast<int>(parse_int("snapshot-stride", get("snapshot-stride")));
  if (spec.snapshot_stride < 1) bad_key("snapshot-stride", "must be >= 1");
  if (has("rannacher-steps"))
    spec.rannacher_steps = static_cast<int>(parse_int("rannacher-steps", get("rannacher-steps")));
  if (spec.rannacher_steps < 0) bad_key("rannacher-steps", "must be >= 0");

  if (has("profile")) spec.profile = get("profile");
  if (std::find(profile_names().begin(), profile_names().end(), spec.profile) ==
      profile_names().end())
    bad_key("profile", "unknown profile '" + spec.profile + "'");
  if (has("profile-c")) spec.profile_c = parse_double("profile-c", get("profile-c"));

  if (has("seed")) spec.seed = parse_u64("seed", get("seed"));
  if (has("replicas")) spec.replicas = static_cast<int>(parse_int("replicas", get("replicas")));
  if (spec.replicas < 1) bad_key("replicas", "must be >= 1");
  if (has("epsilon")) spec.epsilon = parse_double("epsilon", get("epsilon"));
  if (!(spec.epsilon > 0.0 && spec.epsilon < 0.5)) bad_key("epsilon", "must be in (0, 1/2)");
  if (has("threads")) spec.threads = static_cast<int>(parse_int("threads", get("threads")));
  if (spec.threads < 1) bad_key("threads", "must be >= 1");
  if (has("output")) spec.output = get("output");

  if (has("snapshot-times")) {
    for (const std::string& item : split_list(get("snapshot-times")))
      spec.snapshot_times.push_back(parse_double("snapshot-times", item));
    std::sort(spec.snapshot_times.begin(), spec.snapshot_times.end());
    for (double t : spec.snapshot_times)
      if (t < 0.0 || t > spec.T * (1.0 + 1e-12))
        bad_key("snapshot-times", "entries must lie in [0, T]");
  }
  if (has("aggregate")) spec.aggregate = parse_bool("aggregate", get("aggregate"));

  if (has("n-list")) {
    spec.n_list.clear();
    for (const std::string& item : split_list(get("n-list"))) {
      const int v = static_cast<int>(parse_int("n-list", item));
      if (v < 2) bad_key("n-list", "entries must be >= 2");
      spec.n_list.push_back(v);
    }
    if (spec.n_list.empty()) bad_key("n-list", "must not be empty");
  }
  if (has("beta-list")) {
    for (const std::string& item : split_list(get("beta-list"))) {
      const double v = parse_double("beta-list", item, /*allow_inf=*/true);
      if (v < 0.0) bad_key("beta-list", "entries must be in [0, inf]");
      spec.beta_list.push_back(v);
    }
    if (spec.beta_list.empty()) bad_key("beta-list", "must not be empty");
  }
  if (has("t-compare")) spec.t_compare = parse_double("t-compare", get("t-compare"));
  if (!(spec.t_compare > 0.0)) bad_key("t-compare", "must be > 0");
  if (has("kappa")) spec.kappa = parse_double("kappa", get("kappa"));
  if (!(spec.kappa > 0.0)) bad_key("kappa", "must be > 0");

  // Resolve remaining defaults and record everything the user left unset.
  // Default dt: at most one cell width, chosen so T is an exact multiple.
  if (spec.dt == 0.0) spec.dt = spec.T / std::ceil(spec.T * spec.n - 1e-12);
  if (spec.output.empty()) spec.output = experiment_name(spec.experiment) + ".csv";
  if (spec.snapshot_times.empty()) spec.snapshot_times = {spec.T};
  if (spec.beta_list.empty()) spec.beta_list = {0.5, 1.0, 2.0, kInf};
  for (const std::string& key : schema_keys())
    if (!kv.count(key)) spec.defaulted.push_back(key);
  return spec;
}

std::vector<double> alpha_grid(const RunSpec& spec) {
  if (!spec.alpha_list.empty()) return spec.alpha_list;
  std::vector<double> grid;
  const double lo = std::log10(spec.alpha_min);
  const double hi = std::log10(spec.alpha_max);
  const int steps = static_cast<int>(std::llround((hi - lo) * spec.alphas_per_decade));
  for (int k = 0; k <= steps; ++k)
    grid.push_back(std::pow(10.0, lo + static_cast<double>(k) / spec.alphas_per_decade));
  return grid;
}

namespace {

double mass_drift_stat(const Trajectory& traj) {
  const Field& f0 = traj.frames.front();
  const double m0 = mass(f0);
  double l1 = 0.0;
  for (double v : f0.values) l1 += std::abs(v);
  l1 *= f0.grid.h();
  const double denom = std::max(std::abs(m0), l1);
  double worst = 0.0;
  for (const Field& f : traj.frames) worst = std::max(worst, std::abs(mass(f) - m0));
  return denom > 0.0 ? worst / denom : worst;
}

// Frame 0 is skipped: initial data need not satisfy the boundary coupling
// (the jump profile deliberately violates it), so its residual is not a
// solver diagnostic.
double max_abs_residual(const std::vector<std::pair<double, double>>& rr) {
  double worst = 0.0;
  for (size_t k = 1; k < rr.size(); ++k)
    worst = std::max({worst, std::abs(rr[k].first), std::abs(rr[k].second)});
  return worst;
}

SolverSpec solver_spec_of(const RunSpec& spec) {
  SolverSpec ss;
  ss.theta = spec.theta;
  ss.dt = spec.dt;
  ss.T = spec.T;
  ss.snapshot_stride = spec.snapshot_stride;
  ss.rannacher_steps = spec.rannacher_steps;
  return ss;
}

}  // namespace

std::vector<SweepRow> sweep_alpha(const RunSpec& spec) {
  const auto prof = make_profile(spec.profile, spec.profile_c);
  const SolverSpec ss = solver_spec_of(spec);
  const Trajectory neumann = solve(prof, build_conductances(spec.n, 1.0, kInf), ss);
  const Trajectory periodic = solve(prof, build_conductances(spec.n, 1.0, 0.0), ss);

  std::vector<SweepRow> rows;
  for (double a : alpha_grid(spec)) {
    const Trajectory robin = [&] {
      try {
        return solve(prof, build_conductances(spec.n, a, 1.0), ss);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep-alpha aborted at alpha=" + g17(a) + ": " + e.what());
      }
    }();
    SweepRow row;
    row.alpha = a;
    row.dist_to_neumann = spacetime_l2_distance(robin, neumann);
    row.dist_to_periodic = spacetime_l2_distance(robin, periodic);
    row.energy_total = energy_functional(robin, a).total;
    row.mass_drift = mass_drift_stat(robin);
    row.max_robin_residual = max_abs_residual(robin_bc_residual(robin, a));
    rows.push_back(row);
  }
  return rows;
}

double reference_distance(const RunSpec& spec) {
  const auto prof = make_profile(spec.profile, spec.profile_c);
  const SolverSpec ss = solver_spec_of(spec);
  const Trajectory neumann = solve(prof, build_conductances(spec.n, 1.0, kInf), ss);
  const Trajectory periodic = solve(prof, build_conductances(spec.n, 1.0, 0.0), ss);
  return spacetime_l2_distance(neumann, periodic);
}

const std::vector<std::pair<std::string, std::function<double(double)>>>& hydro_test_functions() {
  static const double pi = std::acos(-1.0);
  static const std::vector<std::pair<std::string, std::function<double(double)>>> fns = {
      {"one", [](double) { return 1.0; }},
      {"cos2pi", [](double u) { return std::cos(2.0 * pi * u); }},
      {"sin2pi", [](double u) { return std::sin(2.0 * pi * u); }},
      {"cospi", [](double u) { return std::cos(pi * u); }},
      {"parabola", [](double u) { return u * (1.0 - u); }},
  };
  return fns;
}

std::uint64_t hash_mix(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

std::vector<HydroRow> hydro_compare(const RunSpec& spec) {
  const auto prof = make_profile(spec.profile, spec.profile_c);
  const double t = spec.t_compare;
  std::vector<HydroRow> rows;

  int beta_index = 0;
  for (double beta : spec.beta_list) {
    for (int n : spec.n_list) {
      SimSpec sim;
      sim.n = n;
      sim.alpha = spec.alpha;
      sim.beta = beta;
      sim.t_max = t;
      sim.snapshot_times = {t};
      sim.seed = hash_mix(spec.seed ^ hash_mix((static_cast<std::uint64_t>(beta_index) << 32) ^
                                               static_cast<std::uint64_t>(n)));
      sim.replicas = spec.replicas;
      const ReplicaSnapshots snaps = run_replicas(sim, prof, spec.threads);

      // The regime's limiting equation: beta < 1 periodic, beta = 1 the
      // alpha-coupled system, beta > 1 (and the blocked bond) Neumann.
      double ref_beta, ref_alpha;
      if (beta < 1.0) {
        ref_beta = 0.0;
        ref_alpha = 1.0;
      } else if (beta == 1.0) {
        ref_beta = 1.0;
        ref_alpha = spec.alpha;
      } else {
        ref_beta = kInf;
        ref_alpha = 1.0;
      }
      const long long steps = std::max<long long>(2, std::llround(std::ceil(t * n)));
      SolverSpec ss;
      ss.theta = 0.5;
      ss.dt = t / static_cast<double>(steps);
      ss.T = t;
      ss.snapshot_stride = static_cast<int>(steps);
      ss.rannacher_steps = spec.rannacher_steps;
      const Trajectory ref = solve(prof, build_conductances(n, ref_alpha, ref_beta), ss);
      const Field& final_frame = ref.frames.back();

      const auto& fns = hydro_test_functions();
      for (size_t hi = 0; hi < fns.size(); ++hi) {
        const Field Hf = project_profile(fns[hi].second, Grid(n, Topology::torus));
        const double pde = l2_inner(final_frame, Hf);
        double sum = 0.0, sumsq = 0.0;
        for (const ChainResult& chain : snaps.by_replica) {
          const double v = empirical_pairing(chain.snapshots.front(), fns[hi].second);
          sum += v;
          sumsq += v * v;
        }
        const int R = spec.replicas;
        const double mean = sum / R;
        const double var = std::max(0.0, (sumsq - sum * mean) / (R - 1));
        const double se = std::sqrt(var / R);
        HydroRow row;
        row.n = n;
        row.beta = beta;
        row.alpha = spec.alpha;
        row.h_index = static_cast<int>(hi);
        row.t = t;
        row.discrepancy = std::abs(mean - pde);
        row.stderr_ = se;
        row.underpowered = se > row.discrepancy;
        rows.push_back(row);
      }
    }
    ++beta_index;
  }
  return rows;
}

double holder_check(const Trajectory& traj, const Field& H) {
  const size_t K = traj.frames.size();
  if (K < 16) throw std::invalid_argument("holder_check: need >= 16 frames");
  std::vector<double> pairing(K);
  for (size_t k = 0; k < K; ++k) pairing[k] = l2_inner(traj.frames[k], H);
  double best = 0.0;
  for (size_t gap = 1; gap < K; gap *= 2) {
    const double dt_gap = std::sqrt(static_cast<double>(gap) * traj.dt);
    for (size_t k = 0; k + gap < K; k += gap)
      best = std::max(best, std::abs(pairing[k + gap] - pairing[k]) / dt_gap);
  }
  return best;
}

namespace {

Field random_smooth_zero_mean(const Grid& grid, Xoshiro256pp& rng) {
  const double pi = std::acos(-1.0);
  const int modes = 6;
  std::vector<double> a(modes), b(modes);
  for (int k = 0; k < modes; ++k) {
    a[k] = 2.0 * rng.uniform01() - 1.0;
    b[k] = 2.0 * rng.uniform01() - 1.0;
  }
  Field g(grid, 0.0, 0.0);
  for (int x = 0; x < grid.n; ++x) {
    const double u = grid.center(x);
    double v = 0.0;
    for (int k = 0; k < modes; ++k)
      v += a[k] * std::cos(2.0 * pi * (k + 1) * u) + b[k] * std::sin(2.0 * pi * (k + 1) * u);
    g[x] = v;
  }
  return g;
}

Field random_rough_zero_mean(const Grid& grid, Xoshiro256pp& rng) {
  Field g(grid, 0.0, 0.0);
  for (int x = 0; x < grid.n; ++x) g[x] = 2.0 * rng.uniform01() - 1.0;
  double m = mass(g);
  for (double& v : g.values) v -= m;
  return g;
}

}  // namespace

std::vector<GreenCheckRow> green_check(const RunSpec& spec) {
  std::vector<GreenCheckRow> rows;
  const auto alphas = alpha_grid(spec);
  const double pi = std::acos(-1.0);
  for (size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    for (int n : spec.n_list) {
      const Grid grid(n, Topology::interval);
      Xoshiro256pp rng(hash_mix(spec.seed ^ hash_mix((static_cast<std::uint64_t>(ai) << 32) ^
                                                     static_cast<std::uint64_t>(n))));
      GreenCheckRow row;
      row.alpha = alpha;
      row.n = n;

      double worst_sym = 0.0;
      for (int trial = 0; trial < 4; ++trial) {
        const ZeroMeanField g1 = ZeroMeanField::centered(random_rough_zero_mean(grid, rng));
        const ZeroMeanField g2 = ZeroMeanField::centered(random_rough_zero_mean(grid, rng));
        const double lhs = l2_inner(g1.field, apply_inverse(g2, alpha));
        const double rhs = l2_inner(g2.field, apply_inverse(g1, alpha));
        worst_sym = std::max(worst_sym, std::abs(lhs - rhs));
      }
      row.symmetry = worst_sym;

      double min_q = std::numeric_limits<double>::infinity();
      for (int trial = 0; trial < 4; ++trial) {
        min_q = std::min(min_q, quadratic_form(
                                    ZeroMeanField::centered(random_rough_zero_mean(grid, rng)), alpha));
        min_q = std::min(min_q, quadratic_form(
                                    ZeroMeanField::centered(random_smooth_zero_mean(grid, rng)), alpha));
      }
      row.min_quadratic_form = min_q;

      const ZeroMeanField cosine = ZeroMeanField::centered(
          project_profile([pi](double u) { return std::cos(2.0 * pi * u); }, grid));
      row.left_inverse_residual = check_left_inverse(cosine, alpha);

      double worst_b = 0.0;
      for (int trial = 0; trial < 4; ++trial) {
        const ZeroMeanField g = ZeroMeanField::centered(random_smooth_zero_mean(grid, rng));
        const Field f = apply_inverse(g, alpha);
        const Field d = inverse_derivative(g, alpha);
        const double d0 = trace_left(d), d1 = trace_right(d);
        const double jump = alpha * (trace_left(f) - trace_right(f));
        worst_b = std::max({worst_b, std::abs(d0 - d1), std::abs(d0 - jump)});
      }
      row.boundary_residual = worst_b;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<EnergyReport> energy_sweep(const RunSpec& spec) {
  const auto prof = make_profile(spec.profile, spec.profile_c);
  const SolverSpec ss = solver_spec_of(spec);
  std::vector<EnergyReport> rows;
  for (double a : alpha_grid(spec)) {
    const Trajectory robin = solve(prof, build_conductances(spec.n, a, 1.0), ss);
    rows.push_back(energy_functional(robin, a, spec.kappa));
  }
  return rows;
}

namespace {

void common_metadata(CsvBuilder& csv, const RunSpec& spec) {
  csv.metadata("experiment", experiment_name(spec.experiment));
  csv.metadata("n", static_cast<std::int64_t>(spec.n));
  csv.metadata("profile", spec.profile);
  if (spec.profile == "constant") csv.metadata("profile-c", spec.profile_c);
  std::string defaulted;
  for (const std::string& key : spec.defaulted) {
    // Parallelism and output location do not affect the data; keep them out
    // so equal runs at different thread counts emit identical bytes.
    if (key == "threads" || key == "output") continue;
    if (!defaulted.empty()) defaulted += ",";
    defaulted += key;
  }
  csv.metadata("defaulted", defaulted.empty() ? "none" : defaulted);
}

void solver_metadata(CsvBuilder& csv, const RunSpec& spec) {
  csv.metadata("dt", spec.dt);
  csv.metadata("theta", spec.theta);
  csv.metadata("T", spec.T);
  csv.metadata("snapshot-stride", static_cast<std::int64_t>(spec.snapshot_stride));
  csv.metadata("rannacher-steps", static_cast<std::int64_t>(spec.rannacher_steps));
}

std::string beta_text(double beta) { return std::isinf(beta) ? "inf" : g17(beta); }

}  // namespace

std::string trajectory_csv(const RunSpec& spec, const Trajectory& traj) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  csv.metadata("alpha", spec.alpha);
  csv.metadata("beta", beta_text(spec.beta));
  solver_metadata(csv, spec);
  std::vector<std::string> cols = {"t"};
  for (int x = 0; x < traj.grid.n; ++x) cols.push_back("v" + std::to_string(x));
  csv.header(cols);
  for (const Field& f : traj.frames) csv.raw_row(field_csv_row(f));
  return csv.str();
}

std::string sweep_csv(const RunSpec& spec, const std::vector<SweepRow>& rows) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  solver_metadata(csv, spec);
  csv.header({"alpha", "dist_to_neumann", "dist_to_periodic", "energy_total", "mass_drift",
              "max_robin_residual"});
  for (const SweepRow& r : rows)
    csv.row({r.alpha, r.dist_to_neumann, r.dist_to_periodic, r.energy_total, r.mass_drift,
             r.max_robin_residual});
  return csv.str();
}

std::string hydro_csv(const RunSpec& spec, const std::vector<HydroRow>& rows) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  csv.metadata("alpha", spec.alpha);
  csv.metadata("t-compare", spec.t_compare);
  csv.metadata("replicas", static_cast<std::int64_t>(spec.replicas));
  csv.metadata("seed", spec.seed);
  csv.metadata("rng", kRngAlgorithm);
  const auto& fns = hydro_test_functions();
  for (size_t i = 0; i < fns.size(); ++i)
    csv.metadata("H" + std::to_string(i), fns[i].first);
  csv.header({"n", "beta", "alpha", "H_index", "t", "discrepancy", "stderr", "underpowered"});
  for (const HydroRow& r : rows) {
    std::ostringstream line;
    line << r.n << "," << beta_text(r.beta) << "," << g17(r.alpha) << "," << r.h_index << ","
         << g17(r.t) << "," << g17(r.discrepancy) << "," << g17(r.stderr_) << ","
         << (r.underpowered ? 1 : 0);
    csv.raw_row(line.str());
  }
  return csv.str();
}

std::string green_check_csv(const RunSpec& spec, const std::vector<GreenCheckRow>& rows) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  csv.metadata("seed", spec.seed);
  csv.metadata("rng", kRngAlgorithm);
  csv.header({"alpha", "n", "symmetry", "min_quadratic_form", "left_inverse_residual",
              "boundary_residual"});
  for (const GreenCheckRow& r : rows) {
    std::ostringstream line;
    line << g17(r.alpha) << "," << r.n << "," << g17(r.symmetry) << ","
         << g17(r.min_quadratic_form) << "," << g17(r.left_inverse_residual) << ","
         << g17(r.boundary_residual);
    csv.raw_row(line.str());
  }
  return csv.str();
}

std::string energy_csv(const RunSpec& spec, const std::vector<EnergyReport>& rows) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  solver_metadata(csv, spec);
  csv.metadata("kappa", spec.kappa);
  csv.header({"alpha", "bulk", "atom", "total", "bound_check"});
  for (const EnergyReport& r : rows)
    csv.row({r.alpha, r.bulk, r.atom, r.total, r.bound_check});
  return csv.str();
}

std::string ensemble_csv_long(const RunSpec& spec, const ReplicaSnapshots& snaps) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  csv.metadata("alpha", spec.alpha);
  csv.metadata("beta", beta_text(spec.beta));
  csv.metadata("T", spec.T);
  csv.metadata("replicas", static_cast<std::int64_t>(spec.replicas));
  csv.metadata("seed", spec.seed);
  csv.metadata("rng", kRngAlgorithm);
  csv.header({"replica", "t", "x", "eta"});
  for (size_t r = 0; r < snaps.by_replica.size(); ++r) {
    const ChainResult& chain = snaps.by_replica[r];
    for (size_t ti = 0; ti < chain.times.size(); ++ti) {
      const LatticeConfig& config = chain.snapshots[ti];
      for (int x = 0; x < config.n; ++x) {
        std::ostringstream line;
        line << r << "," << g17(chain.times[ti]) << "," << x << ","
             << static_cast<int>(config.eta[x]);
        csv.raw_row(line.str());
      }
    }
  }
  return csv.str();
}

std::string ensemble_csv_aggregate(const RunSpec& spec, const EnsembleStats& stats) {
  CsvBuilder csv;
  common_metadata(csv, spec);
  csv.metadata("alpha", spec.alpha);
  csv.metadata("beta", beta_text(spec.beta));
  csv.metadata("T", spec.T);
  csv.metadata("replicas", static_cast<std::int64_t>(stats.replicas));
  csv.metadata("seed", spec.seed);
  csv.metadata("rng", kRngAlgorithm);
  csv.header({"t", "x", "mean", "stderr"});
  for (size_t ti = 0; ti < stats.times.size(); ++ti) {
    for (size_t x = 0; x < stats.mean[ti].size(); ++x) {
      std::ostringstream line;
      line << g17(stats.times[ti]) << "," << x << "," << g17(stats.mean[ti][x]) << ","
           << g17(stats.stderr_[ti][x]);
      csv.raw_row(line.str());
    }
  }
  return csv.str();
}

std::string run_experiment(const RunSpec& spec) {
  std::string content;
  switch (spec.experiment) {
    case Experiment::solve: {
      const auto prof = make_profile(spec.profile, spec.profile_c);
      const Trajectory traj =
          solve(prof, build_conductances(spec.n, spec.alpha, spec.beta), solver_spec_of(spec));
      content = trajectory_csv(spec, traj);
      break;
    }
    case Experiment::sweep_alpha:
      content = sweep_csv(spec, sweep_alpha(spec));
      break;
    case Experiment::simulate: {
      const auto prof = make_profile(spec.profile, spec.profile_c);
      SimSpec sim;
      sim.n = spec.n;
      sim.alpha = spec.alpha;
      sim.beta = spec.beta;
      sim.t_max = spec.T;
      sim.snapshot_times = spec.snapshot_times;
      sim.seed = spec.seed;
      sim.replicas = spec.replicas;
      const ReplicaSnapshots snaps = run_replicas(sim, prof, spec.threads);
      content = spec.aggregate ? ensemble_csv_aggregate(spec, aggregate(snaps))
                               : ensemble_csv_long(spec, snaps);
      break;
    }
    case Experiment::hydro_compare:
      content = hydro_csv(spec, hydro_compare(spec));
      break;
    case Experiment::green_check:
      content = green_check_csv(spec, green_check(spec));
      break;
    case Experiment::energy:
      content = energy_csv(spec, energy_sweep(spec));
      break;
  }
  write_text_file(spec.output, content);
  return spec.output;
}

}  // namespace slowbond
