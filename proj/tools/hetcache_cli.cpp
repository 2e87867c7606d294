// Config-driven experiment runner: solves placement strategies, sweeps
// a model parameter, or Monte Carlo-checks the analytic evaluator, and
// writes CSV artifacts plus run metadata.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetcache/errors.hpp"
#include "hetcache/heuristics.hpp"
#include "hetcache/joint_solver.hpp"
#include "hetcache/local_solver.hpp"
#include "hetcache/network_model.hpp"
#include "hetcache/objective.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"
#include "hetcache/simulator.hpp"
#include "hetcache/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hetcache;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- config

struct Settings {
  json raw;

  std::size_t J = 0;
  std::string pop_kind = "zipf";
  double gamma = 1.0;
  double snr_db = 0.0;
  std::uint64_t pop_seed = 1;

  std::string model_kind = "ppp";
  unsigned M = 0;
  CompositionWeighting weighting = CompositionWeighting::Verbatim;
  std::vector<CacheTypeParams> types;

  std::vector<std::string> strategies;
  std::string strategy_file;  // simulate: load instead of solving

  double eps = 1e-12;
  double tol = 1e-10;

  std::uint64_t trials = 100000;
  std::uint64_t sim_seed = 1;
  SimMode sim_mode = SimMode::Counts;
  double sim_window = 0.0;

  std::string sweep_parameter;
  std::vector<double> sweep_values;
  bool sweep_simulate = false;

  fs::path out_dir = "out";
};

template <typename T>
T field(const json& j, const std::string& key, const T& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

Settings parse_settings(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  Settings s;
  try {
    in >> s.raw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }

  const json lib = field(s.raw, "library", json::object());
  s.J = field<std::size_t>(lib, "J", 0);
  if (s.J == 0) throw ConfigError("library.J must be a positive integer");
  const json pop = field(lib, "popularity", json::object());
  s.pop_kind = field<std::string>(pop, "kind", "zipf");
  if (s.pop_kind != "zipf" && s.pop_kind != "perturbed")
    throw ConfigError("popularity.kind must be 'zipf' or 'perturbed'");
  s.gamma = field(pop, "gamma", 1.0);
  s.snr_db = field(pop, "snr_db", 0.0);
  if (s.pop_kind == "perturbed" && !pop.contains("snr_db"))
    throw ConfigError("perturbed popularity requires popularity.snr_db");
  s.pop_seed = field<std::uint64_t>(pop, "seed", 1);

  const json model = field(s.raw, "model", json::object());
  s.model_kind = field<std::string>(model, "kind", "ppp");
  if (s.model_kind != "ppp" && s.model_kind != "m_or_none")
    throw ConfigError("model.kind must be 'ppp' or 'm_or_none'");
  s.M = field<unsigned>(model, "M", 0);
  const std::string wt = field<std::string>(model, "weighting", "verbatim");
  if (wt == "verbatim")
    s.weighting = CompositionWeighting::Verbatim;
  else if (wt == "uniform")
    s.weighting = CompositionWeighting::Uniform;
  else
    throw ConfigError("model.weighting must be 'verbatim' or 'uniform'");
  const json types = field(model, "types", json::array());
  if (!types.is_array() || types.empty())
    throw ConfigError("model.types must be a non-empty array");
  for (const json& t : types) {
    CacheTypeParams p;
    p.lambda = field(t, "lambda", 0.0);
    p.radius = field(t, "radius", 0.0);
    p.capacity = field<std::size_t>(t, "K", 0);
    s.types.push_back(p);
  }

  const json strat = field(s.raw, "strategy", json::object());
  if (strat.contains("names")) {
    s.strategies = field(strat, "names", std::vector<std::string>{});
  } else if (strat.contains("name")) {
    s.strategies = {field<std::string>(strat, "name", "")};
  }
  s.strategy_file = field<std::string>(strat, "file", "");

  const json num = field(s.raw, "numerics", json::object());
  s.eps = field(num, "eps", 1e-12);
  s.tol = field(num, "tol", 1e-10);

  const json sim = field(s.raw, "simulation", json::object());
  s.trials = field<std::uint64_t>(sim, "trials", 100000);
  s.sim_seed = field<std::uint64_t>(sim, "seed", 1);
  const std::string mode = field<std::string>(sim, "mode", "counts");
  if (mode == "counts")
    s.sim_mode = SimMode::Counts;
  else if (mode == "spatial")
    s.sim_mode = SimMode::Spatial;
  else
    throw ConfigError("simulation.mode must be 'counts' or 'spatial'");
  s.sim_window = field(sim, "window", 0.0);

  if (s.raw.contains("sweep")) {
    const json sweep = s.raw.at("sweep");
    if (sweep.contains("parameter") && sweep.at("parameter").is_array())
      throw ConfigError("sweep.parameter must name exactly one axis");
    s.sweep_parameter = field<std::string>(sweep, "parameter", "");
    s.sweep_values = field(sweep, "values", std::vector<double>{});
    s.sweep_simulate = field(sweep, "simulate", false);
  }

  const json out = field(s.raw, "output", json::object());
  s.out_dir = field<std::string>(out, "directory", "out");
  return s;
}

PopularityVector build_popularity(const Settings& s) {
  auto a = zipf(s.J, s.gamma);
  if (s.pop_kind == "perturbed")
    a = perturb(a, s.snr_db, s.pop_seed).popularity;
  return a;
}

DeploymentModel build_model(const Settings& s) {
  DeploymentModel m;
  if (s.model_kind == "ppp")
    m = PppModel{s.types};
  else
    m = MOrNoneModel{s.types, s.M, s.weighting};
  validate_model(m, s.J);
  return m;
}

// ---------------------------------------------------------- strategies

// Sequential-opt for tier ell: earlier tiers frozen at their built
// rows, later tiers absent. Absence is expressed by restricting the
// model to types 0..ell.
std::vector<double> sequential_opt(std::size_t ell,
                                   const std::vector<std::vector<double>>& built,
                                   const DeploymentModel& model,
                                   const PopularityVector& a,
                                   const LocalSolveOptions& opts) {
  const auto& types = model_types(model);
  std::vector<CacheTypeParams> head(types.begin(),
                                    types.begin() + static_cast<long>(ell) + 1);
  DeploymentModel sub;
  if (std::holds_alternative<PppModel>(model) || ell == 0)
    sub = PppModel{head};
  else {
    const auto& mon = std::get<MOrNoneModel>(model);
    sub = MOrNoneModel{head, mon.M, mon.weighting};
  }
  std::vector<std::vector<double>> rows(built.begin(),
                                        built.begin() + static_cast<long>(ell));
  rows.push_back(h1(types[ell].capacity, a.size()));  // placeholder
  std::vector<std::size_t> caps;
  for (const auto& t : head) caps.push_back(t.capacity);
  LocalProblem p{ell, PlacementStrategy::from_rows(std::move(rows), caps), sub,
                 a};
  return solve_local(p, opts);
}

PlacementStrategy build_strategy(const std::string& name,
                                 const DeploymentModel& model,
                                 const PopularityVector& a,
                                 const Settings& s) {
  const auto& types = model_types(model);
  const std::size_t L = types.size();
  const std::size_t J = a.size();
  LocalSolveOptions opts;
  opts.eps = s.eps;
  opts.tol = s.tol;

  if (name == "joint") {
    if (!std::holds_alternative<PppModel>(model))
      throw ConfigError("strategy 'joint' requires a PPP model");
    return solve_joint_ppp(a, types);
  }
  if (name == "loa") {
    LoaOptions lo;
    lo.local = opts;
    return loa(model, a, std::nullopt, lo);
  }

  // Per-tier names, optionally compound "macro/helpers".
  std::string macro = name, helpers = name;
  if (const auto slash = name.find('/'); slash != std::string::npos) {
    macro = name.substr(0, slash);
    helpers = name.substr(slash + 1);
    if (helpers.find('/') != std::string::npos)
      throw ConfigError("strategy name has more than one '/': " + name);
  }
  const auto check = [&](const std::string& part) {
    if (part != "h1" && part != "h2" && part != "h3" && part != "opt")
      throw ConfigError("unknown strategy name: " + name);
  };
  check(macro);
  check(helpers);

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> caps;
  for (std::size_t l = 0; l < L; ++l) {
    const std::string& part = l == 0 ? macro : helpers;
    const std::size_t K = types[l].capacity;
    std::vector<double> row;
    if (part == "h1") {
      row = h1(K, J);
    } else if (part == "h2") {
      std::vector<std::size_t> prior;
      for (std::size_t i = 0; i < l; ++i) prior.push_back(types[i].capacity);
      row = h2(prior, K, J);
    } else if (part == "h3") {
      if (l == 0)
        row = h1(K, J);
      else if (const auto* mon = std::get_if<MOrNoneModel>(&model))
        row = h3_mornone(mon->M, types[0].intensity(), K, J);
      else
        row = h3(types[0], types[l], J);
    } else {  // opt
      row = sequential_opt(l, rows, model, a, opts);
    }
    rows.push_back(std::move(row));
    caps.push_back(K);
  }
  return PlacementStrategy::from_rows(std::move(rows), std::move(caps));
}

// --------------------------------------------------------------- output

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot write file: " + p.string());
  return f;
}

void write_strategy_csv(const fs::path& p, const PlacementStrategy& B) {
  auto f = open_out(p);
  f << "type";
  for (std::size_t j = 1; j <= B.files(); ++j) f << ",f" << j;
  f << "\n";
  for (std::size_t l = 0; l < B.tiers(); ++l) {
    f << (l + 1);
    for (double b : B.row(l)) f << ',' << fmt(b);
    f << "\n";
  }
}

PlacementStrategy load_strategy_csv(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw IoError("cannot open strategy file: " + p.string());
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty strategy file: " + p.string());
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> caps;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // tier label
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    double sum = 0.0;
    for (double b : row) sum += b;
    rows.push_back(std::move(row));
    caps.push_back(static_cast<std::size_t>(std::llround(sum)));
  }
  return PlacementStrategy::from_rows(std::move(rows), std::move(caps));
}

void write_metadata(const fs::path& dir, const std::string& command,
                    const Settings& s) {
  json meta;
  meta["tool"] = "hetcache";
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["config"] = s.raw;
  auto f = open_out(dir / "metadata.json");
  f << meta.dump(2) << "\n";
}

// --------------------------------------------------------------- solve

int cmd_solve(const Settings& s, bool quiet) {
  if (s.strategies.size() != 1)
    throw ConfigError("solve requires exactly one strategy.name");
  const auto a = build_popularity(s);
  const auto model = build_model(s);
  const auto B = build_strategy(s.strategies[0], model, a, s);
  const auto ev = miss_general(B, model, a, s.eps);

  fs::create_directories(s.out_dir);
  write_strategy_csv(s.out_dir / "strategy.csv", B);

  auto f = open_out(s.out_dir / "summary.csv");
  f << "strategy,hit,miss,nu_bar,s1,s2\n";
  f << s.strategies[0] << ',' << fmt(ev.hit) << ',' << fmt(ev.miss);
  if (s.strategies[0] == "joint") {
    const auto sol = solve_intensities(a, model_types(model));
    f << ',' << fmt(sol.level.nu_bar) << ',' << sol.level.s1 << ','
      << sol.level.s2 << "\n";
  } else {
    f << ",,,\n";
  }
  f.close();
  write_metadata(s.out_dir, "solve", s);
  if (!quiet)
    std::cout << "strategy " << s.strategies[0] << ": hit " << fmt(ev.hit)
              << "\n";
  return 0;
}

// --------------------------------------------------------------- sweep

Settings apply_sweep(const Settings& base, const std::string& param,
                     double value) {
  Settings s = base;
  if (param == "lambda_ratio") {
    if (s.types.size() < 2)
      throw ConfigError("sweep lambda_ratio needs at least two types");
    s.types[1].lambda = value * s.types[0].lambda;
  } else if (param == "radius2") {
    if (s.types.size() < 2)
      throw ConfigError("sweep radius2 needs at least two types");
    s.types[1].radius = value;
  } else if (param == "K2") {
    if (s.types.size() < 2)
      throw ConfigError("sweep K2 needs at least two types");
    s.types[1].capacity = static_cast<std::size_t>(std::llround(value));
  } else if (param == "M") {
    s.M = static_cast<unsigned>(std::llround(value));
  } else if (param == "snr_db") {
    s.snr_db = value;
    s.pop_kind = "perturbed";
  } else {
    throw ConfigError("unknown sweep parameter: " + param);
  }
  return s;
}

struct SweepRow {
  double value;
  std::string strategy;
  double hit;
  double sim_hit = 0.0;
  double sim_stderr = 0.0;
};

int cmd_sweep(const Settings& s, bool quiet, unsigned threads) {
  if (s.sweep_parameter.empty())
    throw ConfigError("sweep requires sweep.parameter");
  if (s.strategies.empty())
    throw ConfigError("sweep requires strategy.name or strategy.names");

  std::vector<std::pair<double, std::string>> points;
  for (double v : s.sweep_values)
    for (const auto& name : s.strategies) points.emplace_back(v, name);

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, points.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= points.size()) return;
        try {
          const Settings ps = apply_sweep(s, s.sweep_parameter, points[i].first);
          const auto a = build_popularity(ps);
          const auto model = build_model(ps);
          const auto B = build_strategy(points[i].second, model, a, ps);
          SweepRow row{points[i].first, points[i].second,
                       miss_general(B, model, a, ps.eps).hit};
          if (ps.sweep_simulate) {
            SimConfig sc;
            sc.trials = ps.trials;
            sc.seed = ps.sim_seed;
            sc.mode = ps.sim_mode;
            sc.window = ps.sim_window;
            sc.eps = ps.eps;
            const auto r = simulate_hit(model, B, a, sc);
            row.sim_hit = r.hit;
            row.sim_stderr = r.stderr_;
          }
          rows[i] = std::move(row);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    return std::tie(x.value, x.strategy) < std::tie(y.value, y.strategy);
  });

  fs::create_directories(s.out_dir);
  auto f = open_out(s.out_dir / "sweep.csv");
  f << "parameter,value,strategy,hit";
  if (s.sweep_simulate) f << ",sim_hit,sim_stderr";
  f << "\n";
  for (const auto& r : rows) {
    f << s.sweep_parameter << ',' << fmt(r.value) << ',' << r.strategy << ','
      << fmt(r.hit);
    if (s.sweep_simulate) f << ',' << fmt(r.sim_hit) << ',' << fmt(r.sim_stderr);
    f << "\n";
  }
  f.close();
  write_metadata(s.out_dir, "sweep", s);
  if (!quiet)
    std::cout << "sweep " << s.sweep_parameter << ": " << rows.size()
              << " rows\n";
  return 0;
}

// ------------------------------------------------------------ simulate

int cmd_simulate(const Settings& s, bool quiet, unsigned threads) {
  const auto a = build_popularity(s);
  const auto model = build_model(s);

  std::string label;
  std::optional<PlacementStrategy> B;
  if (!s.strategy_file.empty()) {
    B = load_strategy_csv(s.strategy_file);
    label = s.strategy_file;
  } else if (s.strategies.size() == 1) {
    B = build_strategy(s.strategies[0], model, a, s);
    label = s.strategies[0];
  } else {
    throw ConfigError("simulate requires strategy.name or strategy.file");
  }

  const auto ev = miss_general(*B, model, a, s.eps);
  SimConfig sc;
  sc.trials = s.trials;
  sc.seed = s.sim_seed;
  sc.mode = s.sim_mode;
  sc.window = s.sim_window;
  sc.eps = s.eps;
  sc.threads = threads;
  const auto r = simulate_hit(model, *B, a, sc);
  const double z = r.stderr_ > 0.0 ? (r.hit - ev.hit) / r.stderr_ : 0.0;

  fs::create_directories(s.out_dir);
  auto f = open_out(s.out_dir / "simulate.csv");
  f << "strategy,analytic_hit,sim_hit,sim_stderr,z,trials\n";
  f << label << ',' << fmt(ev.hit) << ',' << fmt(r.hit) << ','
    << fmt(r.stderr_) << ',' << fmt(z) << ',' << r.trials << "\n";
  f.close();
  write_metadata(s.out_dir, "simulate", s);
  if (!quiet)
    std::cout << "simulate " << label << ": analytic " << fmt(ev.hit)
              << " empirical " << fmt(r.hit) << " +- " << fmt(r.stderr_)
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal probabilistic content placement for heterogeneous "
               "cellular cache networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  bool quiet = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--config", config_path, "Path to the JSON config")
      ->required();
  app.add_option("--output", output_dir, "Output directory (overrides config)");
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_option("--threads", threads,
                 "Worker threads (wall time only, never results)");

  auto* solve = app.add_subcommand("solve", "Solve one placement strategy");
  auto* sweep = app.add_subcommand("sweep", "Sweep one model parameter");
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo check of a strategy");
  for (auto* sub : {solve, sweep, simulate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Settings s = parse_settings(config_path);
    if (!output_dir.empty()) s.out_dir = output_dir;
    if (threads == 0) threads = 1;
    if (solve->parsed()) return cmd_solve(s, quiet);
    if (sweep->parsed()) return cmd_sweep(s, quiet, threads);
    if (simulate->parsed()) return cmd_simulate(s, quiet, threads);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
}
