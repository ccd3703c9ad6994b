#include <algorithm>
// Command-line front end: sample | sweep | threshold | diagonal.
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage error, 3 threshold not found.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "areaperc/area.hpp"
#include "areaperc/csv.hpp"
#include "areaperc/experiments.hpp"
#include "areaperc/format.hpp"
#include "areaperc/grcm.hpp"
#include "areaperc/percolation.hpp"

namespace {

using namespace areaperc;

constexpr const char* kVersion = "areaperc 0.1.0";

enum Exit { kOk = 0, kIo = 1, kUsage = 2, kNotFound = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<double> z, beta, z_min, z_max;
  double z_step = 0.01;
  std::vector<double> betas;
  double window = 100.0;
  std::size_t replicates = 1000;
  double chain_mult = 60.0;
  std::optional<std::uint64_t> steps;
  std::uint64_t seed = 1;
  std::string init = "empty";
  unsigned jobs = 0;
  std::string out;
  std::string curves;
  std::string runs;
  double p0 = 0.01;
  int refine = 0;
  std::size_t points = 6;
  int bisect = 0;
};

Metadata base_metadata(const std::string& command, const Options& o) {
  return {{"version", kVersion},
          {"command", command},
          {"window_side", format_double(o.window)},
          {"chain_mult", format_double(o.chain_mult)},
          {"replicates", std::to_string(o.replicates)},
          {"master_seed", std::to_string(o.seed)},
          {"init", o.init},
          {"seed_rule", "splitmix64(master, bits(beta), bits(z), replicate)"},
          {"adjacency", "closed balls: distance <= connection distance"},
          {"grcm_connection", "1"},
          {"percolation_rule",
           "component of B_1 covers the window center and touches the boundary"},
          {"boundary", "free"}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

int cmd_sample(const Options& o) {
  require(o.z && o.beta, "sample needs --z and --beta");
  require(!o.out.empty(), "sample needs --out");
  const AreaParams a{*o.z, *o.beta};
  GrcmParams g;
  try {
    g = params_from_area(a);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Window w(o.window);
  const InitialState init = initial_state_from_string(o.init);
  const std::uint64_t n_steps = o.steps ? *o.steps : chain_length(g, w, o.chain_mult);

  ChainState chain(w, g, o.seed);
  if (init == InitialState::dense) chain.add_poisson(g.rho);
  chain.run(n_steps);
  const PointConfiguration area =
      thin_to_area(chain.config(), chain.partition(), chain.weight(), chain.rng());

  write_snapshot(o.out, area);
  std::cout << "n=" << area.size() << " intensity=" << format_double(area.size() / w.area())
            << " percolates=" << (center_to_boundary(area) ? 1 : 0) << '\n';
  return kOk;
}

SweepConfig sweep_config(const Options& o) {
  SweepConfig c;
  c.betas = o.betas;
  if (o.beta && c.betas.empty()) c.betas = {*o.beta};
  require(!c.betas.empty(), "need --betas (or --beta)");
  require(o.z_min && o.z_max, "need --z-min and --z-max");
  c.z_min = *o.z_min;
  c.z_max = *o.z_max;
  c.z_step = o.z_step;
  c.window_side = o.window;
  c.replicates = o.replicates;
  c.chain_mult = o.chain_mult;
  c.master_seed = o.seed;
  c.init = init_policy_from_string(o.init);
  c.jobs = o.jobs;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

int cmd_sweep(const Options& o) {
  require(!o.out.empty(), "sweep needs --out");
  const SweepConfig c = sweep_config(o);
  const auto records = run_sweep(c);

  Metadata meta = base_metadata("sweep", o);
  std::string bs;
  for (double b : c.betas) bs += (bs.empty() ? "" : " ") + format_double(b);
  meta.emplace_back("betas", bs);
  meta.emplace_back("z_grid", format_double(c.z_min) + ":" + format_double(c.z_step) + ":" +
                                  format_double(c.z_max));
  auto os = open_output(o.out);
  write_runs_csv(os, records, meta);
  if (!o.curves.empty()) {
    auto cs = open_output(o.curves);
    write_curves_csv(cs, summarize(records), meta);
  }
  std::cout << "wrote " << records.size() << " records to " << o.out << '\n';
  return kOk;
}

void print_threshold_table(const std::vector<ThresholdRow>& rows) {
  std::cout << "beta\tz_threshold\n";
  for (const ThresholdRow& r : rows) {
    std::cout << format_double(r.beta) << '\t' << format_double(r.z_threshold) << '\n';
  }
}

std::vector<RunRecord> load_runs(const std::string& path) {
  auto is = open_input(path);
  return read_runs_csv(is);
}

std::vector<double> betas_in(const std::vector<RunRecord>& records) {
  std::vector<double> out;
  for (const RunRecord& r : records) {
    if (std::find(out.begin(), out.end(), r.beta) == out.end()) out.push_back(r.beta);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_threshold(const Options& o) {
  std::vector<ThresholdRow> rows;
  Metadata meta = base_metadata("threshold", o);
  meta.emplace_back("p0", format_double(o.p0));

  if (!o.runs.empty()) {
    const auto records = load_runs(o.runs);
    require(!records.empty(), "runs file has no records");
    meta.emplace_back("source", o.runs);
    const InitialState start = records.front().initial;
    for (double beta : betas_in(records)) {
      const auto curve = percolation_curve(records, beta, start);
      const auto est = estimate_threshold(curve, o.p0, beta);
      std::size_t reps = 0;
      for (const RunRecord& r : records) {
        if (r.beta == beta && r.z == est.z_threshold && r.initial == start) ++reps;
      }
      rows.push_back({beta, est.z_threshold, o.p0, est.z_step, o.window, reps});
    }
  } else {
    const SweepConfig c = sweep_config(o);
    require(c.init != InitPolicy::both, "threshold runs one initial state; use --init empty|dense");
    for (double beta : c.betas) {
      ThresholdSearch s;
      s.beta = beta;
      s.z_min = c.z_min;
      s.z_max = c.z_max;
      s.z_step = c.z_step;
      s.refinements = o.refine;
      s.p0 = o.p0;
      s.replicates = c.replicates;
      s.setup = {c.window_side, c.chain_mult, c.master_seed, initial_states(c.init).front()};
      s.jobs = c.jobs;
      const ThresholdRun run = find_threshold(s);
      rows.push_back({beta, run.estimate.z_threshold, o.p0, run.estimate.z_step, c.window_side,
                      c.replicates});
    }
  }

  print_threshold_table(rows);
  if (!o.out.empty()) {
    auto os = open_output(o.out);
    write_thresholds_csv(os, rows, meta);
  }
  return kOk;
}

void print_scan(double beta, const JumpScan& s) {
  std::cout << "beta=" << format_double(beta) << " jump=" << format_double(s.jump)
            << " at_z=" << format_double(s.location) << " median_step=" << format_double(s.median_step)
            << " jump_se=" << format_double(s.jump_se);
  if (s.hysteresis_gap) {
    std::cout << " hysteresis=" << format_double(*s.hysteresis_gap)
              << " hysteresis_se=" << format_double(*s.hysteresis_se);
  }
  std::cout << " discontinuous=" << (s.flagged ? 1 : 0) << '\n';
}

int cmd_diagonal(const Options& o) {
  std::vector<CurvePoint> curves;
  Metadata meta = base_metadata("diagonal", o);

  if (!o.runs.empty()) {
    const auto records = load_runs(o.runs);
    require(!records.empty(), "runs file has no records");
    meta.emplace_back("source", o.runs);
    for (double beta : betas_in(records)) {
      const auto empty = intensity_curve(records, beta, records.front().initial);
      std::vector<IntensityPoint> dense;
      bool has_dense = false;
      for (const RunRecord& r : records) {
        has_dense = has_dense || (r.beta == beta && r.initial == InitialState::dense &&
                                  records.front().initial == InitialState::empty);
      }
      if (has_dense) dense = intensity_curve(records, beta, InitialState::dense);
      print_scan(beta, diagonal_jump_scan(empty, dense));
    }
    curves = summarize(records);
  } else {
    std::vector<double> betas = o.betas;
    if (o.beta && betas.empty()) betas = {*o.beta};
    require(!betas.empty(), "diagonal needs --betas (or --beta) or --runs");
    require(o.points >= 4, "diagonal needs --points >= 4");
    DiagonalScan base;
    base.z_step = o.z_step;
    base.points = o.points;
    base.replicates = o.replicates;
    base.init = init_policy_from_string(o.init);
    base.setup = {o.window, o.chain_mult, o.seed, InitialState::empty};
    base.jobs = o.jobs;

    std::map<double, bool> flags;
    const auto scan = [&](double beta) {
      if (auto it = flags.find(beta); it != flags.end()) return it->second;
      DiagonalScan d = base;
      d.beta = beta;
      const DiagonalRun run = run_diagonal_scan(d);
      print_scan(beta, run.scan);
      const auto c = summarize(run.records);
      curves.insert(curves.end(), c.begin(), c.end());
      return flags[beta] = run.scan.flagged;
    };
    if (o.bisect > 0) {
      require(betas.size() >= 2, "--bisect needs two --betas forming the bracket");
      const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
      const OnsetEstimate e = locate_onset(*lo, *hi, o.bisect, scan);
      std::cout << "onset=" << format_double(e.onset()) << " bracket=[" << format_double(e.lower)
                << ", " << format_double(e.upper) << "]\n";
    } else {
      for (double beta : betas) scan(beta);
    }
  }

  if (!o.out.empty()) {
    meta.emplace_back("z_step", format_double(o.z_step));
    meta.emplace_back("points", std::to_string(o.points));
    auto os = open_output(o.out);
    write_curves_csv(os, curves, meta);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Area-interaction percolation via the generalized random cluster model"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.allow_config_extras(false);

  Options o;
  app.add_option("--z", o.z, "Activity");
  app.add_option("--beta", o.beta, "Inverse temperature");
  app.add_option("--z-min", o.z_min, "First z of the grid");
  app.add_option("--z-max", o.z_max, "Last z of the grid (inclusive)");
  app.add_option("--z-step", o.z_step, "Grid spacing")->capture_default_str();
  app.add_option("--betas", o.betas, "Inverse temperatures to sweep")->delimiter(',');
  app.add_option("--window", o.window, "Window side L of [0,L]^2")->capture_default_str();
  app.add_option("--replicates", o.replicates, "Chains per (z, beta)")->capture_default_str();
  app.add_option("--chain-mult", o.chain_mult, "Proposals per unit of rho*|window|")
      ->capture_default_str();
  app.add_option("--steps", o.steps, "sample: exact number of proposals");
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--init", o.init, "Initial state")
      ->check(CLI::IsMember({"empty", "dense", "both"}))
      ->capture_default_str();
  app.add_option("--jobs", o.jobs, "Concurrent chains (0: all cores)")->capture_default_str();
  app.add_option("--out", o.out, "Output file");
  app.add_option("--curves", o.curves, "sweep: also write the curve CSV here");
  app.add_option("--runs", o.runs, "threshold/diagonal: read an existing runs CSV");
  app.add_option("--p0", o.p0, "threshold: probability cutoff")->capture_default_str();
  app.add_option("--refine", o.refine, "threshold: refinement rounds (step / 5 each)")
      ->capture_default_str();
  app.add_option("--points", o.points, "diagonal: grid points centred on beta")
      ->capture_default_str();
  app.add_option("--bisect", o.bisect, "diagonal: bisection rounds for the onset")
      ->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Sample one configuration and report it");
  auto* sweep = app.add_subcommand("sweep", "Replicated sweep over (beta, z)");
  auto* threshold = app.add_subcommand("threshold", "Percolation threshold per beta");
  auto* diagonal = app.add_subcommand("diagonal", "Intensity jump scan along z = beta");
  for (auto* s : {sample, sweep, threshold, diagonal}) s->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sample) return cmd_sample(o);
    if (*sweep) return cmd_sweep(o);
    if (*threshold) return cmd_threshold(o);
    if (*diagonal) return cmd_diagonal(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ThresholdNotFound& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return kNotFound;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
