#include "areaperc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "areaperc/format.hpp"
#include "areaperc/percolation.hpp"

namespace areaperc {

std::string_view to_string(InitPolicy p) {
  switch (p) {
    case InitPolicy::empty:
      return "empty";
    case InitPolicy::dense:
      return "dense";
    case InitPolicy::both:
      return "both";
  }
  return "?";
}

InitPolicy init_policy_from_string(std::string_view s) {
  if (s == "empty") return InitPolicy::empty;
  if (s == "dense") return InitPolicy::dense;
  if (s == "both") return InitPolicy::both;
  throw std::invalid_argument("unknown initial-state policy '" + std::string(s) + "'");
}

std::vector<InitialState> initial_states(InitPolicy p) {
  switch (p) {
    case InitPolicy::empty:
      return {InitialState::empty};
    case InitPolicy::dense:
      return {InitialState::dense};
    case InitPolicy::both:
      return {InitialState::empty, InitialState::dense};
  }
  return {};
}

namespace {

double snap(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace

std::vector<double> z_grid(double z_min, double z_max, double z_step) {
  if (!(z_step > 0.0)) throw std::invalid_argument("z step must be positive");
  if (!(z_max >= z_min)) throw std::invalid_argument("z max must be >= z min");
  const auto n = static_cast<std::size_t>(std::floor((z_max - z_min) / z_step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(snap(z_min + static_cast<double>(i) * z_step));
  return out;
}

std::vector<double> diagonal_grid(double beta, double step, std::size_t points) {
  if (!(step > 0.0)) throw std::invalid_argument("z step must be positive");
  std::vector<double> out;
  const double half = 0.5 * static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double z = snap(beta + (static_cast<double>(k) - half) * step);
    if (z < 0.0) throw std::invalid_argument("diagonal grid reaches negative z");
    out.push_back(z);
  }
  return out;
}

void SweepConfig::validate() const {
  if (betas.empty()) throw std::invalid_argument("at least one beta is required");
  for (double b : betas) {
    if (!(b >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  }
  if (!(z_min >= 0.0)) throw std::invalid_argument("z min must be non-negative");
  if (!(z_step > 0.0)) throw std::invalid_argument("z step must be positive");
  if (!(z_max >= z_min)) throw std::invalid_argument("z max must be >= z min");
  if (!(window_side > 0.0)) throw std::invalid_argument("window side must be positive");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (!(chain_mult >= 0.0)) throw std::invalid_argument("chain multiplier must be non-negative");
}

RunRecord run_replicate(double beta, double z, std::uint64_t replicate,
                        const ReplicateSetup& setup) {
  const GrcmParams g = params_from_area({z, beta});
  const Window window(setup.window_side);

  RunRecord r;
  r.beta = beta;
  r.z = z;
  r.replicate = replicate;
  r.seed = stream_seed(setup.master_seed, beta, z, replicate);
  r.initial = setup.initial;
  r.chain_steps = chain_length(g, window, setup.chain_mult);

  ChainState chain(window, g, r.seed);
  if (setup.initial == InitialState::dense) chain.add_poisson(g.rho);
  chain.run(r.chain_steps);
  const PointConfiguration area =
      thin_to_area(chain.config(), chain.partition(), chain.weight(), chain.rng());

  r.n_points = area.size();
  r.intensity = static_cast<double>(area.size()) / window.area();
  r.percolated = center_to_boundary(area);
  return r;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

void sort_records(std::vector<RunRecord>& records) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tuple(a.beta, a.z, a.initial, a.replicate) <
           std::tuple(b.beta, b.z, b.initial, b.replicate);
  });
}

namespace {

struct Task {
  double beta;
  double z;
  InitialState initial;
  std::uint64_t replicate;
};

std::vector<RunRecord> run_tasks(const std::vector<Task>& tasks, double window_side,
                                 double chain_mult, std::uint64_t master_seed, unsigned jobs) {
  std::vector<RunRecord> out(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    out[i] = run_replicate(t.beta, t.z, t.replicate,
                           ReplicateSetup{window_side, chain_mult, master_seed, t.initial});
  });
  sort_records(out);
  return out;
}

std::vector<Task> tasks_for(double beta, std::span<const double> zs,
                            std::span<const InitialState> starts, std::size_t replicates) {
  std::vector<Task> tasks;
  for (double z : zs) {
    for (InitialState s : starts) {
      for (std::size_t rep = 0; rep < replicates; ++rep) tasks.push_back({beta, z, s, rep});
    }
  }
  return tasks;
}

}  // namespace

std::vector<RunRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto zs = z_grid(cfg.z_min, cfg.z_max, cfg.z_step);
  const auto starts = initial_states(cfg.init);
  std::vector<Task> tasks;
  for (double beta : cfg.betas) {
    const auto t = tasks_for(beta, zs, starts, cfg.replicates);
    tasks.insert(tasks.end(), t.begin(), t.end());
  }
  return run_tasks(tasks, cfg.window_side, cfg.chain_mult, cfg.master_seed, cfg.jobs);
}

std::vector<CurvePoint> summarize(std::span<const RunRecord> records) {
  struct Acc {
    std::size_t n = 0;
    std::size_t hits = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  std::map<std::tuple<double, InitialState, double>, Acc> groups;
  for (const RunRecord& r : records) {
    Acc& a = groups[{r.beta, r.initial, r.z}];
    ++a.n;
    a.hits += r.percolated ? 1 : 0;
    a.sum += r.intensity;
    a.sum_sq += r.intensity * r.intensity;
  }
  std::vector<CurvePoint> out;
  out.reserve(groups.size());
  for (const auto& [key, a] : groups) {
    CurvePoint c;
    std::tie(c.beta, c.initial, c.z) = key;
    c.samples = a.n;
    const auto n = static_cast<double>(a.n);
    c.p_hat = static_cast<double>(a.hits) / n;
    c.p_se = std::sqrt(c.p_hat * (1.0 - c.p_hat) / n);
    c.intensity_mean = a.sum / n;
    if (a.n > 1) {
      const double var = std::max(0.0, (a.sum_sq - n * c.intensity_mean * c.intensity_mean) / (n - 1.0));
      c.intensity_se = std::sqrt(var / n);
    }
    out.push_back(c);
  }
  return out;
}

namespace {

std::vector<CurvePoint> curve_for(std::span<const RunRecord> records, double beta,
                                  InitialState initial) {
  std::vector<RunRecord> subset;
  for (const RunRecord& r : records) {
    if (r.beta == beta && r.initial == initial) subset.push_back(r);
  }
  if (subset.empty()) {
    throw std::invalid_argument("no records for beta=" + format_double(beta) + " start=" +
                                std::string(to_string(initial)));
  }
  return summarize(subset);
}

}  // namespace

std::vector<ProbabilityPoint> percolation_curve(std::span<const RunRecord> records, double beta,
                                                InitialState initial) {
  std::vector<ProbabilityPoint> out;
  for (const CurvePoint& c : curve_for(records, beta, initial)) out.push_back({c.z, c.p_hat, c.p_se});
  return out;
}

std::vector<IntensityPoint> intensity_curve(std::span<const RunRecord> records, double beta,
                                            InitialState initial) {
  std::vector<IntensityPoint> out;
  for (const CurvePoint& c : curve_for(records, beta, initial)) {
    out.push_back({c.z, c.intensity_mean, c.intensity_se});
  }
  return out;
}

ThresholdEstimate estimate_threshold(std::span<const ProbabilityPoint> curve, double p0,
                                     double beta) {
  if (curve.empty()) throw std::invalid_argument("empty percolation curve");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].z > curve[i - 1].z)) throw std::invalid_argument("curve z must be ascending");
  }
  ThresholdEstimate est;
  est.beta = beta;
  est.p0 = p0;
  est.curve.assign(curve.begin(), curve.end());
  est.z_step = curve.size() > 1 ? snap(curve[1].z - curve[0].z) : 0.0;
  for (const ProbabilityPoint& p : curve) {
    if (p.p_hat > p0) {
      est.z_threshold = p.z;
      return est;
    }
  }
  throw ThresholdNotFound("no z in [" + format_double(curve.front().z) + ", " +
                          format_double(curve.back().z) + "] has percolation probability above " +
                          format_double(p0) + " at beta=" + format_double(beta) +
                          "; extend the z grid");
}

ThresholdRun find_threshold(const ThresholdSearch& s) {
  if (!(s.p0 >= 0.0 && s.p0 < 1.0)) throw std::invalid_argument("p0 must be in [0, 1)");
  if (s.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  ThresholdRun run;
  const InitialState starts[] = {s.setup.initial};

  const auto measure = [&](double z) {
    auto recs = run_tasks(tasks_for(s.beta, std::span<const double>(&z, 1), starts, s.replicates),
                          s.setup.window_side, s.setup.chain_mult, s.setup.master_seed, s.jobs);
    const auto c = summarize(recs).front();
    run.records.insert(run.records.end(), recs.begin(), recs.end());
    return ProbabilityPoint{z, c.p_hat, c.p_se};
  };

  std::vector<ProbabilityPoint> curve;
  double below = NAN;
  double found = NAN;
  for (double z : z_grid(s.z_min, s.z_max, s.z_step)) {
    curve.push_back(measure(z));
    if (curve.back().p_hat > s.p0) {
      found = z;
      break;
    }
    below = z;
  }
  if (std::isnan(found)) {
    estimate_threshold(curve, s.p0, s.beta);  // throws ThresholdNotFound with the grid
  }

  double step = s.z_step;
  for (int level = 0; level < s.refinements && !std::isnan(below); ++level) {
    step /= 5.0;
    double new_below = below;
    for (double z : z_grid(below + step, found - 0.5 * step, step)) {
      curve.push_back(measure(z));
      if (curve.back().p_hat > s.p0) {
        found = z;
        break;
      }
      new_below = z;
    }
    below = new_below;
  }

  std::sort(curve.begin(), curve.end(),
            [](const ProbabilityPoint& a, const ProbabilityPoint& b) { return a.z < b.z; });
  run.estimate = estimate_threshold(curve, s.p0, s.beta);
  run.estimate.z_step = snap(step);
  sort_records(run.records);
  return run;
}

namespace {

struct StepStats {
  double best = 0.0;
  std::size_t where = 0;
  double median = 0.0;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

JumpScan diagonal_jump_scan(std::span<const IntensityPoint> curve,
                            std::span<const IntensityPoint> dense_curve) {
  if (curve.size() < 4) throw std::invalid_argument("jump scan needs at least 4 grid points");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].z > curve[i - 1].z)) throw std::invalid_argument("curve z must be ascending");
  }

  JumpScan out;
  std::vector<double> steps;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double d = std::abs(curve[i].mean - curve[i - 1].mean);
    steps.push_back(d);
    if (d > out.jump) {
      out.jump = d;
      out.location = 0.5 * (curve[i].z + curve[i - 1].z);
      out.jump_se = std::hypot(curve[i].se, curve[i - 1].se);
    }
  }
  out.median_step = median(steps);
  out.jump_flagged = out.jump > 5.0 * out.median_step && out.jump > 3.0 * out.jump_se;

  if (!dense_curve.empty()) {
    if (dense_curve.size() != curve.size()) {
      throw std::invalid_argument("empty-start and dense-start curves differ in length");
    }
    double gap = -1.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (dense_curve[i].z != curve[i].z) {
        throw std::invalid_argument("empty-start and dense-start curves use different grids");
      }
      const double g = std::abs(dense_curve[i].mean - curve[i].mean);
      if (g > gap) {
        gap = g;
        out.hysteresis_location = curve[i].z;
        out.hysteresis_se = std::hypot(curve[i].se, dense_curve[i].se);
      }
    }
    out.hysteresis_gap = gap;
    out.hysteresis_flagged = gap > 5.0 * out.median_step && gap > 3.0 * *out.hysteresis_se;
  }
  out.flagged = out.jump_flagged || out.hysteresis_flagged;
  return out;
}

DiagonalRun run_diagonal_scan(const DiagonalScan& cfg) {
  if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const auto zs = diagonal_grid(cfg.beta, cfg.z_step, cfg.points);
  const auto starts = initial_states(cfg.init);
  DiagonalRun run;
  run.records = run_tasks(tasks_for(cfg.beta, zs, starts, cfg.replicates), cfg.setup.window_side,
                          cfg.setup.chain_mult, cfg.setup.master_seed, cfg.jobs);
  const auto first = intensity_curve(run.records, cfg.beta, starts.front());
  if (starts.size() > 1) {
    const auto dense = intensity_curve(run.records, cfg.beta, InitialState::dense);
    run.scan = diagonal_jump_scan(first, dense);
  } else {
    run.scan = diagonal_jump_scan(first);
  }
  return run;
}

OnsetEstimate locate_onset(double lo, double hi, int iterations,
                           const std::function<bool(double)>& flagged) {
  if (!(lo < hi)) throw std::invalid_argument("onset bracket must satisfy lo < hi");
  if (flagged(lo)) throw std::runtime_error("onset bracket: lower beta is already flagged");
  if (!flagged(hi)) throw std::runtime_error("onset bracket: upper beta is not flagged");
  OnsetEstimate e{lo, hi};
  for (int i = 0; i < iterations; ++i) {
    const double mid = snap(0.5 * (e.lower + e.upper));
    (flagged(mid) ? e.upper : e.lower) = mid;
  }
  return e;
}

}  // namespace areaperc
