#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "areaperc/grcm.hpp"

namespace areaperc {

enum class InitPolicy { empty, dense, both };

std::string_view to_string(InitPolicy p);
InitPolicy init_policy_from_string(std::string_view s);
std::vector<InitialState> initial_states(InitPolicy p);

/// z_min, z_min + step, ... up to z_max (inclusive, with 1e-9 slack). Grid
/// values are snapped to multiples of 1e-9 so that 0.1 + 2*0.1 prints as 0.3.
std::vector<double> z_grid(double z_min, double z_max, double z_step);

/// `points` values spaced `step` apart and centered on `beta`.
std::vector<double> diagonal_grid(double beta, double step, std::size_t points);

struct SweepConfig {
  std::vector<double> betas;
  double z_min = 0.0;
  double z_max = 0.0;
  double z_step = 0.01;
  double window_side = 100.0;
  std::size_t replicates = 1000;
  double chain_mult = 60.0;
  std::uint64_t master_seed = 1;
  InitPolicy init = InitPolicy::empty;
  unsigned jobs = 0;  // 0: one per hardware thread

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Outcome of one independent chain: gRCM run, thinning, then measurement.
struct RunRecord {
  double beta = 0.0;
  double z = 0.0;
  std::uint64_t replicate = 0;
  std::uint64_t seed = 0;
  InitialState initial = InitialState::empty;
  std::uint64_t n_points = 0;
  bool percolated = false;
  double intensity = 0.0;
  std::uint64_t chain_steps = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Everything one replicate needs besides (beta, z, replicate).
struct ReplicateSetup {
  double window_side = 100.0;
  double chain_mult = 60.0;
  std::uint64_t master_seed = 1;
  InitialState initial = InitialState::empty;
};

RunRecord run_replicate(double beta, double z, std::uint64_t replicate,
                        const ReplicateSetup& setup);

/// Runs `n` tasks on up to `jobs` threads (0: hardware concurrency). The first
/// exception thrown by a task is rethrown after all threads finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task);

/// One record per (beta, z, initial state, replicate), sorted in that order.
std::vector<RunRecord> run_sweep(const SweepConfig& cfg);

/// Canonical record order: beta, z, initial state, replicate.
void sort_records(std::vector<RunRecord>& records);

/// Per-(beta, initial, z) summary, matching the curve CSV.
struct CurvePoint {
  double beta = 0.0;
  double z = 0.0;
  InitialState initial = InitialState::empty;
  std::size_t samples = 0;
  double p_hat = 0.0;
  double p_se = 0.0;  // binomial sqrt(p(1-p)/n)
  double intensity_mean = 0.0;
  double intensity_se = 0.0;  // sample sd / sqrt(n); 0 for one sample

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// All curves in the records, ordered by beta, initial state, z.
std::vector<CurvePoint> summarize(std::span<const RunRecord> records);

struct ProbabilityPoint {
  double z = 0.0;
  double p_hat = 0.0;
  double se = 0.0;
};

struct IntensityPoint {
  double z = 0.0;
  double mean = 0.0;
  double se = 0.0;
};

/// Throws std::invalid_argument when no record has this beta and start.
std::vector<ProbabilityPoint> percolation_curve(std::span<const RunRecord> records, double beta,
                                                InitialState initial = InitialState::empty);
std::vector<IntensityPoint> intensity_curve(std::span<const RunRecord> records, double beta,
                                            InitialState initial = InitialState::empty);

class ThresholdNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdEstimate {
  double beta = 0.0;
  double z_threshold = 0.0;
  double p0 = 0.01;
  double z_step = 0.0;
  std::vector<ProbabilityPoint> curve;
};

/// First grid point (curve in ascending z) with p_hat > p0. Throws
/// ThresholdNotFound when there is none.
ThresholdEstimate estimate_threshold(std::span<const ProbabilityPoint> curve, double p0 = 0.01,
                                     double beta = 0.0);

struct ThresholdSearch {
  double beta = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double z_step = 0.01;
  /// Each refinement rescans the last bracket with a step five times finer.
  int refinements = 0;
  double p0 = 0.01;
  std::size_t replicates = 1000;
  ReplicateSetup setup;
  unsigned jobs = 0;
};

struct ThresholdRun {
  ThresholdEstimate estimate;
  std::vector<RunRecord> records;
};

/// Scans the grid upward one z at a time and stops at the first z with
/// p_hat > p0 (refining inside the bracket if asked). Throws
/// ThresholdNotFound naming the grid when it is exhausted.
ThresholdRun find_threshold(const ThresholdSearch& search);

struct JumpScan {
  double jump = 0.0;
  double location = 0.0;  // midpoint of the grid pair with the largest step
  double median_step = 0.0;
  double jump_se = 0.0;
  bool jump_flagged = false;
  std::optional<double> hysteresis_gap;
  std::optional<double> hysteresis_location;
  std::optional<double> hysteresis_se;
  bool hysteresis_flagged = false;
  bool flagged = false;
};

/// Jump detector on an intensity curve over a uniform ascending z grid.
///
/// The jump is the largest |successive difference|; it is flagged when it
/// exceeds 5x the median |successive difference| and 3x its combined standard
/// error. With a second curve from the dense start on the same grid, the
/// largest vertical gap between the two is the hysteresis width, flagged by
/// the same two tests. `flagged` is the OR of both. Throws
/// std::invalid_argument for fewer than 4 points or mismatched grids.
JumpScan diagonal_jump_scan(std::span<const IntensityPoint> curve,
                            std::span<const IntensityPoint> dense_curve = {});

struct DiagonalScan {
  double beta = 0.0;
  double z_step = 0.02;
  std::size_t points = 6;
  std::size_t replicates = 100;
  InitPolicy init = InitPolicy::empty;
  ReplicateSetup setup;
  unsigned jobs = 0;
};

struct DiagonalRun {
  JumpScan scan;
  std::vector<RunRecord> records;
};

DiagonalRun run_diagonal_scan(const DiagonalScan& cfg);

struct OnsetEstimate {
  double lower = 0.0;  // largest beta seen unflagged
  double upper = 0.0;  // smallest beta seen flagged
  double onset() const { return 0.5 * (lower + upper); }
};

/// Bisection for the smallest flagged beta, assuming flagged(lo) is false and
/// flagged(hi) is true (checked; throws std::runtime_error otherwise).
OnsetEstimate locate_onset(double lo, double hi, int iterations,
                           const std::function<bool(double)>& flagged);

}  // namespace areaperc
