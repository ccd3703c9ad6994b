#pragma once

#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "areaperc/experiments.hpp"

namespace areaperc {

/// Leading "# key=value" comment lines of a CSV file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kRunsHeader =
    "beta,z,replicate,seed,initial,n_points,percolated,intensity,chain_steps";
inline constexpr const char* kCurvesHeader =
    "beta,z,p_hat,p_se,intensity_mean,intensity_se,initial";
inline constexpr const char* kThresholdsHeader =
    "beta,z_threshold,p0,z_step,window_side,replicates";

struct ThresholdRow {
  double beta = 0.0;
  double z_threshold = 0.0;
  double p0 = 0.01;
  double z_step = 0.0;
  double window_side = 0.0;
  std::size_t replicates = 0;

  friend bool operator==(const ThresholdRow&, const ThresholdRow&) = default;
};

// Writers emit LF line endings and shortest round-trip decimals, so reading a
// file back reproduces every value exactly.
void write_runs_csv(std::ostream& os, std::span<const RunRecord> rows, const Metadata& meta = {});
void write_curves_csv(std::ostream& os, std::span<const CurvePoint> rows, const Metadata& meta = {});
void write_thresholds_csv(std::ostream& os, std::span<const ThresholdRow> rows,
                          const Metadata& meta = {});

// Readers skip '#' lines, require the exact header and throw
// std::runtime_error with the line number on malformed input. The curve reader
// leaves CurvePoint::samples at 0 (the column is not stored).
std::vector<RunRecord> read_runs_csv(std::istream& is);
std::vector<CurvePoint> read_curves_csv(std::istream& is);
std::vector<ThresholdRow> read_thresholds_csv(std::istream& is);

/// Opens `path` for binary writing; throws std::runtime_error on failure.
std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace areaperc
