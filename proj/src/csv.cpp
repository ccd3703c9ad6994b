#include "areaperc/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "areaperc/format.hpp"

namespace areaperc {
namespace {

void write_meta(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw std::invalid_argument("not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

// Calls row(fields) for every data line; checks the header and column count.
template <class F>
void read_table(std::istream& is, std::string_view header, F&& row) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  const std::size_t columns = split(header).size();
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != header) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": expected header '" +
                                 std::string(header) + "'");
      }
      have_header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != columns) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected " +
                               std::to_string(columns) + " columns");
    }
    try {
      row(f);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("missing CSV header '" + std::string(header) + "'");
}

}  // namespace

void write_runs_csv(std::ostream& os, std::span<const RunRecord> rows, const Metadata& meta) {
  write_meta(os, meta);
  os << kRunsHeader << '\n';
  for (const RunRecord& r : rows) {
    os << format_double(r.beta) << ',' << format_double(r.z) << ',' << r.replicate << ','
       << r.seed << ',' << to_string(r.initial) << ',' << r.n_points << ','
       << (r.percolated ? 1 : 0) << ',' << format_double(r.intensity) << ',' << r.chain_steps
       << '\n';
  }
}

void write_curves_csv(std::ostream& os, std::span<const CurvePoint> rows, const Metadata& meta) {
  write_meta(os, meta);
  os << kCurvesHeader << '\n';
  for (const CurvePoint& c : rows) {
    os << format_double(c.beta) << ',' << format_double(c.z) << ',' << format_double(c.p_hat)
       << ',' << format_double(c.p_se) << ',' << format_double(c.intensity_mean) << ','
       << format_double(c.intensity_se) << ',' << to_string(c.initial) << '\n';
  }
}

void write_thresholds_csv(std::ostream& os, std::span<const ThresholdRow> rows,
                          const Metadata& meta) {
  write_meta(os, meta);
  os << kThresholdsHeader << '\n';
  for (const ThresholdRow& t : rows) {
    os << format_double(t.beta) << ',' << format_double(t.z_threshold) << ','
       << format_double(t.p0) << ',' << format_double(t.z_step) << ','
       << format_double(t.window_side) << ',' << t.replicates << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& is) {
  std::vector<RunRecord> out;
  read_table(is, kRunsHeader, [&](const std::vector<std::string_view>& f) {
    RunRecord r;
    r.beta = parse_double(f[0]);
    r.z = parse_double(f[1]);
    r.replicate = parse_u64(f[2]);
    r.seed = parse_u64(f[3]);
    r.initial = initial_state_from_string(f[4]);
    r.n_points = parse_u64(f[5]);
    const std::uint64_t p = parse_u64(f[6]);
    if (p > 1) throw std::invalid_argument("percolated must be 0 or 1");
    r.percolated = p == 1;
    r.intensity = parse_double(f[7]);
    r.chain_steps = parse_u64(f[8]);
    out.push_back(r);
  });
  return out;
}

std::vector<CurvePoint> read_curves_csv(std::istream& is) {
  std::vector<CurvePoint> out;
  read_table(is, kCurvesHeader, [&](const std::vector<std::string_view>& f) {
    CurvePoint c;
    c.beta = parse_double(f[0]);
    c.z = parse_double(f[1]);
    c.p_hat = parse_double(f[2]);
    c.p_se = parse_double(f[3]);
    c.intensity_mean = parse_double(f[4]);
    c.intensity_se = parse_double(f[5]);
    c.initial = initial_state_from_string(f[6]);
    out.push_back(c);
  });
  return out;
}

std::vector<ThresholdRow> read_thresholds_csv(std::istream& is) {
  std::vector<ThresholdRow> out;
  read_table(is, kThresholdsHeader, [&](const std::vector<std::string_view>& f) {
    ThresholdRow t;
    t.beta = parse_double(f[0]);
    t.z_threshold = parse_double(f[1]);
    t.p0 = parse_double(f[2]);
    t.z_step = parse_double(f[3]);
    t.window_side = parse_double(f[4]);
    t.replicates = parse_u64(f[5]);
    out.push_back(t);
  });
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path + " for reading");
  return is;
}

}  // namespace areaperc
