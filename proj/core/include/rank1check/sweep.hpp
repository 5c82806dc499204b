#pragma once

// Experiment sweeps: shapes x generators x corruption levels x seeds x tests,
// with exact oracle columns attached whenever the enumeration budget allows.

#include "rank1check/estimate.hpp"
#include "rank1check/generators.hpp"
#include "rank1check/oracles.hpp"

#include <iosfwd>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rank1check {

/// Largest tensor (in entries) the `exhaustive` kind expands over.
inline constexpr std::size_t kExhaustiveSweepEntries = 16;

// Config format: one `key = value` per line, '#' starts a comment, `[name]`
// section lines are ignored. Keys:
//   shapes        = 2,2,2 ; 3x3x3          (';'-separated; required)
//   tests         = sic-subsets, shapka     (default: all)
//   kinds         = direct-sum, corrupted-rate, corrupted-count, uniform,
//                   indicator, exhaustive   (default: direct-sum)
//   rates         = 0.0625, 0.125           (needed by corrupted-rate)
//   counts        = 1, 2                    (needed by corrupted-count)
//   trials        = 10000
//   seeds         = 1, 2, 3                 (default: 1)
//   oracle_budget = 4294967296
// `exhaustive` expands into every tensor of the shape (at most
// kExhaustiveSweepEntries entries).
struct SweepConfig {
  std::vector<Shape> shapes;
  std::vector<TestKind> tests{std::begin(kAllTestKinds), std::end(kAllTestKinds)};
  std::vector<GeneratorKind> kinds{GeneratorKind::kDirectSum};
  std::vector<double> rates;
  std::vector<std::uint64_t> counts;
  std::uint64_t trials = 10000;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t oracle_budget = kDefaultEnumerationBudget;
};

/// Throws ParseError naming the line and field on malformed input.
SweepConfig parse_sweep_config(std::string_view text);
SweepConfig read_sweep_config(std::istream& is);

std::string_view default_sweep_config_text() noexcept;
SweepConfig default_sweep_config();

struct SweepRow {
  TestKind test;
  Shape shape;
  std::string kind;   ///< generator name, "exhaustive", or "file"
  std::string param;  ///< corruption level, bit string for exhaustive rows, or "-"
  std::uint64_t generator_seed = 0;
  RejectionEstimate estimate;
  std::optional<Rational> exact_rejection;
  std::optional<Rational> exact_distance;  ///< nearest direct sum, or nearest affine for blr
  std::optional<Rational> ratio;           ///< distance / rejection
};

/// Estimates and, budget permitting, exact columns for one tensor and test.
SweepRow measure(const BinaryTensor& f, TestKind test, std::string kind, std::string param, std::uint64_t trials,
                 std::uint64_t trial_seed, const Oracle& oracle, std::size_t threads = 1);

/// Rows come out in nested config order (shape, kind, param, seed, test)
/// regardless of `threads` (0 = worker_threads()). BLR rows appear only for
/// binary-cube shapes.
std::vector<SweepRow> run_sweep(const SweepConfig& config, std::uint64_t master_seed, std::size_t threads = 0);

struct SweepSummary {
  /// Minimum exact rejection / distance over rows with positive distance.
  std::map<TestKind, Rational> min_rejection_over_distance;
  /// Mean estimated rejection per (test, rate) for corrupted-rate rows.
  std::map<std::pair<TestKind, double>, double> mean_estimate_by_rate;
};

SweepSummary summarize(const std::vector<SweepRow>& rows);

std::string_view sweep_csv_header() noexcept;
std::string to_csv_row(const SweepRow& row);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_sweep_summary(std::ostream& os, const SweepSummary& summary);

}  // namespace rank1check
