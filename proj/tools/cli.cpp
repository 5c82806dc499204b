#include "cli.hpp"

#include "rank1check/agreement.hpp"
#include "rank1check/errors.hpp"
#include "rank1check/estimate.hpp"
#include "rank1check/generators.hpp"
#include "rank1check/oracles.hpp"
#include "rank1check/spectral.hpp"
#include "rank1check/sweep.hpp"
#include "rank1check/tensor_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace rank1check::cli {

namespace {

// Thrown by assertion-style checks; maps to exit code 1.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return detail::slurp(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "'");
  return detail::slurp(file);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

TestKind test_kind(const std::string& name) {
  auto kind = parse_test_kind(name);
  if (!kind) throw UsageError("unknown test '" + name + "'");
  return *kind;
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + text + "'");
    return Rational(BigInt(text.substr(0, slash)), den);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("expected a rational like 3/4, got '" + text + "'");
  }
}

std::string opt_string(const std::optional<Rational>& r) { return r ? to_string(*r) : std::string(); }

// gen ------------------------------------------------------------------------

struct GenArgs {
  std::string shape, kind = "direct-sum", point, output;
  std::uint64_t seed = 0, count = 0, code = 0;
  double rate = 0;
  CLI::Option* rate_opt = nullptr;
  CLI::Option* count_opt = nullptr;
  CLI::Option* code_opt = nullptr;
};

void add_gen(CLI::App& app, GenArgs& a) {
  auto* cmd = app.add_subcommand("gen", "Write a generated tensor in the text format");
  cmd->add_option("--shape", a.shape, "Dimensions, e.g. 2,2,2")->required();
  cmd->add_option("--kind", a.kind, "direct-sum, corrupted-rate, corrupted-count, uniform, indicator or code")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Generator seed")->capture_default_str();
  a.rate_opt = cmd->add_option("--rate", a.rate, "Flip probability for corrupted-rate");
  a.count_opt = cmd->add_option("--count", a.count, "Flip count for corrupted-count");
  cmd->add_option("--point", a.point, "Indicator position, e.g. 0,1,1 (default: drawn from the seed)");
  a.code_opt = cmd->add_option("--code", a.code, "Bit j of the code is the entry at row-major offset j");
  cmd->add_option("-o,--output", a.output, "Output file (default: stdout)");
}

int run_gen(const GenArgs& a, Io io) {
  const auto kind = parse_generator_kind(a.kind);
  if (!kind) throw UsageError("unknown generator kind '" + a.kind + "'");
  GeneratorSpec spec{*kind, Shape::parse(a.shape), a.seed, a.rate, a.count, std::nullopt, a.code};
  if (*kind == GeneratorKind::kCorruptedRate && a.rate_opt->count() == 0) throw UsageError("corrupted-rate needs --rate");
  if (*kind == GeneratorKind::kCorruptedCount && a.count_opt->count() == 0) {
    throw UsageError("corrupted-count needs --count");
  }
  if (*kind == GeneratorKind::kCode && a.code_opt->count() == 0) throw UsageError("code needs --code");
  if (!a.point.empty()) spec.point = Point::parse(a.point);
  emit(a.output, format_tensor(generate(spec)), io.out);
  return kExitOk;
}

// test -----------------------------------------------------------------------

struct TestArgs {
  std::string test, file = "-";
  std::uint64_t trials = 100000, seed = 0;
};

void add_test(CLI::App& app, TestArgs& a) {
  auto* cmd = app.add_subcommand("test", "Monte-Carlo rejection estimate for one tensor file");
  cmd->add_option("--test", a.test, "sic-subsets, sic-cube, shapka, blr or conjectured")->required();
  cmd->add_option("--trials", a.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Master seed of the trial streams")->capture_default_str();
  cmd->add_option("file", a.file, "Tensor file, '-' for stdin")->capture_default_str();
}

int run_test(const TestArgs& a, Io io) {
  const TestKind kind = test_kind(a.test);
  const BinaryTensor f = parse_tensor(read_input(a.file, io.in));
  const SweepRow row = measure(f, kind, "file", "-", a.trials, a.seed, Oracle(), worker_threads());
  io.out << sweep_csv_header() << '\n' << to_csv_row(row) << '\n';
  return kExitOk;
}

// oracle ---------------------------------------------------------------------

struct OracleArgs {
  std::string test, shape, file = "-", alpha = "3/4";
  std::size_t t = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool dp = false, assert_soundness = false, exhaustive = false;
};

void add_oracle(CLI::App& app, OracleArgs& a) {
  auto* cmd = app.add_subcommand("oracle", "Exact rejection probabilities and nearest distances");
  cmd->add_option("--test", a.test, "Restrict to one test (default: every applicable test)");
  cmd->add_flag("--dp", a.dp, "Input is a direct-product function; report T(alpha), T(t) and plurality agreement");
  cmd->add_option("--alpha", a.alpha, "alpha for T(alpha) as p/q")->capture_default_str();
  cmd->add_option("--t", a.t, "t for T(t) (default: max(1, k/5))");
  cmd->add_flag("--assert-soundness", a.assert_soundness, "Exit 1 unless the test's soundness bound holds");
  cmd->add_option("--shape", a.shape, "Shape for --exhaustive");
  cmd->add_flag("--exhaustive", a.exhaustive, "Check every tensor of --shape instead of a file");
  cmd->add_option("--budget", a.budget, "Enumeration budget")->capture_default_str();
  cmd->add_option("file", a.file, "Input file, '-' for stdin")->capture_default_str();
}

struct SoundnessTally {
  std::uint64_t tensors = 0;
  std::uint64_t violations = 0;
  std::optional<Rational> min_ratio;  // exact_rej / exact_dist over positive distances
};

void check_soundness(const BinaryTensor& f, TestKind kind, const Oracle& oracle, SoundnessTally& tally,
                     std::ostream& err) {
  const Rational eps = oracle.exact_rejection(f, kind).value();
  const Rational delta =
      kind == TestKind::kBlr ? oracle.nearest_affine(f).distance : oracle.nearest_direct_sum(f).distance;
  bool ok = true;
  switch (kind) {
    case TestKind::kShapka:
    case TestKind::kBlr:
      ok = eps >= delta;
      break;
    default:
      ok = (eps == 0) == (delta == 0);
  }
  ++tally.tensors;
  if (delta > 0) {
    const Rational r = eps / delta;
    if (!tally.min_ratio || r < *tally.min_ratio) tally.min_ratio = r;
  }
  if (!ok) {
    if (tally.violations < 10) {
      err << "violation: " << f.to_bit_string() << " exact_rej " << to_string(eps) << " exact_dist "
          << to_string(delta) << '\n';
    }
    ++tally.violations;
  }
}

int run_oracle_soundness(const OracleArgs& a, Io io) {
  if (a.dp) throw UsageError("--assert-soundness applies to tensors, not --dp input");
  if (a.test.empty()) throw UsageError("--assert-soundness needs --test");
  const TestKind kind = test_kind(a.test);
  if (kind == TestKind::kConjectured) {
    throw UsageError("no soundness guarantee is known for the conjectured test; use plain `oracle` to report values");
  }
  const Oracle oracle(a.budget);
  SoundnessTally tally;
  Shape shape = Shape::binary_cube(1);
  if (a.exhaustive) {
    if (a.shape.empty()) throw UsageError("--exhaustive needs --shape");
    shape = Shape::parse(a.shape);
    if (shape.size() > kExhaustiveSweepEntries) {
      throw UsageError("--exhaustive supports at most " + std::to_string(kExhaustiveSweepEntries) + " entries");
    }
    if (kind == TestKind::kBlr && !shape.is_binary_cube()) throw UsageError("blr needs a binary cube shape");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << shape.size()); ++code) {
      check_soundness(BinaryTensor::from_code(shape, code), kind, oracle, tally, io.err);
    }
  } else {
    const BinaryTensor f = parse_tensor(read_input(a.file, io.in));
    shape = f.shape();
    if (!a.shape.empty() && !(Shape::parse(a.shape) == shape)) throw UsageError("--shape differs from the file's shape");
    if (kind == TestKind::kBlr && !shape.is_binary_cube()) throw UsageError("blr needs a binary cube shape");
    check_soundness(f, kind, oracle, tally, io.err);
  }
  io.out << "test,shape,tensors,violations,min_rej_over_dist\n"
         << to_string(kind) << ',' << shape.to_string() << ',' << tally.tensors << ',' << tally.violations << ','
         << opt_string(tally.min_ratio) << '\n';
  if (tally.violations > 0) {
    throw CheckFailed(std::to_string(tally.violations) + " of " + std::to_string(tally.tensors) +
                      " tensors violate the soundness bound");
  }
  return kExitOk;
}

int run_oracle_dp(const OracleArgs& a, Io io) {
  const DPFunction g = parse_dp_function(read_input(a.file, io.in));
  const Rational alpha = parse_rational(a.alpha);
  if (alpha < 0 || alpha > 1) throw UsageError("--alpha must lie in [0, 1]");
  const std::size_t t = a.t == 0 ? default_fixed_t(g.k()) : a.t;
  if (t > g.k()) throw UsageError("--t exceeds k");
  const Rational rej_alpha = exact_alpha_rejection(g, alpha, a.budget);
  const Rational rej_t = exact_fixed_t_rejection(g, t, a.budget);
  const PluralityDecode decode = dp_plurality_decode(g);
  io.out << "quantity,param,value\n"
         << "t-alpha-rejection," << to_string(alpha) << ',' << to_string(rej_alpha) << '\n'
         << "t-fixed-rejection," << t << ',' << to_string(rej_t) << '\n'
         << "plurality-agreement,-," << to_string(decode.agreement) << '\n';
  return kExitOk;
}

int run_oracle(const OracleArgs& a, Io io) {
  if (a.assert_soundness) return run_oracle_soundness(a, io);
  if (a.exhaustive) throw UsageError("--exhaustive requires --assert-soundness");
  if (a.dp) return run_oracle_dp(a, io);
  const BinaryTensor f = parse_tensor(read_input(a.file, io.in));
  const Oracle oracle(a.budget);
  std::vector<TestKind> tests;
  if (!a.test.empty()) {
    tests.push_back(test_kind(a.test));
    if (tests.front() == TestKind::kBlr && !f.shape().is_binary_cube()) throw UsageError("blr needs a binary cube");
  } else {
    for (auto k : kAllTestKinds) {
      if (k != TestKind::kBlr || f.shape().is_binary_cube()) tests.push_back(k);
    }
  }
  const NearestDirectSum nearest = oracle.nearest_direct_sum(f);
  io.out << "test,shape,exact_rej,exact_dist,ratio\n";
  for (auto kind : tests) {
    const Rational eps = oracle.exact_rejection(f, kind).value();
    const Rational delta = kind == TestKind::kBlr ? oracle.nearest_affine(f).distance : nearest.distance;
    io.out << to_string(kind) << ',' << f.shape().to_string() << ',' << to_string(eps) << ',' << to_string(delta)
           << ',' << (eps > 0 ? to_string(delta / eps) : std::string()) << '\n';
  }
  io.err << "nearest direct sum: " << nearest.witness.canonical_string() << " at distance "
         << to_string(nearest.distance) << '\n';
  return kExitOk;
}

// decode ---------------------------------------------------------------------

struct DecodeArgs {
  std::string method, anchor, output, file = "-";
  std::uint64_t budget = kDefaultEnumerationBudget;
};

void add_decode(CLI::App& app, DecodeArgs& a) {
  auto* cmd = app.add_subcommand("decode", "Decode a tensor or direct-product function and write the result");
  cmd->add_option("--method", a.method, "local-view, best-anchor, nearest, plurality or bridge")
      ->required()
      ->check(CLI::IsMember({"local-view", "best-anchor", "nearest", "plurality", "bridge"}));
  cmd->add_option("--anchor", a.anchor, "Anchor point for local-view and bridge (default: origin)");
  cmd->add_option("--budget", a.budget, "Enumeration budget")->capture_default_str();
  cmd->add_option("-o,--output", a.output, "Output file (default: stdout)");
  cmd->add_option("file", a.file, "Input file, '-' for stdin")->capture_default_str();
}

Point anchor_for(const std::string& text, const Shape& shape) {
  if (text.empty()) return shape.point_at(0);
  Point p = Point::parse(text);
  if (!shape.contains(p)) throw UsageError("anchor " + p.to_string() + " is not a point of " + shape.to_string());
  return p;
}

int run_decode(const DecodeArgs& a, Io io) {
  const std::string input = read_input(a.file, io.in);
  if (a.method == "plurality") {
    const DPFunction g = parse_dp_function(input);
    const PluralityDecode d = dp_plurality_decode(g);
    emit(a.output, format_dp_function(DPFunction::direct_product(g.dpshape(), d.components)), io.out);
    io.err << "agreement " << to_string(d.agreement) << '\n';
    return kExitOk;
  }
  const BinaryTensor f = parse_tensor(input);
  if (a.method == "bridge") {
    emit(a.output, format_dp_function(sic_to_dp_bridge(f, anchor_for(a.anchor, f.shape()), a.budget)), io.out);
    return kExitOk;
  }
  DirectSum decoded = DirectSum::zero(f.shape());
  if (a.method == "local-view") {
    decoded = local_view_decode(f, anchor_for(a.anchor, f.shape()));
  } else if (a.method == "best-anchor") {
    auto best = best_anchor_decode(f, a.budget);
    io.err << "anchor " << best.anchor.to_string() << '\n';
    decoded = std::move(best.decoded);
  } else {
    decoded = Oracle(a.budget).nearest_direct_sum(f).witness;
  }
  const BinaryTensor out = materialize(decoded);
  emit(a.output, format_tensor(out), io.out);
  io.err << "components " << decoded.canonical_string() << " distance " << to_string(distance(f, out)) << '\n';
  return kExitOk;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
  std::string config, output;
  std::uint64_t seed = 0;
  bool use_default = false, summary = false, print_default = false;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  auto* cmd = app.add_subcommand("sweep", "Run an experiment sweep and write CSV");
  auto* config = cmd->add_option("--config", a.config, "Sweep config file");
  auto* def = cmd->add_flag("--default", a.use_default, "Use the built-in default sweep");
  auto* print = cmd->add_flag("--print-default", a.print_default, "Print the built-in default config and exit");
  config->excludes(def)->excludes(print);
  def->excludes(print);
  cmd->add_option("--seed", a.seed, "Master seed")->capture_default_str();
  cmd->add_option("-o,--output", a.output, "CSV output file (default: stdout)");
  cmd->add_flag("--summary", a.summary, "Print per-test minimum rejection/distance and rate means to stderr");
}

int run_sweep_cmd(const SweepArgs& a, Io io) {
  if (a.print_default) {
    io.out << default_sweep_config_text();
    return kExitOk;
  }
  if (a.config.empty() && !a.use_default) throw UsageError("sweep needs --config FILE or --default");
  const SweepConfig config = a.use_default ? default_sweep_config() : parse_sweep_config(read_input(a.config, io.in));
  const auto rows = run_sweep(config, a.seed);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  emit(a.output, csv.str(), io.out);
  if (a.summary) write_sweep_summary(io.err, summarize(rows));
  return kExitOk;
}

// spectral -------------------------------------------------------------------

struct SpectralArgs {
  std::vector<std::string> parts;
  double tolerance = kSpectralTolerance;
};

void add_spectral(CLI::App& app, SpectralArgs& a) {
  auto* cmd = app.add_subcommand("spectral", "Verify the skeleton spectrum of complete multipartite complexes");
  cmd->add_option("--parts", a.parts, "Part sizes, e.g. 2,2,2 (repeatable)")->required();
  cmd->add_option("--tolerance", a.tolerance, "Classification tolerance")->capture_default_str();
}

int run_spectral(const SpectralArgs& a, Io io) {
  io.out << spectrum_csv_header() << '\n';
  std::size_t failures = 0;
  for (const auto& text : a.parts) {
    const Shape parts = Shape::parse(text);
    const auto report = verify_spectrum(build_skeleton(parts.dims()), a.tolerance);
    io.out << to_csv_row(report) << '\n';
    const std::size_t d = parts.rank();
    const std::size_t n = std::accumulate(parts.dims().begin(), parts.dims().end(), std::size_t{0});
    if (report.count_one != 1 || report.count_zero != n - d || report.count_negative != d - 1 ||
        report.count_other != 0) {
      io.err << "spectrum of " << text << " does not match {1, 0 x (n - d), -1/(d-1) x (d - 1)}\n";
      ++failures;
    }
  }
  if (failures > 0) throw CheckFailed(std::to_string(failures) + " spectra failed verification");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Property testers for direct sums and rank-one tensors over F2", "rank1check"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "rank1check 0.1.0");
  GenArgs gen;
  TestArgs test;
  OracleArgs oracle;
  DecodeArgs decode;
  SweepArgs sweep;
  SpectralArgs spectral;
  add_gen(app, gen);
  add_test(app, test);
  add_oracle(app, oracle);
  add_decode(app, decode);
  add_sweep(app, sweep);
  add_spectral(app, spectral);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Io io{in, out, err};
  try {
    if (app.got_subcommand("gen")) return run_gen(gen, io);
    if (app.got_subcommand("test")) return run_test(test, io);
    if (app.got_subcommand("oracle")) return run_oracle(oracle, io);
    if (app.got_subcommand("decode")) return run_decode(decode, io);
    if (app.got_subcommand("sweep")) return run_sweep_cmd(sweep, io);
    return run_spectral(spectral, io);
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace rank1check::cli
