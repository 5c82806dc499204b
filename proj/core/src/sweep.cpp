#include "rank1check/sweep.hpp"

#include "rank1check/errors.hpp"
#include "rank1check/tensor_io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

namespace rank1check {

namespace {

constexpr std::string_view kDefaultConfig =
    "# default sweep\n"
    "[domain]\n"
    "shapes = 2,2 ; 2,2,2 ; 3,2,2 ; 3,3,3\n"
    "[tests]\n"
    "tests = sic-subsets, sic-cube, shapka, blr, conjectured\n"
    "[generators]\n"
    "kinds = direct-sum, corrupted-rate, corrupted-count, uniform, indicator\n"
    "rates = 0.0625, 0.125, 0.25\n"
    "counts = 1, 2, 4\n"
    "[sampling]\n"
    "trials = 20000\n"
    "seeds = 1, 2\n"
    "oracle_budget = 4294967296\n";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = value.find(sep, start);
    out.push_back(trim(value.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void field_error(std::size_t line, std::string_view key, const std::string& what) {
  throw ParseError(line, "field '" + std::string(key) + "': " + what);
}

std::uint64_t parse_u64(std::string_view token, std::size_t line, std::string_view key) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
    field_error(line, key, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

double parse_rate(std::string_view token, std::size_t line, std::string_view key) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !(value >= 0.0 && value <= 1.0)) {
    field_error(line, key, "expected a rate in [0, 1], got '" + std::string(token) + "'");
  }
  return value;
}

template <class T, class Parse>
std::vector<T> parse_items(std::string_view value, char sep, std::size_t line, std::string_view key, Parse parse) {
  std::vector<T> out;
  for (auto item : split_list(value, sep)) {
    if (item.empty()) field_error(line, key, "empty list item");
    out.push_back(parse(item));
  }
  return out;
}

std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", rate);
  return buf;
}

std::string format_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Job {
  TestKind test;
  GeneratorSpec spec;
  std::string param;
  std::uint64_t trials;
  std::uint64_t trial_seed;
};

}  // namespace

SweepRow measure(const BinaryTensor& f, TestKind test, std::string kind, std::string param, std::uint64_t trials,
                 std::uint64_t trial_seed, const Oracle& oracle, std::size_t threads) {
  const Shape& shape = f.shape();
  SweepRow row{test, shape, std::move(kind), std::move(param), 0, {}, {}, {}, {}};
  row.estimate = estimate_rejection(f, test, trials, trial_seed, threads);
  try {
    if (oracle.can_enumerate(shape, test)) row.exact_rejection = oracle.exact_rejection(f, test).value();
  } catch (const BudgetExceeded&) {
  }
  try {
    if (test == TestKind::kBlr) {
      row.exact_distance = oracle.nearest_affine(f).distance;
    } else if (oracle.can_find_nearest(shape)) {
      row.exact_distance = oracle.nearest_direct_sum(f).distance;
    }
  } catch (const BudgetExceeded&) {
  }
  if (row.exact_rejection && row.exact_distance && *row.exact_rejection > 0) {
    row.ratio = *row.exact_distance / *row.exact_rejection;
  }
  return row;
}

SweepConfig parse_sweep_config(std::string_view text) {
  SweepConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t kinds_line = 0;
  bool have_shapes = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (!seen.insert(std::string(key)).second) field_error(line_no, key, "duplicate key");
    if (value.empty()) field_error(line_no, key, "empty value");

    if (key == "shapes") {
      config.shapes = parse_items<Shape>(value, ';', line_no, key, [&](std::string_view item) {
        try {
          return Shape::parse(item);
        } catch (const std::exception& e) {
          field_error(line_no, key, "bad shape '" + std::string(item) + "': " + e.what());
        }
      });
      have_shapes = true;
    } else if (key == "tests") {
      config.tests = parse_items<TestKind>(value, ',', line_no, key, [&](std::string_view item) {
        auto kind = parse_test_kind(item);
        if (!kind) field_error(line_no, key, "unknown test '" + std::string(item) + "'");
        return *kind;
      });
    } else if (key == "kinds") {
      config.kinds = parse_items<GeneratorKind>(value, ',', line_no, key, [&](std::string_view item) {
        if (item == "exhaustive") return GeneratorKind::kCode;
        auto kind = parse_generator_kind(item);
        if (!kind || *kind == GeneratorKind::kCode) {
          field_error(line_no, key, "unknown generator kind '" + std::string(item) + "'");
        }
        return *kind;
      });
      kinds_line = line_no;
    } else if (key == "rates") {
      config.rates =
          parse_items<double>(value, ',', line_no, key, [&](std::string_view item) { return parse_rate(item, line_no, key); });
    } else if (key == "counts") {
      config.counts = parse_items<std::uint64_t>(value, ',', line_no, key,
                                                 [&](std::string_view item) { return parse_u64(item, line_no, key); });
    } else if (key == "trials") {
      config.trials = parse_u64(value, line_no, key);
      if (config.trials == 0) field_error(line_no, key, "trials must be at least 1");
    } else if (key == "seeds") {
      config.seeds = parse_items<std::uint64_t>(value, ',', line_no, key,
                                                [&](std::string_view item) { return parse_u64(item, line_no, key); });
    } else if (key == "oracle_budget") {
      config.oracle_budget = parse_u64(value, line_no, key);
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_shapes) throw ParseError(line_no, "missing required key 'shapes'");
  auto wants = [&](GeneratorKind k) { return std::find(config.kinds.begin(), config.kinds.end(), k) != config.kinds.end(); };
  if (wants(GeneratorKind::kCorruptedRate) && config.rates.empty()) {
    field_error(kinds_line, "kinds", "corrupted-rate needs a 'rates' list");
  }
  if (wants(GeneratorKind::kCorruptedCount) && config.counts.empty()) {
    field_error(kinds_line, "kinds", "corrupted-count needs a 'counts' list");
  }
  for (const auto& shape : config.shapes) {
    for (auto c : config.counts) {
      if (wants(GeneratorKind::kCorruptedCount) && c > shape.size()) {
        throw ParseError(kinds_line, "flip count " + std::to_string(c) + " exceeds size of shape " + shape.to_string());
      }
    }
    if (wants(GeneratorKind::kCode) && shape.size() > kExhaustiveSweepEntries) {
      field_error(kinds_line, "kinds", "exhaustive needs at most " + std::to_string(kExhaustiveSweepEntries) +
                                           " entries, shape " + shape.to_string() + " has " +
                                           std::to_string(shape.size()));
    }
  }
  return config;
}

SweepConfig read_sweep_config(std::istream& is) { return parse_sweep_config(detail::slurp(is)); }

std::string_view default_sweep_config_text() noexcept { return kDefaultConfig; }

SweepConfig default_sweep_config() { return parse_sweep_config(kDefaultConfig); }

std::vector<SweepRow> run_sweep(const SweepConfig& config, std::uint64_t master_seed, std::size_t threads) {
  std::vector<Job> jobs;
  for (const auto& shape : config.shapes) {
    for (auto kind : config.kinds) {
      std::vector<std::pair<GeneratorSpec, std::string>> variants;
      GeneratorSpec base{kind, shape, 0, 0, 0, std::nullopt, 0};
      switch (kind) {
        case GeneratorKind::kCorruptedRate:
          for (double r : config.rates) {
            auto s = base;
            s.rate = r;
            variants.emplace_back(s, format_rate(r));
          }
          break;
        case GeneratorKind::kCorruptedCount:
          for (auto c : config.counts) {
            auto s = base;
            s.count = c;
            variants.emplace_back(s, std::to_string(c));
          }
          break;
        case GeneratorKind::kCode:
          for (std::uint64_t code = 0; code < (std::uint64_t{1} << shape.size()); ++code) {
            auto s = base;
            s.code = code;
            variants.emplace_back(s, BinaryTensor::from_code(shape, code).to_bit_string());
          }
          break;
        default:
          variants.emplace_back(base, "-");
      }
      for (auto& [spec, param] : variants) {
        for (auto seed : config.seeds) {
          const std::uint64_t generator_seed = derive_seed(master_seed, seed);
          for (auto test : config.tests) {
            if (test == TestKind::kBlr && !shape.is_binary_cube()) continue;
            Job job{test, spec, param, config.trials,
                    derive_seed(generator_seed, 1 + static_cast<std::uint64_t>(test))};
            job.spec.seed = generator_seed;
            jobs.push_back(std::move(job));
          }
        }
      }
    }
  }

  const Oracle oracle(config.oracle_budget);
  std::vector<std::optional<SweepRow>> rows(jobs.size());
  if (threads == 0) threads = worker_threads();
  threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        const Job& job = jobs[i];
        const std::string_view kind =
            job.spec.kind == GeneratorKind::kCode ? std::string_view("exhaustive") : to_string(job.spec.kind);
        rows[i] = measure(generate(job.spec), job.test, std::string(kind), job.param, job.trials, job.trial_seed, oracle);
        rows[i]->generator_seed = job.spec.seed;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SweepRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary summary;
  std::map<std::pair<TestKind, double>, std::pair<double, std::size_t>> sums;
  for (const auto& row : rows) {
    if (row.exact_rejection && row.exact_distance && *row.exact_distance > 0) {
      const Rational r = *row.exact_rejection / *row.exact_distance;
      auto it = summary.min_rejection_over_distance.find(row.test);
      if (it == summary.min_rejection_over_distance.end()) {
        summary.min_rejection_over_distance.emplace(row.test, r);
      } else if (r < it->second) {
        it->second = r;
      }
    }
    if (row.kind == to_string(GeneratorKind::kCorruptedRate)) {
      const double rate = std::stod(row.param);
      auto& [sum, n] = sums[{row.test, rate}];
      sum += row.estimate.estimate;
      ++n;
    }
  }
  for (const auto& [key, v] : sums) summary.mean_estimate_by_rate[key] = v.first / static_cast<double>(v.second);
  return summary;
}

std::string_view sweep_csv_header() noexcept {
  return "test,shape,kind,param,trials,rejections,est,lo,hi,exact_rej,exact_dist,ratio";
}

std::string to_csv_row(const SweepRow& row) {
  auto opt = [](const std::optional<Rational>& r) { return r ? to_string(*r) : std::string(); };
  std::string out;
  out += to_string(row.test);
  out += ',' + row.shape.to_string() + ',' + row.kind + ',' + row.param;
  out += ',' + std::to_string(row.estimate.trials) + ',' + std::to_string(row.estimate.rejections);
  out += ',' + format_fixed(row.estimate.estimate) + ',' + format_fixed(row.estimate.interval.lo) + ',' +
         format_fixed(row.estimate.interval.hi);
  out += ',' + opt(row.exact_rejection) + ',' + opt(row.exact_distance) + ',' + opt(row.ratio);
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << sweep_csv_header() << '\n';
  for (const auto& row : rows) os << to_csv_row(row) << '\n';
}

void write_sweep_summary(std::ostream& os, const SweepSummary& summary) {
  for (const auto& [test, r] : summary.min_rejection_over_distance) {
    os << "min exact_rej/exact_dist " << to_string(test) << ": " << to_string(r) << " (" << to_double(r) << ")\n";
  }
  for (const auto& [key, mean] : summary.mean_estimate_by_rate) {
    os << "mean est " << to_string(key.first) << " rate " << format_rate(key.second) << ": " << format_fixed(mean)
       << '\n';
  }
}

}  // namespace rank1check
