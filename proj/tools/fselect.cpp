#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fselect/cv.hpp"
#include "fselect/dataset.hpp"
#include "fselect/parallel.hpp"
#include "fselect/report_io.hpp"
#include "fselect/selector.hpp"
#include "fselect/synthetic.hpp"
#include "fselect/types.hpp"

namespace {

using namespace fselect;

struct Options {
  std::string input;
  std::string label_col;
  std::string delimiter = ",";
  std::string method = "mmaiq";
  double lambda = 1.0;
  std::string k = "auto";
  int bins = 16;
  std::string discretizer = "equal-frequency";
  int folds = 5;
  std::uint64_t seed = 42;
  std::optional<int> threads;
  std::int64_t par_threshold = 64;
  bool cv_reselect = false;
  std::string output;
  std::string format = "json";
  int repeats = 3;
  std::string workers_list = "1,2,4";
};

std::string basename_of(const std::string& path) {
  const auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

Objective parse_objective(const Options& opt) {
  Objective objective;
  if (opt.method == "mmaiq") {
    objective.kind = ObjectiveKind::mmaiq;
  } else if (opt.method == "mmais") {
    objective.kind = ObjectiveKind::mmais;
  } else {
    throw ConfigError("method must be mmaiq or mmais");
  }
  if (opt.lambda <= 0.0) throw ConfigError("lambda must be > 0");
  objective.lambda = opt.lambda;
  return objective;
}

DiscretizerSpec parse_discretizer(const Options& opt) {
  DiscretizerSpec spec;
  if (opt.discretizer == "equal-frequency") {
    spec.method = BinningMethod::equal_frequency;
  } else if (opt.discretizer == "equal-width") {
    spec.method = BinningMethod::equal_width;
  } else if (opt.discretizer == "passthrough") {
    spec.method = BinningMethod::passthrough;
  } else {
    throw ConfigError("discretizer must be equal-frequency, equal-width or passthrough");
  }
  if (spec.method != BinningMethod::passthrough && opt.bins < 2)
    throw ConfigError("bins must be >= 2");
  spec.bins = opt.bins;
  return spec;
}

// "auto" -> nullopt, otherwise a validated positive integer.
std::optional<Index> parse_k(const std::string& k) {
  if (k == "auto") return std::nullopt;
  try {
    std::size_t consumed = 0;
    const long long value = std::stoll(k, &consumed);
    if (consumed != k.size() || value < 1)
      throw ConfigError("k must be >= 1 or auto");
    return static_cast<Index>(value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("k must be >= 1 or auto");
  }
}

char parse_delimiter(const std::string& d) {
  if (d == "\\t") return '\t';
  if (d.size() != 1) throw ConfigError("delimiter must be a single character");
  return d[0];
}

std::vector<int> parse_workers_list(const std::string& csv) {
  std::vector<int> workers;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    const auto end = csv.find(',', begin);
    const std::string item =
        csv.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    if (item.empty()) throw ConfigError("workers-list must be comma-separated integers");
    try {
      std::size_t consumed = 0;
      const int value = std::stoi(item, &consumed);
      if (consumed != item.size() || value < 1)
        throw ConfigError("workers-list entries must be >= 1");
      workers.push_back(value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("workers-list must be comma-separated integers");
    }
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (workers.empty()) throw ConfigError("workers-list must not be empty");
  return workers;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path + ": write failure");
}

DiscreteDataset load_and_discretize(const Options& opt) {
  if (opt.label_col.empty()) throw ConfigError("--label-col is required with --input");
  const RawDataset raw =
      load_csv(opt.input, opt.label_col, parse_delimiter(opt.delimiter));
  return discretize(raw, parse_discretizer(opt));
}

RunMeta make_meta(const std::string& command, const Options& opt,
                  const DiscreteDataset& data) {
  RunMeta meta;
  meta.command = command;
  meta.input = opt.input.empty() ? "synthetic" : basename_of(opt.input);
  meta.rows = data.rows();
  meta.features = data.feature_count();
  meta.classes = data.class_count;
  meta.objective = parse_objective(opt);
  meta.discretizer = parse_discretizer(opt);
  meta.seed = opt.seed;
  return meta;
}

int run_rank(const Options& opt) {
  const auto k = parse_k(opt.k);
  if (!k && opt.folds < 2) throw ConfigError("k=auto requires at least 2 folds");
  const Objective objective = parse_objective(opt);
  const DiscreteDataset data = load_and_discretize(opt);
  if (k && *k > data.feature_count())
    throw ConfigError("k exceeds the number of features");

  ParallelEngine engine({resolve_worker_count(opt.threads), opt.par_threshold});
  const RunMeta meta = make_meta("rank", opt, data);

  SelectionReport report =
      select(data, objective, k ? *k : data.feature_count(), engine);

  Json json;
  if (!k) {
    CvOptions cv_options;
    cv_options.folds = opt.folds;
    cv_options.seed = opt.seed;
    cv_options.reselect = opt.cv_reselect;
    const CvCurve curve = cv_curve(data, report, cv_options, engine);
    // Keep the best_k prefix of the full ranking.
    SelectionReport truncated = report;
    truncated.ranking.resize(static_cast<std::size_t>(
        std::min<Index>(curve.best_k, static_cast<Index>(report.ranking.size()))));
    const auto kept = static_cast<Index>(truncated.ranking.size());
    truncated.pairwise_v = report.pairwise_v.topLeftCorner(kept, kept).eval();
    truncated.k_requested = kept;
    json = rank_report_json(truncated, meta, data.warnings, &curve, &cv_options);
  } else {
    json = rank_report_json(report, meta, data.warnings, nullptr, nullptr);
  }
  write_output(render_report(json, parse_output_format(opt.format)), opt.output);
  return 0;
}

int run_cv(const Options& opt) {
  if (opt.folds < 2) throw ConfigError("folds must be >= 2");
  const auto k = parse_k(opt.k);
  const Objective objective = parse_objective(opt);
  const DiscreteDataset data = load_and_discretize(opt);

  ParallelEngine engine({resolve_worker_count(opt.threads), opt.par_threshold});
  const RunMeta meta = make_meta("cv", opt, data);

  const Index k_max = k ? std::min(*k, data.feature_count()) : data.feature_count();
  const SelectionReport report = select(data, objective, k_max, engine);

  CvOptions cv_options;
  cv_options.folds = opt.folds;
  cv_options.seed = opt.seed;
  cv_options.reselect = opt.cv_reselect;
  const CvCurve curve = cv_curve(data, report, cv_options, engine);

  const Json json = cv_report_json(curve, report, cv_options, meta, data.warnings);
  write_output(render_report(json, parse_output_format(opt.format)), opt.output);
  return 0;
}

int run_bench(const Options& opt) {
  if (opt.repeats < 1) throw ConfigError("repeats must be >= 1");
  const std::vector<int> workers_list = parse_workers_list(opt.workers_list);
  const Objective objective = parse_objective(opt);

  DiscreteDataset data;
  if (opt.input.empty()) {
    SyntheticSpec spec;
    spec.seed = opt.seed;
    data = make_synthetic(spec);
  } else {
    data = load_and_discretize(opt);
  }
  const auto k = parse_k(opt.k);
  const Index k_run = k ? std::min(*k, data.feature_count()) : data.feature_count();

  TimingReport timing;
  timing.repeats = opt.repeats;
  timing.par_threshold = opt.par_threshold;
  timing.k = k_run;

  std::set<std::uint64_t> call_counts;
  for (const int workers : workers_list) {
    ParallelEngine engine({workers, opt.par_threshold});
    const TimingSamples samples = measure(
        [&] {
          const SelectionReport report = select(data, objective, k_run, engine);
          call_counts.insert(report.cvtest_calls);
        },
        opt.repeats, workers);
    TimingReport::Row row;
    row.workers = workers;
    row.samples_seconds = samples.seconds;
    row.median_seconds = samples.median_seconds;
    timing.rows.push_back(std::move(row));
  }
  if (call_counts.size() > 1)
    timing.warnings.push_back("cvtest call count varied across runs");
  timing.cvtest_calls = call_counts.empty() ? 0 : *call_counts.begin();

  const auto baseline = std::find_if(timing.rows.begin(), timing.rows.end(),
                                     [](const auto& row) { return row.workers == 1; });
  if (baseline == timing.rows.end()) {
    timing.warnings.push_back("speedups omitted: workers-list does not include 1");
  } else {
    for (auto& row : timing.rows)
      row.speedup = baseline->median_seconds / row.median_seconds;
  }

  const RunMeta meta = make_meta("bench", opt, data);
  const Json json = bench_report_json(timing, meta);
  write_output(render_report(json, parse_output_format(opt.format)), opt.output);
  return 0;
}

void add_common_options(CLI::App* cmd, Options& opt, bool input_required) {
  auto* input = cmd->add_option("--input", opt.input, "input CSV file");
  if (input_required) input->required();
  cmd->add_option("--label-col", opt.label_col, "label column name or 0-based index");
  cmd->add_option("--delimiter", opt.delimiter, "field delimiter (default ,)");
  cmd->add_option("--method", opt.method, "objective: mmaiq or mmais");
  cmd->add_option("--lambda", opt.lambda, "redundancy weight for mmais");
  cmd->add_option("--bins", opt.bins, "discretizer bin budget");
  cmd->add_option("--discretizer", opt.discretizer,
                  "equal-frequency, equal-width or passthrough");
  cmd->add_option("--seed", opt.seed, "seed for folds and synthetic data");
  cmd->add_option("--par-threshold", opt.par_threshold,
                  "batch size at or below which work runs inline");
  cmd->add_option("--output", opt.output, "output path (default stdout)");
  cmd->add_option("--format", opt.format, "json, csv or text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature ranking by Cramer's V association with task-parallel evaluation"};
  app.require_subcommand(1);

  Options opt;
  int threads_value = 0;

  auto* rank = app.add_subcommand("rank", "rank features");
  add_common_options(rank, opt, true);
  rank->add_option("--k", opt.k, "number of features, or auto");
  rank->add_option("--folds", opt.folds, "CV folds used when k=auto");
  rank->add_option("--threads", threads_value, "worker count");
  rank->add_flag("--cv-reselect", opt.cv_reselect, "re-rank inside each CV fold");

  auto* cv = app.add_subcommand("cv", "cross-validate accuracy by prefix size");
  add_common_options(cv, opt, true);
  cv->add_option("--k", opt.k, "cap on ranking length, or auto for all features");
  cv->add_option("--folds", opt.folds, "number of folds");
  cv->add_option("--threads", threads_value, "worker count");
  cv->add_flag("--cv-reselect", opt.cv_reselect, "re-rank inside each CV fold");

  auto* bench = app.add_subcommand("bench", "time selection across worker counts");
  add_common_options(bench, opt, false);
  bench->add_option("--k", opt.k, "number of features to rank, or auto for all");
  bench->add_option("--repeats", opt.repeats, "timing repeats per worker count");
  bench->add_option("--workers-list", opt.workers_list,
                    "comma-separated worker counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  if (rank->count("--threads") || cv->count("--threads"))
    opt.threads = threads_value;

  try {
    if (rank->parsed()) return run_rank(opt);
    if (cv->parsed()) return run_cv(opt);
    return run_bench(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
