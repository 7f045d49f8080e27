#include "fselect/report_io.hpp"

#include <algorithm>
#include <cstdio>

namespace fselect {

namespace {

std::string objective_name(ObjectiveKind kind) {
  return kind == ObjectiveKind::mmaiq ? "mmaiq" : "mmais";
}

std::string method_name(BinningMethod method) {
  switch (method) {
    case BinningMethod::equal_frequency: return "equal_frequency";
    case BinningMethod::equal_width: return "equal_width";
    case BinningMethod::passthrough: return "passthrough";
  }
  return "equal_frequency";
}

Json meta_json(const RunMeta& meta) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["command"] = meta.command;
  j["dataset"] = {{"input", meta.input},
                  {"rows", meta.rows},
                  {"features", meta.features},
                  {"classes", meta.classes}};
  j["objective"] = {{"method", objective_name(meta.objective.kind)},
                    {"lambda", meta.objective.lambda}};
  j["discretizer"] = {{"method", method_name(meta.discretizer.method)},
                      {"bins", meta.discretizer.bins}};
  j["seed"] = meta.seed;
  return j;
}

Json ranking_json(const SelectionReport& report) {
  Json rows = Json::array();
  if (report.ranking.empty()) return rows;
  const auto curve = score_curve(report);
  for (std::size_t i = 0; i < report.ranking.size(); ++i) {
    const auto& entry = report.ranking[i];
    rows.push_back({{"rank", i + 1},
                    {"feature_index", entry.feature_index},
                    {"feature_name", entry.feature_name},
                    {"score", entry.score},
                    {"relevance", entry.relevance},
                    {"mean_redundancy", entry.mean_redundancy},
                    {"cum_association", curve[i].association},
                    {"cum_redundancy", curve[i].redundancy}});
  }
  return rows;
}

Json curve_json(const CvCurve& curve) {
  Json j;
  j["best_k"] = curve.best_k;
  j["accuracy"] = std::vector<double>(curve.accuracy.data(),
                                      curve.accuracy.data() + curve.accuracy.size());
  Json folds = Json::array();
  for (Index f = 0; f < curve.fold_accuracies.rows(); ++f) {
    std::vector<double> row(curve.fold_accuracies.cols());
    for (Index k = 0; k < curve.fold_accuracies.cols(); ++k)
      row[static_cast<std::size_t>(k)] = curve.fold_accuracies(f, k);
    folds.push_back(row);
  }
  j["fold_accuracies"] = folds;
  return j;
}

std::string fmt_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string fmt_short(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string rank_csv(const Json& report) {
  std::string out =
      "rank,feature_index,feature_name,score,relevance,mean_redundancy,"
      "cum_association,cum_redundancy\n";
  for (const auto& row : report.at("ranking")) {
    out += std::to_string(row.at("rank").get<std::size_t>()) + ",";
    out += std::to_string(row.at("feature_index").get<long long>()) + ",";
    out += row.at("feature_name").get<std::string>() + ",";
    out += fmt_full(row.at("score").get<double>()) + ",";
    out += fmt_full(row.at("relevance").get<double>()) + ",";
    out += fmt_full(row.at("mean_redundancy").get<double>()) + ",";
    out += fmt_full(row.at("cum_association").get<double>()) + ",";
    out += fmt_full(row.at("cum_redundancy").get<double>()) + "\n";
  }
  return out;
}

std::string cv_csv(const Json& report) {
  const auto& folds = report.at("fold_accuracies");
  std::string out = "k,mean_accuracy";
  for (std::size_t f = 0; f < folds.size(); ++f)
    out += ",fold_" + std::to_string(f);
  out += "\n";
  const auto& accuracy = report.at("accuracy");
  for (std::size_t k = 0; k < accuracy.size(); ++k) {
    out += std::to_string(k + 1) + "," + fmt_full(accuracy[k].get<double>());
    for (std::size_t f = 0; f < folds.size(); ++f)
      out += "," + fmt_full(folds[f][k].get<double>());
    out += "\n";
  }
  return out;
}

std::string bench_csv(const Json& report) {
  std::string out = "workers,median_seconds,speedup,cvtest_calls";
  const auto& rows = report.at("rows");
  std::size_t repeats = 0;
  for (const auto& row : rows)
    repeats = std::max(repeats, row.at("samples_seconds").size());
  for (std::size_t s = 0; s < repeats; ++s) out += ",sample_" + std::to_string(s);
  out += "\n";
  for (const auto& row : rows) {
    out += std::to_string(row.at("workers").get<int>()) + ",";
    out += fmt_full(row.at("median_seconds").get<double>()) + ",";
    out += row.at("speedup").is_null() ? "" : fmt_full(row.at("speedup").get<double>());
    out += "," + std::to_string(report.at("cvtest_calls").get<std::uint64_t>());
    for (const auto& sample : row.at("samples_seconds"))
      out += "," + fmt_full(sample.get<double>());
    out += "\n";
  }
  return out;
}

void append_warnings(const Json& report, std::string& out) {
  if (!report.contains("warnings") || report.at("warnings").empty()) return;
  out += "warnings:\n";
  for (const auto& w : report.at("warnings"))
    out += "  - " + w.get<std::string>() + "\n";
}

std::string rank_text(const Json& report) {
  std::string out = "feature ranking (" +
                    report.at("objective").at("method").get<std::string>() + ")\n";
  out += "rank  index  score      relevance  mean_red   name\n";
  for (const auto& row : report.at("ranking")) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-5zu %-6lld %-10s %-10s %-10s %s\n",
                  row.at("rank").get<std::size_t>(),
                  row.at("feature_index").get<long long>(),
                  fmt_short(row.at("score").get<double>()).c_str(),
                  fmt_short(row.at("relevance").get<double>()).c_str(),
                  fmt_short(row.at("mean_redundancy").get<double>()).c_str(),
                  row.at("feature_name").get<std::string>().c_str());
    out += line;
  }
  if (report.contains("cv")) {
    out += "auto k: best_k = " +
           std::to_string(report.at("cv").at("best_k").get<long long>()) + "\n";
  }
  append_warnings(report, out);
  return out;
}

std::string cv_text(const Json& report) {
  std::string out = "cross-validation accuracy by prefix size\n";
  out += "k     mean_accuracy\n";
  const auto& accuracy = report.at("accuracy");
  for (std::size_t k = 0; k < accuracy.size(); ++k) {
    char line[64];
    std::snprintf(line, sizeof(line), "%-5zu %s\n", k + 1,
                  fmt_short(accuracy[k].get<double>()).c_str());
    out += line;
  }
  out += "best_k: " + std::to_string(report.at("best_k").get<long long>()) + "\n";
  append_warnings(report, out);
  return out;
}

std::string bench_text(const Json& report) {
  std::string out = "benchmark (" + std::to_string(report.at("repeats").get<int>()) +
                    " repeats, cvtest_calls per run = " +
                    std::to_string(report.at("cvtest_calls").get<std::uint64_t>()) +
                    ")\n";
  out += "workers  median_s   speedup\n";
  for (const auto& row : report.at("rows")) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-8d %-10s %s\n", row.at("workers").get<int>(),
                  fmt_short(row.at("median_seconds").get<double>()).c_str(),
                  row.at("speedup").is_null()
                      ? "-"
                      : fmt_short(row.at("speedup").get<double>()).c_str());
    out += line;
  }
  append_warnings(report, out);
  return out;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "text") return OutputFormat::text;
  throw ConfigError("unknown output format '" + name + "'");
}

Json rank_report_json(const SelectionReport& report, const RunMeta& meta,
                      const std::vector<std::string>& dataset_warnings,
                      const CvCurve* auto_cv, const CvOptions* auto_cv_options) {
  Json j = meta_json(meta);
  j["k_requested"] = report.k_requested;
  j["k_selected"] = report.ranking.size();
  j["ranking"] = ranking_json(report);
  if (auto_cv != nullptr && auto_cv_options != nullptr) {
    Json cv = curve_json(*auto_cv);
    cv["folds"] = auto_cv_options->folds;
    cv["stratified"] = auto_cv_options->stratified;
    cv["reselect"] = auto_cv_options->reselect;
    j["cv"] = cv;
  }
  std::vector<std::string> warnings = dataset_warnings;
  for (const auto& w : report.warnings)
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
      warnings.push_back(w);
  if (auto_cv != nullptr)
    warnings.insert(warnings.end(), auto_cv->warnings.begin(), auto_cv->warnings.end());
  j["warnings"] = warnings;
  return j;
}

Json cv_report_json(const CvCurve& curve, const SelectionReport& ranking,
                    const CvOptions& options, const RunMeta& meta,
                    const std::vector<std::string>& dataset_warnings) {
  Json j = meta_json(meta);
  j["folds"] = options.folds;
  j["stratified"] = options.stratified;
  j["reselect"] = options.reselect;
  j["k_max"] = ranking.ranking.size();
  j.update(curve_json(curve));
  j["ranking"] = ranking_json(ranking);
  std::vector<std::string> warnings = dataset_warnings;
  for (const auto& w : ranking.warnings)
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
      warnings.push_back(w);
  warnings.insert(warnings.end(), curve.warnings.begin(), curve.warnings.end());
  j["warnings"] = warnings;
  return j;
}

Json bench_report_json(const TimingReport& timing, const RunMeta& meta) {
  Json j = meta_json(meta);
  j["k"] = timing.k;
  j["repeats"] = timing.repeats;
  j["par_threshold"] = timing.par_threshold;
  j["cvtest_calls"] = timing.cvtest_calls;
  Json rows = Json::array();
  for (const auto& row : timing.rows) {
    Json r = {{"workers", row.workers},
              {"median_seconds", row.median_seconds},
              {"samples_seconds", row.samples_seconds}};
    if (row.speedup)
      r["speedup"] = *row.speedup;
    else
      r["speedup"] = nullptr;
    rows.push_back(r);
  }
  j["rows"] = rows;
  j["warnings"] = timing.warnings;
  return j;
}

std::string render_report(const Json& report, OutputFormat format) {
  if (format == OutputFormat::json) return report.dump(2) + "\n";
  const std::string command = report.at("command").get<std::string>();
  if (format == OutputFormat::csv) {
    if (command == "rank") return rank_csv(report);
    if (command == "cv") return cv_csv(report);
    return bench_csv(report);
  }
  if (command == "rank") return rank_text(report);
  if (command == "cv") return cv_text(report);
  return bench_text(report);
}

}  // namespace fselect
