#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fselect/cv.hpp"
#include "fselect/dataset.hpp"
#include "fselect/selector.hpp"
#include "fselect/types.hpp"

#include "json.hpp"

namespace fselect {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

enum class OutputFormat { json, csv, text };

OutputFormat parse_output_format(const std::string& name);

/// Run description shared by every report (dataset fingerprint plus the
/// options that shaped the result). `input` carries the basename only so
/// reports are path-independent.
struct RunMeta {
  std::string command;
  std::string input;  // basename, or "synthetic"
  Index rows = 0;
  Index features = 0;
  int classes = 0;
  Objective objective;
  DiscretizerSpec discretizer;
  std::uint64_t seed = 0;
};

/// Per-worker-count benchmark rows; speedups are relative to the workers=1
/// row and the call count is identical across rows by work conservation.
struct TimingReport {
  struct Row {
    int workers = 0;
    std::vector<double> samples_seconds;
    double median_seconds = 0.0;
    std::optional<double> speedup;  // median(workers=1) / median(this row)
  };
  std::vector<Row> rows;
  int repeats = 0;
  std::int64_t par_threshold = 0;
  Index k = 0;
  std::uint64_t cvtest_calls = 0;
  std::vector<std::string> warnings;
};

Json rank_report_json(const SelectionReport& report, const RunMeta& meta,
                      const std::vector<std::string>& dataset_warnings,
                      const CvCurve* auto_cv, const CvOptions* auto_cv_options);

Json cv_report_json(const CvCurve& curve, const SelectionReport& ranking,
                    const CvOptions& options, const RunMeta& meta,
                    const std::vector<std::string>& dataset_warnings);

Json bench_report_json(const TimingReport& timing, const RunMeta& meta);

/// Serializes a report in the requested format. JSON is the stable,
/// golden-testable form; csv and text are derived views.
std::string render_report(const Json& report, OutputFormat format);

}  // namespace fselect
