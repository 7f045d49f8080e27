#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "fselect/association.hpp"
#include "fselect/dataset.hpp"
#include "fselect/types.hpp"

namespace fselect {

struct EngineConfig {
  int workers = 1;                  // 1 means fully sequential
  std::int64_t par_threshold = 64;  // batches at or below this size run inline
};

/// One per-step evaluation batch: every candidate is tested against the same
/// partner column (the class labels or the last-selected feature).
struct TaskBatch {
  std::vector<Index> candidates;          // strictly increasing feature indices
  std::optional<Index> partner_feature;   // nullopt => class labels
};

/// Fork/join executor over independent association tasks.
///
/// Worker threads are created once and reused across batches. Tasks are pure
/// and each output slot is written by exactly one worker, so results are
/// bit-identical for every (workers, par_threshold) configuration. One
/// coordinating thread may drive an engine instance at a time.
class ParallelEngine {
 public:
  explicit ParallelEngine(EngineConfig config);
  ~ParallelEngine();
  ParallelEngine(const ParallelEngine&) = delete;
  ParallelEngine& operator=(const ParallelEngine&) = delete;

  const EngineConfig& config() const { return config_; }

  /// Runs body(begin, end) over [0, count) split into `workers` contiguous
  /// blocks whose sizes differ by at most one. Runs inline when count is at
  /// or below par_threshold or when workers == 1.
  void for_blocks(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

  /// Running total of cvtest evaluations dispatched through this engine.
  std::uint64_t cvtest_calls() const { return cvtest_calls_.load(); }
  void add_cvtest_calls(std::uint64_t n) { cvtest_calls_.fetch_add(n); }

  /// Number of cross-worker dispatches (0 while every batch stayed inline).
  std::uint64_t fork_events() const { return fork_events_.load(); }

  void reset_counters();

 private:
  void worker_loop(int slot);

  EngineConfig config_;
  std::vector<std::thread> threads_;  // workers - 1 helpers; slot 0 is the caller

  std::mutex mutex_;
  std::condition_variable work_ready_;
  std::condition_variable work_done_;
  const std::function<void(std::int64_t, std::int64_t)>* body_ = nullptr;
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks_;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool shutting_down_ = false;
  std::exception_ptr worker_error_;

  std::atomic<std::uint64_t> cvtest_calls_{0};
  std::atomic<std::uint64_t> fork_events_{0};
};

/// Evaluates cvtest(candidate, partner) for every candidate in the batch.
/// Element i of the result corresponds to batch.candidates[i] regardless of
/// how the work was split.
std::vector<AssociationValue> par_fold(const TaskBatch& batch,
                                       const DiscreteDataset& data,
                                       ParallelEngine& engine);

/// Wall-clock samples around repeated runs of a closure.
struct TimingSamples {
  int workers = 0;
  std::vector<double> seconds;  // one entry per repeat, in run order
  double median_seconds = 0.0;
};

double median(std::vector<double> values);

TimingSamples measure(const std::function<void()>& run, int repeats, int workers);

/// Worker count resolution: CLI flag wins over FSELECT_WORKERS, which wins
/// over hardware concurrency.
int resolve_worker_count(std::optional<int> cli_value);

}  // namespace fselect
