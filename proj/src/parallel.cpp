#include "fselect/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>

namespace fselect {

ParallelEngine::ParallelEngine(EngineConfig config) : config_(config) {
  if (config_.workers < 1) throw ConfigError("engine: workers must be >= 1");
  if (config_.par_threshold < 0)
    throw ConfigError("engine: par_threshold must be >= 0");
  blocks_.resize(static_cast<std::size_t>(config_.workers));
  for (int slot = 1; slot < config_.workers; ++slot) {
    threads_.emplace_back([this, slot] { worker_loop(slot); });
  }
}

ParallelEngine::~ParallelEngine() {
  {
    std::lock_guard lock(mutex_);
    shutting_down_ = true;
  }
  work_ready_.notify_all();
  for (auto& t : threads_) t.join();
}

void ParallelEngine::worker_loop(int slot) {
  std::uint64_t seen_generation = 0;
  while (true) {
    std::pair<std::int64_t, std::int64_t> block;
    const std::function<void(std::int64_t, std::int64_t)>* body = nullptr;
    {
      std::unique_lock lock(mutex_);
      work_ready_.wait(lock, [&] {
        return shutting_down_ || generation_ != seen_generation;
      });
      if (shutting_down_) return;
      seen_generation = generation_;
      block = blocks_[static_cast<std::size_t>(slot)];
      body = body_;
    }
    if (block.first < block.second) {
      try {
        (*body)(block.first, block.second);
      } catch (...) {
        std::lock_guard lock(mutex_);
        if (!worker_error_) worker_error_ = std::current_exception();
      }
    }
    {
      std::lock_guard lock(mutex_);
      --pending_;
    }
    work_done_.notify_one();
  }
}

void ParallelEngine::for_blocks(
    std::int64_t count,
    const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (count <= 0) return;
  if (config_.workers == 1 || count <= config_.par_threshold) {
    body(0, count);
    return;
  }

  fork_events_.fetch_add(1);
  const auto workers = static_cast<std::int64_t>(config_.workers);
  const std::int64_t base = count / workers;
  const std::int64_t extra = count % workers;
  {
    std::lock_guard lock(mutex_);
    std::int64_t begin = 0;
    for (std::int64_t slot = 0; slot < workers; ++slot) {
      const std::int64_t size = base + (slot < extra ? 1 : 0);
      blocks_[static_cast<std::size_t>(slot)] = {begin, begin + size};
      begin += size;
    }
    body_ = &body;
    pending_ = config_.workers - 1;
    ++generation_;
  }
  work_ready_.notify_all();

  // The coordinator takes the first block.
  const auto [b0, e0] = blocks_[0];
  if (b0 < e0) {
    try {
      body(b0, e0);
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!worker_error_) worker_error_ = std::current_exception();
    }
  }

  std::unique_lock lock(mutex_);
  work_done_.wait(lock, [&] { return pending_ == 0; });
  body_ = nullptr;
  if (worker_error_) {
    auto error = worker_error_;
    worker_error_ = nullptr;
    std::rethrow_exception(error);
  }
}

void ParallelEngine::reset_counters() {
  cvtest_calls_.store(0);
  fork_events_.store(0);
}

std::vector<AssociationValue> par_fold(const TaskBatch& batch,
                                       const DiscreteDataset& data,
                                       ParallelEngine& engine) {
  const auto count = static_cast<std::int64_t>(batch.candidates.size());
  for (std::int64_t i = 0; i < count; ++i) {
    const Index j = batch.candidates[static_cast<std::size_t>(i)];
    if (j < 0 || j >= data.feature_count())
      throw ConfigError("par_fold: candidate index out of range");
    if (i > 0 && batch.candidates[static_cast<std::size_t>(i - 1)] >= j)
      throw ConfigError("par_fold: candidates must be strictly increasing");
  }
  if (batch.partner_feature &&
      (*batch.partner_feature < 0 || *batch.partner_feature >= data.feature_count()))
    throw ConfigError("par_fold: partner feature out of range");

  std::vector<AssociationValue> out(static_cast<std::size_t>(count));
  engine.for_blocks(count, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const Index j = batch.candidates[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] =
          batch.partner_feature ? cvtest(data, j, *batch.partner_feature)
                                : cvtest_label(data, j);
    }
  });
  engine.add_cvtest_calls(static_cast<std::uint64_t>(count));
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

TimingSamples measure(const std::function<void()>& run, int repeats, int workers) {
  if (repeats < 1) throw ConfigError("measure: repeats must be >= 1");
  TimingSamples samples;
  samples.workers = workers;
  samples.seconds.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    run();
    const auto stop = std::chrono::steady_clock::now();
    samples.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  samples.median_seconds = median(samples.seconds);
  return samples;
}

int resolve_worker_count(std::optional<int> cli_value) {
  if (cli_value) {
    if (*cli_value < 1) throw ConfigError("threads must be >= 1");
    return *cli_value;
  }
  if (const char* env = std::getenv("FSELECT_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1)
      throw ConfigError("FSELECT_WORKERS must be a positive integer");
    return static_cast<int>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace fselect
