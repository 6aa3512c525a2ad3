#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wse::pipeline {

struct Options {
  nlohmann::json config;
  std::string out_dir;  // overrides config "out"
  std::optional<std::uint64_t> seed;
  int jobs = 0;  // 0 = hardware concurrency
};

struct TaskReport {
  std::string name;
  bool ok = false;
  nlohmann::json payload;
  std::string error;
};

struct RunResult {
  std::vector<TaskReport> reports;

  bool ok() const {
    for (const auto& r : reports)
      if (!r.ok) return false;
    return true;
  }
};

// Known task names: simulate, embed, align, chernoff, sweep, cluster,
// clt-check, predict. Each task writes its report (and any data files)
// under the output directory; failures are collected per task.
RunResult run_tasks(const Options& options, const std::vector<std::string>& tasks);

// Runs the task list from the config ("tasks"); empty list is a no-op.
RunResult run_pipeline(const Options& options);

}  // namespace wse::pipeline
