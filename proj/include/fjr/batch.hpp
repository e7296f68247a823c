#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fjr/sim.hpp"

namespace fjr {

enum class RunStatus { Ok = 0, InvalidConfig = 2, NumericalFailure = 3 };

struct BatchResult {
  RunStatus status = RunStatus::Ok;
  std::optional<SimTrace> trace;
  std::string error;
  std::string error_key;    // InvalidConfig
  double error_time = 0.0;  // NumericalFailure
};

// Runs one scenario and converts ConfigError / NumericalError into a status.
BatchResult run_guarded(const ScenarioConfig& cfg);

// Independent scenarios fanned out over OpenMP threads. Each run is
// sequential, so the traces are bit-identical to run_batch_serial.
std::vector<BatchResult> run_batch(std::span<const ScenarioConfig> configs);
std::vector<BatchResult> run_batch_serial(std::span<const ScenarioConfig> configs);

}  // namespace fjr
