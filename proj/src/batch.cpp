#include "fjr/batch.hpp"

namespace fjr {

BatchResult run_guarded(const ScenarioConfig& cfg) {
  BatchResult r;
  try {
    r.trace = run_scenario(cfg);
  } catch (const ConfigError& e) {
    r.status = RunStatus::InvalidConfig;
    r.error = e.what();
    r.error_key = e.key();
  } catch (const NumericalError& e) {
    r.status = RunStatus::NumericalFailure;
    r.error = e.what();
    r.error_time = e.time();
  }
  return r;
}

std::vector<BatchResult> run_batch(std::span<const ScenarioConfig> configs) {
  std::vector<BatchResult> out(configs.size());
  const auto n = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run_guarded(configs[i]);
  return out;
}

std::vector<BatchResult> run_batch_serial(std::span<const ScenarioConfig> configs) {
  std::vector<BatchResult> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) out.push_back(run_guarded(cfg));
  return out;
}

}  // namespace fjr
