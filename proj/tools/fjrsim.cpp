// fjrsim: run presets or INI configs, sweep one setting, or run the
// verification suites. Exit codes: 0 ok, 1 verification failure or I/O
// error, 2 invalid config, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fjr/batch.hpp"
#include "fjr/config.hpp"
#include "fjr/presets.hpp"
#include "fjr/trace_io.hpp"
#include "fjr/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fjr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report_failure(const fs::path& out, const json& report, int code) {
  std::cerr << report.dump() << "\n";
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream(out / "failure.json") << report.dump(2) << "\n";
  }
  return code;
}

int config_failure(const fs::path& out, const ConfigError& e) {
  return report_failure(
      out, {{"status", "invalid_config"}, {"key", e.key()}, {"message", e.what()}}, kExitConfig);
}

int numerical_failure(const fs::path& out, const NumericalError& e, const std::string& run) {
  return report_failure(out,
                        {{"status", "numerical_failure"},
                         {"run", run},
                         {"time", e.time()},
                         {"message", e.what()}},
                        kExitNumerical);
}

ScenarioConfig resolve(const std::string& source) {
  if (is_preset(source)) return preset(source);
  if (!fs::exists(source))
    throw ConfigError("file", fmt::format("'{}' is neither a preset nor an existing file", source));
  return load_config(source);
}

struct Overrides {
  std::optional<double> dt, duration;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(ScenarioConfig& cfg, const Overrides& o) {
  if (o.dt) {
    const double logging = cfg.dt * cfg.sample_stride;
    const double ratio = logging / *o.dt;
    cfg.sample_stride =
        std::abs(ratio - std::round(ratio)) < 1e-9 * ratio && ratio >= 1 ? static_cast<int>(std::lround(ratio)) : 1;
    cfg.dt = *o.dt;
  }
  if (o.duration) cfg.duration = *o.duration;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
}

void print_diagnostics(const std::string& name, const Diagnostics& d) {
  fmt::print("{}: oscillation {} (p2p {:.3e} over {:g} s), steady-state error {:.6e}{}",
             name, d.oscillation.flag ? "yes" : "no", d.oscillation.amplitude,
             d.oscillation.window, d.steady_state.value(0),
             d.steady_state.caveat ? " (oscillating)" : "");
  fmt::print(", min observer energy {:.3e}", d.observer_energy_min);
  if (d.tracking_error) fmt::print(", tracking error {:.4e}", *d.tracking_error);
  fmt::print("\n");
  for (const auto& w : d.warnings) fmt::print("  warning: {}\n", w);
}

void write_run(const fs::path& out, const ScenarioConfig& cfg, const SimTrace& trace,
               const Diagnostics& d) {
  write_trace_files(out, cfg.name, trace, trace_metadata(trace, cfg, d));
}

int run_single(ScenarioConfig cfg, const fs::path& out) {
  const BatchResult r = run_guarded(cfg);
  if (r.status == RunStatus::InvalidConfig)
    return config_failure(out, ConfigError(r.error_key, r.error));
  if (r.status == RunStatus::NumericalFailure)
    return numerical_failure(out, NumericalError(r.error_time, r.error), cfg.name);
  const Diagnostics d = compute_diagnostics(*r.trace, cfg);
  write_run(out, cfg, *r.trace, d);
  print_diagnostics(cfg.name, d);
  fmt::print("wrote {}\n", (out / (cfg.name + ".csv")).string());
  return kExitOk;
}

int run_motivating(const ScenarioConfig& cfg, const fs::path& out) {
  const MotivatingReport rep = motivating_example(cfg);
  auto write = [&](const SimTrace& tr, ScenarioConfig c, const std::string& name) {
    c.name = name;
    write_run(out, c, tr, compute_diagnostics(tr, c));
  };
  ScenarioConfig none = cfg, free = cfg;
  none.observer = ObserverKind::None;
  none.compute_ideal = false;
  free.observer = ObserverKind::None;
  free.plant.friction = FrictionModel::none();
  free.compute_ideal = false;
  ScenarioConfig with = cfg;
  with.compute_ideal = false;
  write(rep.no_observer, none, cfg.name + "_no_observer");
  write(rep.with_observer, with, cfg.name + "_observer");
  write(rep.friction_free, free, cfg.name + "_friction_free");

  json j{{"stuck", rep.stuck},
         {"no_observer_max_abs_theta", rep.no_observer_max_abs_theta},
         {"breakaway_count", rep.breakaway_count},
         {"net_force_at_breakaway", rep.net_force_at_breakaway},
         {"final_error", rep.final_error},
         {"friction_free_final_error", rep.friction_free_final_error},
         {"events", rep.events}};
  if (rep.first_breakaway_time) j["first_breakaway_time"] = *rep.first_breakaway_time;
  std::ofstream(out / (cfg.name + "_events.json")) << j.dump(2) << "\n";
  for (const auto& e : rep.events) fmt::print("{}\n", e);
  return kExitOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw ConfigError("values", fmt::format("--values: '{}' is not a number", item));
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("values", "--values: empty list");
  return out;
}

int run_sweep(const ScenarioConfig& base, const std::string& key,
              const std::vector<double>& values, const fs::path& out) {
  // Values that do not make a valid config are rejected one by one; the
  // rest still run.
  std::vector<ScenarioConfig> configs;
  std::vector<std::size_t> index;
  std::vector<std::optional<ConfigError>> rejected(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ScenarioConfig c = base;
    c.name = fmt::format("{}_{}_{:g}", base.name, key.substr(key.find('.') + 1), values[i]);
    try {
      apply_setting(c, key, fmt::format("{:.17g}", values[i]));
      c.validate();
    } catch (const ConfigError& e) {
      rejected[i] = e;
      continue;
    }
    configs.push_back(std::move(c));
    index.push_back(i);
  }
  const auto results = run_batch(configs);

  fs::create_directories(out);
  std::ofstream summary(out / "summary.csv");
  summary << "value,status,tracking_error,oscillation,oscillation_amplitude,steady_state_error\n";
  fmt::print("{:>12} {:>10} {:>16} {:>12} {:>16}\n", key, "status", "tracking_error",
             "oscillation", "ss_error");
  std::optional<ConfigError> first_rejection;
  std::optional<NumericalError> first_failure;
  std::string failed_run;
  std::size_t next = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (rejected[i]) {
      summary << fmt::format("{:.17g},rejected,,,,\n", values[i]);
      fmt::print("{:>12g} {:>10} {}\n", values[i], "rejected", rejected[i]->what());
      if (!first_rejection) first_rejection = rejected[i];
      continue;
    }
    const std::size_t r_i = next++;
    const auto& r = results[r_i];
    if (r.status != RunStatus::Ok) {
      summary << fmt::format("{:.17g},failed,,,,\n", values[i]);
      fmt::print("{:>12g} {:>10} {}\n", values[i], "failed", r.error);
      if (r.status == RunStatus::InvalidConfig && !first_rejection)
        first_rejection.emplace(r.error_key, r.error);
      if (r.status == RunStatus::NumericalFailure && !first_failure) {
        first_failure.emplace(r.error_time, r.error);
        failed_run = configs[r_i].name;
      }
      continue;
    }
    const Diagnostics d = compute_diagnostics(*r.trace, configs[r_i]);
    write_run(out, configs[r_i], *r.trace, d);
    const double track = d.tracking_error.value_or(std::nan(""));
    summary << fmt::format("{:.17g},ok,{:.17g},{},{:.17g},{:.17g}\n", values[i], track,
                           d.oscillation.flag ? 1 : 0, d.oscillation.amplitude,
                           d.steady_state.value(0));
    fmt::print("{:>12g} {:>10} {:>16.6e} {:>12} {:>16.6e}\n", values[i], "ok", track,
               d.oscillation.flag ? "yes" : "no", d.steady_state.value(0));
  }
  fmt::print("wrote {}\n", (out / "summary.csv").string());
  if (first_rejection) return config_failure(out, *first_rejection);
  if (first_failure) return numerical_failure(out, *first_failure, failed_run);
  return kExitOk;
}

int run_verify(const fs::path& out) {
  const auto checks = run_verification();
  json j = json::array();
  int failed = 0;
  fmt::print("{:<10} {:<52} {:>12} {:>10}  {}\n", "suite", "check", "value", "bound", "result");
  for (const auto& c : checks) {
    fmt::print("{:<10} {:<52} {:>12.3e} {:>10.1e}  {}{}\n", c.suite, c.name, c.value,
               c.tolerance, c.pass ? "PASS" : "FAIL",
               c.detail.empty() ? "" : "  (" + c.detail + ")");
    failed += c.pass ? 0 : 1;
    j.push_back({{"suite", c.suite},
                 {"name", c.name},
                 {"value", c.value},
                 {"tolerance", c.tolerance},
                 {"pass", c.pass},
                 {"detail", c.detail}});
  }
  fs::create_directories(out);
  std::ofstream(out / "verify.json") << j.dump(2) << "\n";
  fmt::print("{} of {} checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible-joint robot friction observer simulator"};
  app.require_subcommand(1);

  std::string source;
  std::string out_dir;
  Overrides ov;
  double dt = 0, duration = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a preset or INI config");
  run->add_option("source", source,
                  "fig4a..fig4f, motivating, tikhonov, verify, or a config path")
      ->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  auto* dt_opt = run->add_option("--dt", dt, "Integration step [s]");
  auto* dur_opt = run->add_option("--duration", duration, "Simulated time [s]");
  auto* seed_opt = run->add_option("--seed", seed, "Seed recorded with the run");

  std::string param, values;
  auto* sweep = app.add_subcommand("sweep", "Sweep one numeric setting");
  sweep->add_option("config", source, "Preset name or config path")->required();
  sweep->add_option("--param", param, "Setting as section.key, e.g. observer.L")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Riccati, filter, passivity and friction checks");
  verify->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  const fs::path out(out_dir);

  try {
    if (*verify) return run_verify(out);

    if (*sweep) {
      ScenarioConfig base = resolve(source);
      return run_sweep(base, param, parse_values(values), out);
    }

    if (source == "verify") return run_verify(out);
    if (*dt_opt) ov.dt = dt;
    if (*dur_opt) ov.duration = duration;
    if (*seed_opt) ov.seed = seed;
    ScenarioConfig cfg = resolve(source);
    apply_overrides(cfg, ov);
    if (source == "motivating") return run_motivating(cfg, out);
    if (source == "tikhonov") return run_sweep(cfg, "observer.L", {25, 50, 100, 200}, out);
    return run_single(cfg, out);
  } catch (const ConfigError& e) {
    return config_failure(out, e);
  } catch (const NumericalError& e) {
    return numerical_failure(out, e, source);
  } catch (const std::exception& e) {
    return report_failure(out, {{"status", "error"}, {"message", e.what()}}, kExitFailed);
  }
}
