#include "fjr/presets.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace fjr {

ScenarioConfig single_link_base() {
  ScenarioConfig c;
  c.name = "single_link";
  c.plant.B = constant_vector(1, 1.0);
  c.plant.K_j = constant_vector(1, 3000.0);
  c.plant.link = PointMassLink{constant_vector(1, 1.0)};
  c.plant.friction = FrictionModel::lugre(reference_lugre_params());
  c.pd.K_p = constant_vector(1, 50.0);
  c.pd.K_d = constant_vector(1, 5.0);
  c.reference = StepReference{constant_vector(1, 0.0), constant_vector(1, 0.01), 0.0};
  c.observer = ObserverKind::None;
  c.gains = {50.0, 0.0, 0.0};
  c.duration = 10.0;
  c.dt = 1e-5;
  c.sample_stride = 100;
  c.initial = PlantState::zero(1);
  return c;
}

ObserverGains gains_for(ObserverKind kind, const ObserverGains& g) {
  switch (kind) {
    case ObserverKind::PidType: return g;
    case ObserverKind::PdType: return {g.L, g.L_p, 0.0};
    default: return {g.L, 0.0, 0.0};
  }
}

namespace {

constexpr std::array<std::string_view, 6> kFig4Names{"fig4a", "fig4b", "fig4c",
                                                     "fig4d", "fig4e", "fig4f"};
constexpr std::array<std::string_view, 2> kOtherNames{"motivating", "tikhonov"};

}  // namespace

std::span<const std::string_view> fig4_preset_names() { return kFig4Names; }

bool is_preset(std::string_view name) {
  for (auto n : kFig4Names)
    if (n == name) return true;
  for (auto n : kOtherNames)
    if (n == name) return true;
  return false;
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c = single_link_base();
  c.name = std::string(name);
  for (std::size_t i = 0; i < kFig4Names.size(); ++i) {
    if (name != kFig4Names[i]) continue;
    constexpr ObserverKind kinds[] = {ObserverKind::PidType, ObserverKind::PdType,
                                      ObserverKind::BaselineMeasuredFeedback};
    c.observer = kinds[i % 3];
    c.gains = gains_for(c.observer, i < 3 ? kLowGains : kHighGains);
    return c;
  }
  if (name == "motivating") {
    c.observer = ObserverKind::PidType;
    c.gains = kLowGains;
    return c;
  }
  if (name == "tikhonov") {
    c.observer = ObserverKind::PidType;
    c.gains = kLowGains;
    c.reference = SinusoidReference{constant_vector(1, 0.01), 0.5, constant_vector(1, 0.0)};
    c.duration = 6.0;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace fjr
