#pragma once

#include <span>
#include <string_view>

#include "fjr/sim.hpp"

namespace fjr {

// Single-link FJR used throughout: B = M = 1, K_j = 3000, K_p = 50,
// K_d = 5, step to 0.01 at t = 0 from rest, LuGre friction on the motor.
ScenarioConfig single_link_base();

inline constexpr ObserverGains kLowGains{50.0, 10.0, 25.0};
inline constexpr ObserverGains kHighGains{100.0, 20.0, 100.0};

// Restricts gains to what the kind uses (PD drops L_i, baseline keeps L).
ObserverGains gains_for(ObserverKind kind, const ObserverGains& g);

// fig4a..fig4f: {PID, PD, baseline} x {low, high}; motivating: the PID low
// gain run; tikhonov: PID low gains tracking a 0.01 amplitude 0.5 Hz sine.
// Throws std::invalid_argument for unknown names.
ScenarioConfig preset(std::string_view name);
bool is_preset(std::string_view name);
std::span<const std::string_view> fig4_preset_names();

}  // namespace fjr
