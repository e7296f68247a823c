#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "fjr/sim.hpp"

namespace fjr {

// INI scenario files. Sections and keys (units SI, vectors are a single
// value broadcast to every joint or one comma-separated value per joint):
//
//   [scenario]   preset, name, duration, dt, seed, compute_ideal,
//                q0, dq0, theta0, dtheta0, z0,
//                tau_ext_start, tau_ext_end, tau_ext_value
//   [plant]      link (point_mass | planar2r), B, K_j, mass,
//                m1, m2, l1, l2, lc1, lc2, I1, I2, gravity
//   [friction]   model (lugre | none), sigma0, sigma1, sigma2, f_c, f_s, v_s
//   [controller] K_p, K_d, reference (step | hold | sinusoid), initial,
//                target, t_on, amplitude, frequency, offset
//   [observer]   kind (pid | pd | baseline | none), L, L_p, L_i,
//                theta_n0, dtheta_n0, i_enr0
//   [outputs]    sample_stride, oscillation_window, oscillation_threshold,
//                steady_window, tracking_from, damping_c3
//
// Missing keys keep the value of [scenario] preset (default: the single
// link base with no observer). Unknown sections or keys, malformed values
// and failed validation throw ConfigError carrying "section.key".
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

// Sets one "section.key" on an existing config, with the same parsing rules
// as the file. Does not validate the result.
void apply_setting(ScenarioConfig& cfg, std::string_view dotted_key,
                   std::string_view value);

// Writes cfg back as an INI document that parse_config reads to the same
// config (numbers at 17 significant digits).
void write_config(const ScenarioConfig& cfg, std::ostream& out);
std::string config_to_string(const ScenarioConfig& cfg);

}  // namespace fjr
