#pragma once

#include <string>
#include <vector>

#include "fjr/observer.hpp"

namespace fjr {

struct Check {
  std::string suite;
  std::string name;
  double value = 0.0;      // measured quantity
  double tolerance = 0.0;  // bound it is compared against
  bool pass = false;
  std::string detail;
};

// ||A'P + PA - P B R B' P + Q||_F <= 1e-9 for the PID and PD observers over
// a grid of gains that includes the low and high simulation sets.
std::vector<Check> verify_riccati();

struct LpfComparison {
  double max_abs_error = 0.0;  // after the transient
  double peak_output = 0.0;
  double relative_error = 0.0;  // max_abs_error / max |tau_f|
};
// A 1 Hz +-1 N square-wave friction through the difference dynamics versus
// the zero-order-hold discretization of the equivalent filter, compared
// after `transient` seconds.
LpfComparison compare_lpf(double B, const ObserverGains& g, ObserverKind kind,
                          double dt = 1e-4, double duration = 3.0,
                          double transient = 0.5);
std::vector<Check> verify_lpf_equivalence();

// Sign of Re H(jw) on a log grid: PD non-negative everywhere, PID negative
// below sqrt(L_i) and non-negative above.
std::vector<Check> verify_passivity_sweep();

// Steady sliding forces, slow-ramp breakaway, bristle bound and the
// dissipation audit of the friction model.
std::vector<Check> verify_friction_oracles();

std::vector<Check> run_verification();

}  // namespace fjr
