#include "fjr/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "fjr/presets.hpp"

namespace fjr {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, fmt::format("{}: '{}' is not a number", key, s));
  return v;
}

std::uint64_t parse_u64(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, fmt::format("{}: '{}' is not a non-negative integer", key, s));
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, fmt::format("{}: '{}' is not a boolean", key, s));
}

JointVector parse_vector(const std::string& key, std::string_view text, int dof) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    vals.push_back(parse_double(key, text.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (vals.size() == 1) return constant_vector(dof, vals[0]);
  if (static_cast<int>(vals.size()) != dof)
    throw ConfigError(key, fmt::format("{}: expected 1 or {} values, got {}", key,
                                       dof, vals.size()));
  JointVector v(dof);
  for (int i = 0; i < dof; ++i) v(i) = vals[i];
  return v;
}

// Broadcast a vector to n entries; an empty vector becomes zeros.
JointVector conform(const JointVector& v, int n) {
  if (v.size() == n) return v;
  return constant_vector(n, v.size() > 0 ? v(0) : 0.0);
}

void conform_all(ScenarioConfig& c, int n) {
  c.plant.B = conform(c.plant.B, n);
  c.plant.K_j = conform(c.plant.K_j, n);
  if (auto* pm = std::get_if<PointMassLink>(&c.plant.link)) pm->mass = conform(pm->mass, n);
  c.pd.K_p = conform(c.pd.K_p, n);
  c.pd.K_d = conform(c.pd.K_d, n);
  std::visit(
      [n](auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, StepReference>) {
          r.initial = conform(r.initial, n);
          r.target = conform(r.target, n);
        } else if constexpr (std::is_same_v<T, HoldReference>) {
          r.target = conform(r.target, n);
        } else {
          r.amplitude = conform(r.amplitude, n);
          r.offset = conform(r.offset, n);
        }
      },
      c.reference);
  for (JointVector* v : {&c.initial.q, &c.initial.dq, &c.initial.theta,
                         &c.initial.dtheta, &c.initial.z})
    *v = conform(*v, n);
  for (auto* o : {&c.theta_n0, &c.dtheta_n0, &c.i_enr0})
    if (*o) **o = conform(**o, n);
  for (auto& p : c.tau_ext) p.value = conform(p.value, n);
}

constexpr std::pair<std::string_view, double LuGreParams::*> kLuGreFields[] = {
    {"friction.sigma0", &LuGreParams::sigma0}, {"friction.sigma1", &LuGreParams::sigma1},
    {"friction.sigma2", &LuGreParams::sigma2}, {"friction.f_c", &LuGreParams::f_c},
    {"friction.f_s", &LuGreParams::f_s},       {"friction.v_s", &LuGreParams::v_s}};

double LuGreParams::*lugre_field(std::string_view key) {
  for (const auto& [k, m] : kLuGreFields)
    if (k == key) return m;
  return nullptr;
}

// "LuGre: f_s must be >= f_c" -> "friction.f_s"
std::string lugre_key(std::string_view msg) {
  constexpr std::string_view prefix = "LuGre: ";
  if (msg.starts_with(prefix)) msg.remove_prefix(prefix.size());
  return "friction." + std::string(msg.substr(0, msg.find(' ')));
}

void set_lugre(ScenarioConfig& c, const LuGreParams& p) {
  try {
    c.plant.friction = FrictionModel::lugre(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lugre_key(e.what()), e.what());
  }
}

LuGreParams current_lugre(const ScenarioConfig& c, const std::string& key) {
  const LuGreParams* p = c.plant.friction.lugre_params();
  if (!p) throw ConfigError(key, key + ": friction model is 'none'");
  return *p;
}

Planar2RLink& planar_of(ScenarioConfig& c, const std::string& key) {
  auto* p = std::get_if<Planar2RLink>(&c.plant.link);
  if (!p) throw ConfigError(key, key + ": only valid for link = planar2r");
  return *p;
}

TauExtPulse& pulse_of(ScenarioConfig& c) {
  if (c.tau_ext.empty()) c.tau_ext.push_back({0.0, 0.0, constant_vector(c.plant.dof(), 0.0)});
  return c.tau_ext.front();
}

template <class T>
T& reference_as(ScenarioConfig& c, const std::string& key) {
  auto* r = std::get_if<T>(&c.reference);
  if (!r) throw ConfigError(key, key + ": not a setting of the current reference type");
  return *r;
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key,
                                  std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto num = [](double ScenarioConfig::*m) {
      return [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        c.*m = parse_double(k, v);
      };
    };
    auto diag = [](double DiagnosticSettings::*m) {
      return [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        c.diagnostics.*m = parse_double(k, v);
      };
    };
    auto planar = [](double Planar2RLink::*m) {
      return [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        planar_of(c, k).*m = parse_double(k, v);
      };
    };
    auto init = [](JointVector PlantState::*m) {
      return [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        c.initial.*m = parse_vector(k, v, c.plant.dof());
      };
    };
    auto obs0 = [](std::optional<JointVector> ScenarioConfig::*m) {
      return [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        c.*m = parse_vector(k, v, c.plant.dof());
      };
    };

    t["scenario.name"] = [](ScenarioConfig& c, const std::string&, std::string_view v) {
      c.name = trim(v);
    };
    t["scenario.duration"] = num(&ScenarioConfig::duration);
    t["scenario.dt"] = num(&ScenarioConfig::dt);
    t["scenario.seed"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.seed = parse_u64(k, v);
    };
    t["scenario.compute_ideal"] = [](ScenarioConfig& c, const std::string& k,
                                     std::string_view v) { c.compute_ideal = parse_bool(k, v); };
    t["scenario.q0"] = init(&PlantState::q);
    t["scenario.dq0"] = init(&PlantState::dq);
    t["scenario.theta0"] = init(&PlantState::theta);
    t["scenario.dtheta0"] = init(&PlantState::dtheta);
    t["scenario.z0"] = init(&PlantState::z);
    t["scenario.tau_ext_start"] = [](ScenarioConfig& c, const std::string& k,
                                     std::string_view v) { pulse_of(c).t_start = parse_double(k, v); };
    t["scenario.tau_ext_end"] = [](ScenarioConfig& c, const std::string& k,
                                   std::string_view v) { pulse_of(c).t_end = parse_double(k, v); };
    t["scenario.tau_ext_value"] = [](ScenarioConfig& c, const std::string& k,
                                     std::string_view v) {
      pulse_of(c).value = parse_vector(k, v, c.plant.dof());
    };

    t["plant.B"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.plant.B = parse_vector(k, v, c.plant.dof());
    };
    t["plant.K_j"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.plant.K_j = parse_vector(k, v, c.plant.dof());
    };
    t["plant.mass"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      auto* pm = std::get_if<PointMassLink>(&c.plant.link);
      if (!pm) throw ConfigError(k, k + ": only valid for link = point_mass");
      pm->mass = parse_vector(k, v, c.plant.dof());
    };
    t["plant.m1"] = planar(&Planar2RLink::m1);
    t["plant.m2"] = planar(&Planar2RLink::m2);
    t["plant.l1"] = planar(&Planar2RLink::l1);
    t["plant.l2"] = planar(&Planar2RLink::l2);
    t["plant.lc1"] = planar(&Planar2RLink::lc1);
    t["plant.lc2"] = planar(&Planar2RLink::lc2);
    t["plant.I1"] = planar(&Planar2RLink::I1);
    t["plant.I2"] = planar(&Planar2RLink::I2);
    t["plant.gravity"] = planar(&Planar2RLink::gravity);

    t["friction.model"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      const std::string s = trim(v);
      if (s == "none") {
        c.plant.friction = FrictionModel::none();
      } else if (s == "lugre") {
        if (!c.plant.friction.lugre_params())
          c.plant.friction = FrictionModel::lugre(reference_lugre_params());
      } else {
        throw ConfigError(k, fmt::format("{}: unknown friction model '{}'", k, s));
      }
    };
    for (const auto& [key, m] : kLuGreFields) {
      t[std::string(key)] = [m](ScenarioConfig& c, const std::string& k, std::string_view v) {
        LuGreParams p = current_lugre(c, k);
        p.*m = parse_double(k, v);
        set_lugre(c, p);
      };
    }

    t["controller.K_p"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.pd.K_p = parse_vector(k, v, c.plant.dof());
    };
    t["controller.K_d"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.pd.K_d = parse_vector(k, v, c.plant.dof());
    };
    t["controller.reference"] = [](ScenarioConfig& c, const std::string& k,
                                   std::string_view v) {
      const std::string s = trim(v);
      const int n = c.plant.dof();
      const JointVector zero = constant_vector(n, 0.0);
      if (s == "step") {
        if (!std::holds_alternative<StepReference>(c.reference))
          c.reference = StepReference{zero, zero, 0.0};
      } else if (s == "hold") {
        if (!std::holds_alternative<HoldReference>(c.reference))
          c.reference = HoldReference{zero};
      } else if (s == "sinusoid") {
        if (!std::holds_alternative<SinusoidReference>(c.reference))
          c.reference = SinusoidReference{zero, 0.5, zero};
      } else {
        throw ConfigError(k, fmt::format("{}: unknown reference '{}'", k, s));
      }
    };
    t["controller.initial"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      reference_as<StepReference>(c, k).initial = parse_vector(k, v, c.plant.dof());
    };
    t["controller.t_on"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      reference_as<StepReference>(c, k).t_on = parse_double(k, v);
    };
    t["controller.target"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      const JointVector x = parse_vector(k, v, c.plant.dof());
      if (auto* s = std::get_if<StepReference>(&c.reference)) s->target = x;
      else reference_as<HoldReference>(c, k).target = x;
    };
    t["controller.amplitude"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      reference_as<SinusoidReference>(c, k).amplitude = parse_vector(k, v, c.plant.dof());
    };
    t["controller.frequency"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      reference_as<SinusoidReference>(c, k).frequency = parse_double(k, v);
    };
    t["controller.offset"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      reference_as<SinusoidReference>(c, k).offset = parse_vector(k, v, c.plant.dof());
    };

    t["observer.kind"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      try {
        const ObserverKind kind = parse_observer_kind(trim(v));
        if (kind != c.observer) c.gains = gains_for(kind, kLowGains);
        c.observer = kind;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k, fmt::format("{}: {}", k, e.what()));
      }
    };
    t["observer.L"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.gains.L = parse_double(k, v);
    };
    t["observer.L_p"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.gains.L_p = parse_double(k, v);
    };
    t["observer.L_i"] = [](ScenarioConfig& c, const std::string& k, std::string_view v) {
      c.gains.L_i = parse_double(k, v);
    };
    t["observer.theta_n0"] = obs0(&ScenarioConfig::theta_n0);
    t["observer.dtheta_n0"] = obs0(&ScenarioConfig::dtheta_n0);
    t["observer.i_enr0"] = obs0(&ScenarioConfig::i_enr0);

    t["outputs.sample_stride"] = [](ScenarioConfig& c, const std::string& k,
                                    std::string_view v) {
      const auto n = parse_u64(k, v);
      if (n == 0 || n > 1000000000ULL) throw ConfigError(k, k + ": must be in [1, 1e9]");
      c.sample_stride = static_cast<int>(n);
    };
    t["outputs.oscillation_window"] = diag(&DiagnosticSettings::oscillation_window);
    t["outputs.oscillation_threshold"] = diag(&DiagnosticSettings::oscillation_threshold);
    t["outputs.steady_window"] = diag(&DiagnosticSettings::steady_window);
    t["outputs.tracking_from"] = diag(&DiagnosticSettings::tracking_from);
    t["outputs.damping_c3"] = diag(&DiagnosticSettings::damping_c3);
    return t;
  }();
  return table;
}

// Keys that must be applied before the rest of their section because they
// change which other keys exist.
constexpr std::string_view kFirstKeys[] = {"plant.link", "friction.model",
                                           "controller.reference", "observer.kind"};

void set_link(ScenarioConfig& c, const std::string& key, std::string_view value,
              std::optional<std::string_view> mass) {
  const std::string s = trim(value);
  if (s == "point_mass") {
    int n = c.plant.dof();
    JointVector m = constant_vector(n, 1.0);
    if (mass) {
      // The mass list sets the joint count for a point-mass chain.
      std::string_view t = *mass;
      n = 1 + static_cast<int>(std::count(t.begin(), t.end(), ','));
      if (n > kMaxJoints)
        throw ConfigError("plant.mass", fmt::format("plant.mass: at most {} joints", kMaxJoints));
      m = parse_vector("plant.mass", t, n);
    } else if (auto* pm = std::get_if<PointMassLink>(&c.plant.link)) {
      m = pm->mass;
    }
    c.plant.link = PointMassLink{m};
    conform_all(c, n);
  } else if (s == "planar2r") {
    if (!std::holds_alternative<Planar2RLink>(c.plant.link)) c.plant.link = Planar2RLink{};
    conform_all(c, 2);
  } else {
    throw ConfigError(key, fmt::format("{}: unknown link '{}'", key, s));
  }
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, std::string_view dotted_key,
                   std::string_view value) {
  const std::string key(dotted_key);
  if (key == "plant.link") {
    set_link(cfg, key, value, std::nullopt);
    return;
  }
  if (key == "scenario.preset")
    throw ConfigError(key, "scenario.preset can only be set in a config file");
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, fmt::format("unknown key '{}'", key));
  it->second(cfg, key, value);
}

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", fmt::format("line {}: {}", e.line(), e.message()));
  }

  static constexpr std::string_view kSections[] = {"scenario", "plant", "friction",
                                                   "controller", "observer", "outputs"};
  std::map<std::string, std::string> entries;
  for (const auto& [section, body] : tree) {
    if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections))
      throw ConfigError(section, fmt::format("unknown section [{}]", section));
    if (body.empty() && !body.data().empty())
      throw ConfigError(section, fmt::format("key '{}' outside of a section", section));
    for (const auto& [k, v] : body) {
      const std::string key = section + "." + k;
      if (!v.empty()) throw ConfigError(key, fmt::format("malformed key '{}'", key));
      if (key != "scenario.preset" && key != "plant.link" && !setters().contains(key))
        throw ConfigError(key, fmt::format("unknown key '{}'", key));
      entries[key] = v.data();
    }
  }

  ScenarioConfig cfg = single_link_base();
  if (auto it = entries.find("scenario.preset"); it != entries.end()) {
    const std::string name = trim(it->second);
    if (!is_preset(name))
      throw ConfigError("scenario.preset", fmt::format("scenario.preset: unknown preset '{}'", name));
    cfg = preset(name);
    entries.erase(it);
  }

  std::optional<std::string_view> mass;
  if (auto it = entries.find("plant.mass"); it != entries.end()) mass = it->second;
  if (auto it = entries.find("plant.link"); it != entries.end()) {
    set_link(cfg, "plant.link", it->second, mass);
    entries.erase(it);
    if (mass) entries.erase("plant.mass");
  }
  for (std::string_view first : kFirstKeys) {
    auto it = entries.find(std::string(first));
    if (it == entries.end()) continue;
    apply_setting(cfg, it->first, it->second);
    entries.erase(it);
  }
  // Friction parameters are checked together so their order does not matter.
  if (cfg.plant.friction.lugre_params()) {
    LuGreParams p = *cfg.plant.friction.lugre_params();
    for (auto it = entries.begin(); it != entries.end();) {
      if (auto m = lugre_field(it->first)) {
        p.*m = parse_double(it->first, it->second);
        it = entries.erase(it);
      } else {
        ++it;
      }
    }
    set_lugre(cfg, p);
  }
  for (const auto& [k, v] : entries) apply_setting(cfg, k, v);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in);
}

namespace {

std::string fmt_vec(const JointVector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt::format("{:.17g}", v(i));
  }
  return s;
}

}  // namespace

void write_config(const ScenarioConfig& c, std::ostream& out) {
  auto kv = [&out](std::string_view k, const std::string& v) {
    out << k << " = " << v << "\n";
  };
  auto num = [](double x) { return fmt::format("{:.17g}", x); };

  out << "[scenario]\n";
  kv("name", c.name);
  kv("duration", num(c.duration));
  kv("dt", num(c.dt));
  kv("seed", std::to_string(c.seed));
  kv("compute_ideal", c.compute_ideal ? "true" : "false");
  kv("q0", fmt_vec(c.initial.q));
  kv("dq0", fmt_vec(c.initial.dq));
  kv("theta0", fmt_vec(c.initial.theta));
  kv("dtheta0", fmt_vec(c.initial.dtheta));
  kv("z0", fmt_vec(c.initial.z));
  if (!c.tau_ext.empty()) {
    const auto& p = c.tau_ext.front();
    kv("tau_ext_start", num(p.t_start));
    kv("tau_ext_end", num(p.t_end));
    kv("tau_ext_value", fmt_vec(p.value));
  }

  out << "\n[plant]\n";
  if (const auto* pm = std::get_if<PointMassLink>(&c.plant.link)) {
    kv("link", "point_mass");
    kv("mass", fmt_vec(pm->mass));
  } else {
    const auto& p = std::get<Planar2RLink>(c.plant.link);
    kv("link", "planar2r");
    kv("m1", num(p.m1));
    kv("m2", num(p.m2));
    kv("l1", num(p.l1));
    kv("l2", num(p.l2));
    kv("lc1", num(p.lc1));
    kv("lc2", num(p.lc2));
    kv("I1", num(p.I1));
    kv("I2", num(p.I2));
    kv("gravity", num(p.gravity));
  }
  kv("B", fmt_vec(c.plant.B));
  kv("K_j", fmt_vec(c.plant.K_j));

  out << "\n[friction]\n";
  if (const auto* p = c.plant.friction.lugre_params()) {
    kv("model", "lugre");
    kv("sigma0", num(p->sigma0));
    kv("sigma1", num(p->sigma1));
    kv("sigma2", num(p->sigma2));
    kv("f_c", num(p->f_c));
    kv("f_s", num(p->f_s));
    kv("v_s", num(p->v_s));
  } else {
    kv("model", "none");
  }

  out << "\n[controller]\n";
  kv("K_p", fmt_vec(c.pd.K_p));
  kv("K_d", fmt_vec(c.pd.K_d));
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, StepReference>) {
          kv("reference", "step");
          kv("initial", fmt_vec(r.initial));
          kv("target", fmt_vec(r.target));
          kv("t_on", num(r.t_on));
        } else if constexpr (std::is_same_v<T, HoldReference>) {
          kv("reference", "hold");
          kv("target", fmt_vec(r.target));
        } else {
          kv("reference", "sinusoid");
          kv("amplitude", fmt_vec(r.amplitude));
          kv("frequency", num(r.frequency));
          kv("offset", fmt_vec(r.offset));
        }
      },
      c.reference);

  out << "\n[observer]\n";
  kv("kind", std::string(to_string(c.observer)));
  kv("L", num(c.gains.L));
  kv("L_p", num(c.gains.L_p));
  kv("L_i", num(c.gains.L_i));
  if (c.theta_n0) kv("theta_n0", fmt_vec(*c.theta_n0));
  if (c.dtheta_n0) kv("dtheta_n0", fmt_vec(*c.dtheta_n0));
  if (c.i_enr0) kv("i_enr0", fmt_vec(*c.i_enr0));

  out << "\n[outputs]\n";
  kv("sample_stride", std::to_string(c.sample_stride));
  kv("oscillation_window", num(c.diagnostics.oscillation_window));
  kv("oscillation_threshold", num(c.diagnostics.oscillation_threshold));
  kv("steady_window", num(c.diagnostics.steady_window));
  kv("tracking_from", num(c.diagnostics.tracking_from));
  kv("damping_c3", num(c.diagnostics.damping_c3));
}

std::string config_to_string(const ScenarioConfig& cfg) {
  std::ostringstream s;
  write_config(cfg, s);
  return s.str();
}

}  // namespace fjr
