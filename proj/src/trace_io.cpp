#include "fjr/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "fjr/config.hpp"

namespace fjr {

using nlohmann::json;

namespace {

std::vector<double> to_std(const JointVector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> trace_columns(const SimTrace& trace) {
  std::vector<std::string> cols{"t"};
  for (const auto& sig : SimTrace::signals()) {
    if (trace.dof == 1) {
      cols.emplace_back(sig.name);
      continue;
    }
    for (int j = 1; j <= trace.dof; ++j) cols.push_back(fmt::format("{}_{}", sig.name, j));
  }
  return cols;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const auto cols = trace_columns(trace);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';

  fmt::memory_buffer row;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    row.clear();
    fmt::format_to(std::back_inserter(row), "{:.17g}", trace.t[k]);
    for (const auto& sig : SimTrace::signals()) {
      const JointVector& v = (trace.*sig.member)[k];
      for (int j = 0; j < trace.dof; ++j) fmt::format_to(std::back_inserter(row), ",{:.17g}", v(j));
    }
    row.push_back('\n');
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

SimTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty input");
  const auto header = split(line);
  const std::size_t nsig = SimTrace::signals().size();
  if (header.empty() || header[0] != "t" || (header.size() - 1) % nsig != 0)
    throw std::runtime_error("trace: unexpected header");

  SimTrace tr;
  tr.dof = static_cast<int>((header.size() - 1) / nsig);
  if (tr.dof < 1 || tr.dof > kMaxJoints) throw std::runtime_error("trace: bad joint count");
  const auto expected = trace_columns(tr);
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] != expected[c])
      throw std::runtime_error(fmt::format("trace: column {} is '{}', expected '{}'", c,
                                           header[c], expected[c]));

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      throw std::runtime_error(fmt::format("trace: line {} has {} fields, expected {}",
                                           lineno, fields.size(), header.size()));
    std::vector<double> vals(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), vals[c]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw std::runtime_error(fmt::format("trace: line {} field {} is not a number",
                                             lineno, c + 1));
    }
    tr.t.push_back(vals[0]);
    std::size_t c = 1;
    for (const auto& sig : SimTrace::signals()) {
      JointVector v(tr.dof);
      for (int j = 0; j < tr.dof; ++j) v(j) = vals[c++];
      (tr.*sig.member).push_back(v);
    }
  }
  if (tr.size() >= 2) tr.sample_dt = tr.t[1] - tr.t[0];
  return tr;
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["sample_stride"] = c.sample_stride;
  j["seed"] = c.seed;
  j["compute_ideal"] = c.compute_ideal;

  json plant;
  plant["B"] = to_std(c.plant.B);
  plant["K_j"] = to_std(c.plant.K_j);
  if (const auto* pm = std::get_if<PointMassLink>(&c.plant.link)) {
    plant["link"] = "point_mass";
    plant["mass"] = to_std(pm->mass);
  } else {
    const auto& p = std::get<Planar2RLink>(c.plant.link);
    plant["link"] = "planar2r";
    plant["m1"] = p.m1;
    plant["m2"] = p.m2;
    plant["l1"] = p.l1;
    plant["l2"] = p.l2;
    plant["lc1"] = p.lc1;
    plant["lc2"] = p.lc2;
    plant["I1"] = p.I1;
    plant["I2"] = p.I2;
    plant["gravity"] = p.gravity;
  }
  j["plant"] = plant;

  if (const auto* p = c.plant.friction.lugre_params()) {
    j["friction"] = {{"model", "lugre"}, {"sigma0", p->sigma0}, {"sigma1", p->sigma1},
                     {"sigma2", p->sigma2}, {"f_c", p->f_c},    {"f_s", p->f_s},
                     {"v_s", p->v_s}};
  } else {
    j["friction"] = {{"model", "none"}};
  }

  json ctrl{{"K_p", to_std(c.pd.K_p)}, {"K_d", to_std(c.pd.K_d)}};
  std::visit(
      [&ctrl](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, StepReference>) {
          ctrl["reference"] = "step";
          ctrl["initial"] = to_std(r.initial);
          ctrl["target"] = to_std(r.target);
          ctrl["t_on"] = r.t_on;
        } else if constexpr (std::is_same_v<T, HoldReference>) {
          ctrl["reference"] = "hold";
          ctrl["target"] = to_std(r.target);
        } else {
          ctrl["reference"] = "sinusoid";
          ctrl["amplitude"] = to_std(r.amplitude);
          ctrl["frequency"] = r.frequency;
          ctrl["offset"] = to_std(r.offset);
        }
      },
      c.reference);
  j["controller"] = ctrl;

  j["observer"] = {{"kind", std::string(to_string(c.observer))},
                   {"L", c.gains.L},
                   {"L_p", c.gains.L_p},
                   {"L_i", c.gains.L_i}};
  j["initial"] = {{"q", to_std(c.initial.q)},         {"dq", to_std(c.initial.dq)},
                  {"theta", to_std(c.initial.theta)}, {"dtheta", to_std(c.initial.dtheta)},
                  {"z", to_std(c.initial.z)}};
  json pulses = json::array();
  for (const auto& p : c.tau_ext)
    pulses.push_back({{"t_start", p.t_start}, {"t_end", p.t_end}, {"value", to_std(p.value)}});
  j["tau_ext"] = pulses;
  j["diagnostics"] = {{"oscillation_window", c.diagnostics.oscillation_window},
                      {"oscillation_threshold", c.diagnostics.oscillation_threshold},
                      {"steady_window", c.diagnostics.steady_window},
                      {"tracking_from", c.diagnostics.tracking_from},
                      {"damping_c3", c.diagnostics.damping_c3}};
  return j;
}

json to_json(const Diagnostics& d) {
  json j;
  j["oscillation"] = {{"flag", d.oscillation.flag},
                      {"amplitude", d.oscillation.amplitude},
                      {"window", d.oscillation.window}};
  j["steady_state_error"] = to_std(d.steady_state.value);
  j["steady_state_caveat"] = d.steady_state.caveat;
  j["observer_energy_min"] = d.observer_energy_min;
  if (d.equilibrium) {
    const auto& e = *d.equilibrium;
    json eq{{"friction_force", e.friction_force},
            {"e_nr_predicted", e.predicted.e_nr},
            {"e_nr_measured", e.e_nr_measured},
            {"steady_error_predicted", e.steady_error_predicted}};
    if (e.predicted.i_enr) {
      eq["i_enr_predicted"] = *e.predicted.i_enr;
      eq["i_enr_measured"] = e.i_enr_measured;
    }
    j["equilibrium"] = eq;
  }
  if (d.tracking_error) j["tracking_error"] = *d.tracking_error;
  j["warnings"] = d.warnings;
  return j;
}

json trace_metadata(const SimTrace& trace, const ScenarioConfig& cfg,
                    const Diagnostics& diagnostics) {
  json j;
  j["config"] = to_json(cfg);
  j["config_ini"] = config_to_string(cfg);
  j["diagnostics"] = to_json(diagnostics);
  if (cfg.observer != ObserverKind::None && trace.size() > 0) {
    const auto m = perturbation_bound_monitor(trace, cfg);
    j["diagnostics"]["perturbation_bound"] = {{"b1", m.b1}, {"b2", m.b2}, {"b3", m.b3},
                                              {"b4", m.b4}, {"holds", m.holds},
                                              {"worst_margin", m.worst_margin}};
  }
  if (is_regulation(cfg.reference) && trace.size() > 0) {
    const auto s = stationarity(trace, cfg.diagnostics.steady_window);
    j["diagnostics"]["stationarity"] = {{"tau_j_variation", s.tau_j_variation},
                                        {"max_nominal_speed", s.max_nominal_speed}};
  }
  j["columns"] = trace_columns(trace);
  j["samples"] = trace.size();
  j["sample_dt"] = trace.sample_dt;
  return j;
}

void write_trace_files(const std::filesystem::path& dir, const std::string& stem,
                       const SimTrace& trace, const json& metadata) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (stem + ".csv"));
    if (!csv) throw std::runtime_error("cannot write " + (dir / (stem + ".csv")).string());
    write_trace_csv(trace, csv);
  }
  std::ofstream meta(dir / (stem + ".json"));
  if (!meta) throw std::runtime_error("cannot write " + (dir / (stem + ".json")).string());
  meta << metadata.dump(2) << '\n';
}

}  // namespace fjr
