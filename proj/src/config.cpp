#include "ldr/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"

namespace ldr {

namespace {

[[noreturn]] void bad(const std::string& path, int line, const std::string& msg) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  *out = strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

ConfigValue parse_value(const std::string& raw, const std::string& path, int line) {
  ConfigValue v;
  v.line = line;
  std::string s = trim(raw);
  if (s.empty()) bad(path, line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') bad(path, line, "unterminated string");
    v.v = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.v = (s == "true");
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') bad(path, line, "unterminated array");
    std::string inner = trim(s.substr(1, s.size() - 2));
    if (inner.empty()) {
      v.v = std::vector<double>{};
      return v;
    }
    if (inner.front() == '"') {
      std::vector<std::string> items;
      for (auto& part : split(inner, ',')) {
        std::string p = trim(part);
        if (p.size() < 2 || p.front() != '"' || p.back() != '"')
          bad(path, line, "string array element must be quoted");
        items.push_back(p.substr(1, p.size() - 2));
      }
      v.v = items;
      return v;
    }
    std::vector<double> items;
    for (auto& part : split(inner, ',')) {
      double d;
      if (!parse_number(trim(part), &d)) bad(path, line, "bad number in array: " + trim(part));
      items.push_back(d);
    }
    v.v = items;
    return v;
  }
  double d;
  if (!parse_number(s, &d)) bad(path, line, "unrecognized value: " + s);
  v.v = d;
  return v;
}

}  // namespace

double ConfigValue::as_number(const std::string& key) const {
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("key '" + key + "' (line " + std::to_string(line) + ") must be a number");
}

int ConfigValue::as_int(const std::string& key) const {
  double d = as_number(key);
  if (d != std::floor(d)) throw ConfigError("key '" + key + "' must be an integer");
  return static_cast<int>(d);
}

bool ConfigValue::as_bool(const std::string& key) const {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("key '" + key + "' (line " + std::to_string(line) + ") must be a boolean");
}

const std::string& ConfigValue::as_string(const std::string& key) const {
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("key '" + key + "' (line " + std::to_string(line) + ") must be a string");
}

std::vector<double> ConfigValue::as_number_array(const std::string& key) const {
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  if (const double* d = std::get_if<double>(&v)) return {*d};  // scalar broadcast
  throw ConfigError("key '" + key + "' (line " + std::to_string(line) +
                    ") must be a number array");
}

const ConfigValue& ConfigSection::at(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw ConfigError("section [" + name + "] (line " + std::to_string(line) +
                      ") is missing key '" + key + "'");
  return it->second;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const ConfigSection*> ConfigFile::find_all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

ConfigFile parse_config_text(const std::string& text, const std::string& path) {
  ConfigFile file;
  file.path = path;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    size_t hash = s.find('#');
    if (hash != std::string::npos && (hash == 0 || s.find('"', hash) == std::string::npos))
      s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      bool dbl = s.size() > 1 && s[1] == '[';
      std::string close = dbl ? "]]" : "]";
      if (s.substr(s.size() - close.size()) != close) bad(path, lineno, "malformed section");
      std::string name = trim(s.substr(dbl ? 2 : 1, s.size() - 2 * (dbl ? 2 : 1)));
      if (name.empty()) bad(path, lineno, "empty section name");
      file.sections.push_back({name, lineno, {}});
      current = &file.sections.back();
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) bad(path, lineno, "expected key = value");
    if (!current) bad(path, lineno, "key outside any section");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) bad(path, lineno, "empty key");
    if (current->values.count(key)) bad(path, lineno, "duplicate key '" + key + "'");
    current->values.emplace(key, parse_value(s.substr(eq + 1), path, lineno));
  }
  return file;
}

ConfigFile load_config_file(const std::string& path) {
  return parse_config_text(read_file(path), path);
}

HydroSystem load_system_file(const std::string& path) {
  ConfigFile f = load_config_file(path);
  const ConfigSection* sys = f.find("system");
  if (!sys) throw ConfigError(path + ": missing [system] section");

  HydroSystem out;
  out.horizon = sys->at("horizon").as_int("horizon");
  out.deficit_cost = sys->at("deficit_cost").as_number("deficit_cost");
  out.discount_rate = sys->at("discount_rate").as_number("discount_rate");
  auto buses = f.find_all("bus");
  if (buses.empty()) {
    out.demand = sys->at("demand").as_number_array("demand");
  } else {
    for (const auto* b : buses) {
      Bus bus;
      bus.name = b->has("name") ? b->at("name").as_string("name")
                                : "bus" + std::to_string(out.buses.size() + 1);
      bus.demand = b->at("demand").as_number_array("demand");
      out.buses.push_back(bus);
    }
    // total demand per stage, for reporting
    out.demand.assign(out.horizon, 0.0);
    for (int t = 1; t <= out.horizon; ++t) {
      double sum = 0.0;
      for (size_t b = 0; b < out.buses.size(); ++b) sum += out.bus_demand_at(static_cast<int>(b), t);
      out.demand[t - 1] = sum;
    }
  }

  auto bus_index = [&](const ConfigSection* s, const std::string& owner) -> int {
    if (!s->has("bus")) return 0;
    int b = s->at("bus").as_int("bus") - 1;
    if (b < 0 || b >= out.n_buses())
      throw ConfigError(path + ": " + owner + " references unknown bus " + std::to_string(b + 1));
    return b;
  };

  auto hydros = f.find_all("hydro");
  std::vector<std::string> downstream_ref(hydros.size());
  for (const auto* hsec : hydros) {
    Hydro h;
    h.name = hsec->has("name") ? hsec->at("name").as_string("name")
                               : "hydro" + std::to_string(out.hydros.size() + 1);
    h.v_max = hsec->at("v_max").as_number("v_max");
    h.v_min = hsec->at("v_min").as_number("v_min");
    h.u_max = hsec->at("u_max").as_number("u_max");
    h.production_factor = hsec->at("production_factor").as_number("production_factor");
    h.v0 = hsec->at("v0").as_number("v0");
    h.v_f = hsec->at("v_f").as_number("v_f");
    h.bus = bus_index(hsec, "hydro '" + h.name + "'");
    if (hsec->has("downstream")) {
      const ConfigValue& d = hsec->at("downstream");
      if (const double* num = std::get_if<double>(&d.v)) {
        h.downstream = static_cast<int>(*num) - 1;  // 1-based in the file
      } else {
        std::string ref = d.as_string("downstream");
        if (ref != "none" && ref != "None") downstream_ref[out.hydros.size()] = ref;
      }
    }
    out.hydros.push_back(h);
  }
  for (size_t i = 0; i < downstream_ref.size(); ++i) {
    if (downstream_ref[i].empty()) continue;
    int target = -1;
    for (size_t j = 0; j < out.hydros.size(); ++j)
      if (out.hydros[j].name == downstream_ref[i]) {
        target = static_cast<int>(j);
        break;
      }
    if (target < 0)
      throw ConfigError(path + ": hydro '" + out.hydros[i].name + "': unknown downstream '" +
                        downstream_ref[i] + "'");
    out.hydros[i].downstream = target;
  }

  for (const auto* tsec : f.find_all("thermal")) {
    Thermal th;
    th.name = tsec->has("name") ? tsec->at("name").as_string("name")
                                : "thermal" + std::to_string(out.thermals.size() + 1);
    th.capacity = tsec->at("capacity").as_number("capacity");
    th.variable_cost = tsec->at("variable_cost").as_number("variable_cost");
    th.bus = bus_index(tsec, "thermal '" + th.name + "'");
    out.thermals.push_back(th);
  }

  for (const auto* lsec : f.find_all("line")) {
    Line ln;
    ln.name = lsec->has("name") ? lsec->at("name").as_string("name")
                                : "line" + std::to_string(out.lines.size() + 1);
    ln.from = lsec->at("from").as_int("from") - 1;
    ln.to = lsec->at("to").as_int("to") - 1;
    ln.capacity = lsec->at("capacity").as_number("capacity");
    out.lines.push_back(ln);
  }
  return out;
}

void save_system_file(const HydroSystem& sys, const std::string& path) {
  std::ostringstream out;
  out << "[system]\n";
  out << "horizon = " << sys.horizon << "\n";
  out << "deficit_cost = " << format_double(sys.deficit_cost) << "\n";
  out << "discount_rate = " << format_double(sys.discount_rate) << "\n";
  if (sys.buses.empty()) {
    out << "demand = [";
    for (size_t i = 0; i < sys.demand.size(); ++i)
      out << (i ? ", " : "") << format_double(sys.demand[i]);
    out << "]\n";
  }
  for (const auto& b : sys.buses) {
    out << "\n[[bus]]\nname = \"" << b.name << "\"\ndemand = [";
    for (size_t i = 0; i < b.demand.size(); ++i)
      out << (i ? ", " : "") << format_double(b.demand[i]);
    out << "]\n";
  }
  for (const auto& h : sys.hydros) {
    out << "\n[[hydro]]\nname = \"" << h.name << "\"\n";
    out << "v_max = " << format_double(h.v_max) << "\n";
    out << "v_min = " << format_double(h.v_min) << "\n";
    out << "u_max = " << format_double(h.u_max) << "\n";
    out << "production_factor = " << format_double(h.production_factor) << "\n";
    out << "v0 = " << format_double(h.v0) << "\n";
    out << "v_f = " << format_double(h.v_f) << "\n";
    if (h.downstream >= 0) out << "downstream = " << h.downstream + 1 << "\n";
    if (h.bus != 0) out << "bus = " << h.bus + 1 << "\n";
  }
  for (const auto& t : sys.thermals) {
    out << "\n[[thermal]]\nname = \"" << t.name << "\"\n";
    out << "capacity = " << format_double(t.capacity) << "\n";
    out << "variable_cost = " << format_double(t.variable_cost) << "\n";
    if (t.bus != 0) out << "bus = " << t.bus + 1 << "\n";
  }
  for (const auto& l : sys.lines) {
    out << "\n[[line]]\nname = \"" << l.name << "\"\n";
    out << "from = " << l.from + 1 << "\nto = " << l.to + 1 << "\n";
    out << "capacity = " << format_double(l.capacity) << "\n";
  }
  atomic_write_file(path, out.str());
}

ScenarioProcessSpec load_scenario_spec(const std::string& path) {
  ConfigFile f = load_config_file(path);
  ScenarioProcessSpec spec;
  for (const auto* rsec : f.find_all("reservoir")) {
    ReservoirProcess r;
    r.name = rsec->has("name") ? rsec->at("name").as_string("name")
                               : "reservoir" + std::to_string(spec.reservoirs.size() + 1);
    auto mean = rsec->at("monthly_mean").as_number_array("monthly_mean");
    auto sd = rsec->at("monthly_std").as_number_array("monthly_std");
    if (mean.size() != 12 || sd.size() != 12)
      throw ConfigError(path + ": reservoir '" + r.name +
                        "': monthly_mean and monthly_std need 12 entries");
    std::copy(mean.begin(), mean.end(), r.monthly_mean.begin());
    std::copy(sd.begin(), sd.end(), r.monthly_std.begin());
    if (rsec->has("ar1")) r.ar1 = rsec->at("ar1").as_number("ar1");
    if (rsec->has("history")) r.history = rsec->at("history").as_number_array("history");
    spec.reservoirs.push_back(r);
  }
  if (spec.reservoirs.empty()) throw ConfigError(path + ": no [[reservoir]] sections");
  return spec;
}

void save_scenario_spec(const ScenarioProcessSpec& spec, const std::string& path) {
  std::ostringstream out;
  for (const auto& r : spec.reservoirs) {
    out << "[[reservoir]]\nname = \"" << r.name << "\"\n";
    out << "monthly_mean = [";
    for (int i = 0; i < 12; ++i) out << (i ? ", " : "") << format_double(r.monthly_mean[i]);
    out << "]\nmonthly_std = [";
    for (int i = 0; i < 12; ++i) out << (i ? ", " : "") << format_double(r.monthly_std[i]);
    out << "]\nar1 = " << format_double(r.ar1) << "\nhistory = [";
    for (size_t i = 0; i < r.history.size(); ++i)
      out << (i ? ", " : "") << format_double(r.history[i]);
    out << "]\n\n";
  }
  atomic_write_file(path, out.str());
}

std::string RunConfig::resolve(const std::string& rel) const {
  if (rel.empty() || rel.front() == '/') return rel;
  if (config_dir.empty()) return rel;
  return (std::filesystem::path(config_dir) / rel).string();
}

RunConfig load_run_config(const std::string& path) {
  ConfigFile f = load_config_file(path);
  const ConfigSection* run = f.find("run");
  if (!run) throw ConfigError(path + ": missing [run] section");

  RunConfig cfg;
  cfg.config_dir = std::filesystem::path(path).parent_path().string();
  cfg.system_file = run->at("system").as_string("system");
  if (run->has("scenarios")) cfg.scenario_spec_file = run->at("scenarios").as_string("scenarios");
  if (run->has("in_csv")) cfg.in_csv = run->at("in_csv").as_string("in_csv");
  if (run->has("out_csv")) cfg.out_csv = run->at("out_csv").as_string("out_csv");
  if (cfg.scenario_spec_file.empty() && (cfg.in_csv.empty() || cfg.out_csv.empty()))
    throw ConfigError(path + ": need either scenarios= or both in_csv=/out_csv=");
  if (run->has("n_in")) cfg.n_in = run->at("n_in").as_int("n_in");
  if (run->has("n_out")) cfg.n_out = run->at("n_out").as_int("n_out");
  if (run->has("seed")) cfg.seed = static_cast<uint64_t>(run->at("seed").as_number("seed"));
  if (run->has("out_dir")) cfg.out_dir = run->at("out_dir").as_string("out_dir");
  if (run->has("jobs")) cfg.jobs = run->at("jobs").as_int("jobs");

  if (const ConfigSection* b = f.find("basis")) {
    cfg.basis.max_degree = b->at("max_degree").as_int("max_degree");
    cfg.basis.max_lag = b->at("max_lag").as_int("max_lag");
    if (b->has("include_complement"))
      cfg.basis.include_complement = b->at("include_complement").as_bool("include_complement");
    if (cfg.basis.max_degree < 1) throw ConfigError(path + ": basis max_degree must be >= 1");
    if (cfg.basis.max_lag < 0) throw ConfigError(path + ": basis max_lag must be >= 0");
  }
  if (const ConfigSection* s = f.find("sweep")) {
    if (s->has("grid")) {
      cfg.grid = s->at("grid").as_number_array("grid");
      for (double g : cfg.grid)
        if (g < 0) throw ConfigError(path + ": grid values must be >= 0");
    }
  }
  if (const ConfigSection* s = f.find("stt")) {
    if (s->has("gamma")) cfg.stt.gamma = s->at("gamma").as_number("gamma");
    if (s->has("spill_penalty"))
      cfg.stt.spill_penalty = s->at("spill_penalty").as_number("spill_penalty");
    if (s->has("apply_vf_at_T")) cfg.stt.apply_vf_at_T = s->at("apply_vf_at_T").as_bool("apply_vf_at_T");
    if (s->has("central_window")) {
      auto w = s->at("central_window").as_number_array("central_window");
      if (w.size() != 2) throw ConfigError(path + ": central_window needs [first, last]");
      cfg.central_window_first = static_cast<int>(w[0]);
      cfg.central_window_last = static_cast<int>(w[1]);
    }
  }
  return cfg;
}

namespace {

ScenarioSet scenarios_from_cfg(const RunConfig& cfg, bool in_sample) {
  const std::string& csv = in_sample ? cfg.in_csv : cfg.out_csv;
  if (!csv.empty()) return load_scenarios_csv(cfg.resolve(csv));
  ScenarioProcessSpec spec = load_scenario_spec(cfg.resolve(cfg.scenario_spec_file));
  int n = in_sample ? cfg.n_in : cfg.n_out;
  if (n < 1)
    throw ConfigError(std::string(in_sample ? "n_in" : "n_out") +
                      " must be >= 1 to generate scenarios");
  HydroSystem sys = load_system_file(cfg.resolve(cfg.system_file));
  // out-of-sample draws come from an independent substream
  return generate(spec, n, sys.horizon, in_sample ? cfg.seed : splitmix64(cfg.seed ^ 0x5eedULL));
}

}  // namespace

ScenarioSet load_in_scenarios(const RunConfig& cfg) { return scenarios_from_cfg(cfg, true); }
ScenarioSet load_out_scenarios(const RunConfig& cfg) { return scenarios_from_cfg(cfg, false); }

}  // namespace ldr
