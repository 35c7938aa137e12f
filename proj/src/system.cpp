#include "ldr/system.hpp"

#include <cmath>
#include <stdexcept>

namespace ldr {

double HydroSystem::demand_at(int t) const {
  if (demand.empty()) return 0.0;
  if (static_cast<int>(demand.size()) == 1) return demand[0];
  return demand[t - 1];
}

double HydroSystem::bus_demand_at(int bus, int t) const {
  if (buses.empty()) return demand_at(t);
  const auto& d = buses[bus].demand;
  if (d.empty()) return 0.0;
  if (d.size() == 1) return d[0];
  return d[t - 1];
}

std::vector<std::vector<double>> HydroSystem::topology_matrix() const {
  int H = n_hydros();
  std::vector<std::vector<double>> M(H, std::vector<double>(H, 0.0));
  for (int h = 0; h < H; ++h) {
    M[h][h] = 1.0;
    int down = hydros[h].downstream;
    if (down >= 0 && down < H && down != h) M[down][h] = -1.0;
  }
  return M;
}

namespace {

bool topology_has_cycle(const HydroSystem& sys, std::vector<int>* cycle_member) {
  int H = sys.n_hydros();
  bool found = false;
  for (int start = 0; start < H; ++start) {
    int cur = start;
    for (int steps = 0; steps <= H; ++steps) {
      cur = sys.hydros[cur].downstream;
      if (cur < 0 || cur >= H) break;
      if (cur == start) {  // walked back to the origin
        found = true;
        if (cycle_member) cycle_member->push_back(start);
        break;
      }
    }
  }
  return found;
}

}  // namespace

std::vector<Violation> validate_system(const HydroSystem& sys) {
  std::vector<Violation> out;
  auto add = [&](const std::string& code, const std::string& msg) {
    out.push_back({code, msg});
  };

  if (sys.horizon < 1) add("system.horizon", "horizon must be >= 1");
  if (sys.deficit_cost < 0) add("system.deficit_cost.negative", "deficit_cost must be >= 0");
  if (sys.demand.empty() && sys.buses.empty())
    add("system.demand.missing", "demand is required (no default)");
  if (!sys.demand.empty() && sys.demand.size() != 1 &&
      static_cast<int>(sys.demand.size()) != sys.horizon)
    add("system.demand.length", "demand must be scalar or one value per stage");
  for (size_t i = 0; i < sys.demand.size(); ++i)
    if (sys.demand[i] < 0) add("system.demand.negative", "demand must be >= 0");

  for (int i = 0; i < sys.n_thermals(); ++i) {
    const Thermal& th = sys.thermals[i];
    if (th.capacity < 0)
      add("thermal.capacity.negative", "thermal '" + th.name + "' capacity < 0");
    if (th.variable_cost < 0)
      add("thermal.cost.negative", "thermal '" + th.name + "' variable_cost < 0");
    if (th.bus < 0 || th.bus >= sys.n_buses())
      add("thermal.bus.range", "thermal '" + th.name + "' references unknown bus");
  }

  int H = sys.n_hydros();
  for (int h = 0; h < H; ++h) {
    const Hydro& hy = sys.hydros[h];
    if (hy.v_min < 0) add("hydro.v_min.negative", "hydro '" + hy.name + "' v_min < 0");
    if (hy.v_min > hy.v_max)
      add("hydro.storage.order", "hydro '" + hy.name + "' needs v_min <= v_max");
    if (hy.v0 < hy.v_min || hy.v0 > hy.v_max)
      add("hydro.v0.range", "hydro '" + hy.name + "' needs v_min <= v0 <= v_max");
    if (hy.v_f < hy.v_min || hy.v_f > hy.v_max)
      add("hydro.vf.range", "hydro '" + hy.name + "' needs v_min <= v_f <= v_max");
    if (hy.u_max < 0) add("hydro.u_max.negative", "hydro '" + hy.name + "' u_max < 0");
    if (hy.production_factor < 0)
      add("hydro.factor.negative", "hydro '" + hy.name + "' production_factor < 0");
    if (hy.downstream == h)
      add("topology.self_loop", "hydro '" + hy.name + "' is its own downstream");
    if (hy.downstream >= H)
      add("topology.range", "hydro '" + hy.name + "' downstream index out of range");
    if (hy.bus < 0 || hy.bus >= sys.n_buses())
      add("hydro.bus.range", "hydro '" + hy.name + "' references unknown bus");
  }

  std::vector<int> cyclic;
  if (topology_has_cycle(sys, &cyclic)) {
    std::string names;
    for (int h : cyclic) {
      if (!names.empty()) names += ", ";
      names += sys.hydros[h].name;
    }
    add("topology.cycle", "cycle detected through: " + names);
  }

  // M structure check: +1 diagonal, -1 only at (down(h'), h').
  if (cyclic.empty()) {
    auto M = sys.topology_matrix();
    for (int i = 0; i < H; ++i) {
      for (int j = 0; j < H; ++j) {
        double expect = (i == j) ? 1.0
                        : (sys.hydros[j].downstream == i ? -1.0 : 0.0);
        if (M[i][j] != expect) {
          add("topology.matrix", "topology matrix entry mismatch");
          i = H;
          break;
        }
      }
    }
  }

  for (const Line& ln : sys.lines) {
    if (ln.from < 0 || ln.from >= sys.n_buses() || ln.to < 0 || ln.to >= sys.n_buses())
      add("line.bus.range", "line '" + ln.name + "' references unknown bus");
    if (ln.capacity < 0) add("line.capacity.negative", "line '" + ln.name + "' capacity < 0");
  }

  return out;
}

double discount_factor(const HydroSystem& sys, int t) {
  if (t < 1 || t > sys.horizon) throw std::out_of_range("discount_factor: stage out of range");
  double alpha = 1.0 + sys.discount_rate;
  return std::pow(alpha, -t);
}

}  // namespace ldr
