#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ldr {

// One thermal unit. Costs are flat across stages.
struct Thermal {
  std::string name;
  double capacity = 0.0;       // avgMW available per stage
  double variable_cost = 0.0;  // $ per MWh-equivalent
  int bus = 0;
};

// One reservoir/plant. Volumes are "volume units per stage"; generation is
// production_factor * turbined volume, in avgMW.
struct Hydro {
  std::string name;
  double v_max = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;              // max turbined volume per stage
  double production_factor = 0.0;  // avgMW per volume unit
  int downstream = -1;             // index into hydros, -1 = river mouth
  double v0 = 0.0;                 // storage entering stage 1
  double v_f = 0.0;                // minimum storage at the end of the horizon
  int bus = 0;
};

struct Bus {
  std::string name;
  std::vector<double> demand;  // per stage, avgMW
};

struct Line {
  std::string name;
  int from = 0;
  int to = 0;
  double capacity = 0.0;  // avgMW, symmetric
};

struct HydroSystem {
  std::vector<Hydro> hydros;
  std::vector<Thermal> thermals;
  std::vector<double> demand;  // per stage; single-bus total load
  double deficit_cost = 0.0;   // $ per MWh-equivalent of unserved energy
  int horizon = 0;
  double discount_rate = 0.0;  // per-stage fraction, alpha = 1 + rate

  // Optional transport network. Empty buses => single-bus system and the
  // demand vector above is the nodal load.
  std::vector<Bus> buses;
  std::vector<Line> lines;

  int n_hydros() const { return static_cast<int>(hydros.size()); }
  int n_thermals() const { return static_cast<int>(thermals.size()); }
  int n_buses() const { return buses.empty() ? 1 : static_cast<int>(buses.size()); }

  double demand_at(int t) const;           // total system load at stage t (1-based)
  double bus_demand_at(int bus, int t) const;

  // River routing matrix M: +1 on the diagonal, -1 at (downstream(h), h).
  // Row h of M*(u+s) is own release minus what flows in from upstream.
  std::vector<std::vector<double>> topology_matrix() const;
};

struct Violation {
  std::string code;     // machine-readable, e.g. "topology.cycle"
  std::string message;  // human-readable detail
};

// Returns every invariant violation; an empty list means the system is valid.
std::vector<Violation> validate_system(const HydroSystem& system);

// alpha^{-t} with alpha = 1 + discount_rate. Throws std::out_of_range unless
// 1 <= t <= horizon.
double discount_factor(const HydroSystem& system, int t);

}  // namespace ldr
