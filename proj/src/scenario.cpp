#include "ldr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"

namespace ldr {

double ScenarioSet::inflow(int s, int t, int h) const {
  if (t >= 1) return inflows[(static_cast<size_t>(s) * horizon + (t - 1)) * n_reservoirs + h];
  int tau = history_stages();
  int j = t + tau - 1;  // stage 0 -> last history slot
  if (j < 0) throw std::out_of_range("inflow: stage before recorded history");
  return history[h][j];
}

double& ScenarioSet::at(int s, int t, int h) {
  return inflows[(static_cast<size_t>(s) * horizon + (t - 1)) * n_reservoirs + h];
}

int month_of_stage(int t) { return (t - 1) % 12 + 1; }

namespace {

// Natural-scale (mean, std) -> log-space (mu, sigma).
void lognormal_params(double mean, double sd, double* mu, double* sigma) {
  double cv2 = (sd / mean) * (sd / mean);
  *sigma = std::sqrt(std::log1p(cv2));
  *mu = std::log(mean) - 0.5 * (*sigma) * (*sigma);
}

}  // namespace

ScenarioSet generate(const ScenarioProcessSpec& spec, int n, int horizon, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: need n >= 1");
  if (horizon < 1) throw std::invalid_argument("generate: need horizon >= 1");
  if (spec.reservoirs.empty()) throw std::invalid_argument("generate: empty process spec");

  size_t hist_len = spec.reservoirs[0].history.size();
  for (const auto& r : spec.reservoirs) {
    if (r.ar1 < 0.0 || r.ar1 >= 1.0)
      throw std::invalid_argument("generate: AR coefficient must be in [0,1)");
    for (double sd : r.monthly_std)
      if (sd < 0.0) throw std::invalid_argument("generate: monthly std must be >= 0");
    if (r.history.size() != hist_len)
      throw std::invalid_argument("generate: history length must match across reservoirs");
    for (double v : r.history)
      if (v < 0.0) throw std::invalid_argument("generate: history inflows must be >= 0");
  }

  ScenarioSet set;
  set.n_scenarios = n;
  set.horizon = horizon;
  set.n_reservoirs = static_cast<int>(spec.reservoirs.size());
  set.seed = seed;
  set.inflows.assign(static_cast<size_t>(n) * horizon * set.n_reservoirs, 0.0);
  set.history.resize(set.n_reservoirs);
  for (int h = 0; h < set.n_reservoirs; ++h) set.history[h] = spec.reservoirs[h].history;

  for (int s = 0; s < n; ++s) {
    for (int h = 0; h < set.n_reservoirs; ++h) {
      const ReservoirProcess& proc = spec.reservoirs[h];
      std::mt19937_64 rng(substream_seed(seed, static_cast<uint64_t>(s), static_cast<uint64_t>(h)));
      std::normal_distribution<double> normal(0.0, 1.0);
      double phi = proc.ar1;
      // Stationary standardized log-shock; marginals stay the monthly
      // lognormal for any phi.
      double z = (phi > 0.0) ? normal(rng) : 0.0;
      for (int t = 1; t <= horizon; ++t) {
        double eps = normal(rng);
        z = (phi > 0.0) ? phi * z + std::sqrt(1.0 - phi * phi) * eps : eps;
        int m = month_of_stage(t) - 1;
        double mean = proc.monthly_mean[m];
        double sd = proc.monthly_std[m];
        double value;
        if (mean <= 0.0) {
          value = 0.0;  // dry month, exact
        } else if (sd <= 0.0) {
          value = mean;
        } else {
          double mu, sigma;
          lognormal_params(mean, sd, &mu, &sigma);
          value = std::exp(mu + sigma * z);
        }
        set.at(s, t, h) = value;
      }
    }
  }
  return set;
}

std::vector<std::vector<double>> complement_aggregate(const ScenarioSet& set, int h) {
  if (set.n_reservoirs < 2)
    throw std::invalid_argument("complement_aggregate: undefined for a single reservoir");
  if (h < 0 || h >= set.n_reservoirs)
    throw std::out_of_range("complement_aggregate: reservoir index");
  std::vector<std::vector<double>> out(set.n_scenarios, std::vector<double>(set.horizon, 0.0));
  for (int s = 0; s < set.n_scenarios; ++s)
    for (int t = 1; t <= set.horizon; ++t) {
      double sum = 0.0;
      for (int hh = 0; hh < set.n_reservoirs; ++hh)
        if (hh != h) sum += set.inflow(s, t, hh);
      out[s][t - 1] = sum;
    }
  return out;
}

StandardizationStats standardize_stats(const ScenarioSet& set) {
  if (set.n_scenarios < 1) throw std::invalid_argument("standardize_stats: empty set");
  StandardizationStats st;
  st.horizon = set.horizon;
  st.n_reservoirs = set.n_reservoirs;
  st.lag_stages = set.history_stages();
  size_t cells = static_cast<size_t>(st.horizon + st.lag_stages) * st.n_reservoirs;
  st.mu.assign(cells, 0.0);
  st.sigma.assign(cells, 1.0);
  bool complement = set.n_reservoirs >= 2;
  if (complement) {
    st.mu_c.assign(cells, 0.0);
    st.sigma_c.assign(cells, 1.0);
  }

  int n = set.n_scenarios;
  for (int t = 1 - st.lag_stages; t <= st.horizon; ++t) {
    for (int h = 0; h < st.n_reservoirs; ++h) {
      double sum = 0.0, sumsq = 0.0;
      double csum = 0.0, csumsq = 0.0;
      for (int s = 0; s < n; ++s) {
        double x = set.inflow(s, t, h);
        sum += x;
        sumsq += x * x;
        if (complement) {
          double c = 0.0;
          for (int hh = 0; hh < st.n_reservoirs; ++hh)
            if (hh != h) c += set.inflow(s, t, hh);
          csum += c;
          csumsq += c * c;
        }
      }
      double mean = sum / n;
      double var = std::max(0.0, sumsq / n - mean * mean);
      double sd = std::sqrt(var);
      int o = st.offset(t, h);
      st.mu[o] = mean;
      st.sigma[o] = (sd > 0.0) ? sd : 1.0;  // degenerate stages give a zero feature
      if (complement) {
        double cmean = csum / n;
        double cvar = std::max(0.0, csumsq / n - cmean * cmean);
        double csd = std::sqrt(cvar);
        st.mu_c[o] = cmean;
        st.sigma_c[o] = (csd > 0.0) ? csd : 1.0;
      }
    }
  }
  return st;
}

void save_scenarios_csv(const ScenarioSet& set, const std::string& path) {
  std::ostringstream out;
  out << "scenario,stage,reservoir,inflow\n";
  int tau = set.history_stages();
  for (int t = 1 - tau; t <= 0; ++t)
    for (int h = 0; h < set.n_reservoirs; ++h)
      out << 0 << ',' << t << ',' << h + 1 << ',' << format_double(set.inflow(0, t, h)) << '\n';
  for (int s = 0; s < set.n_scenarios; ++s)
    for (int t = 1; t <= set.horizon; ++t)
      for (int h = 0; h < set.n_reservoirs; ++h)
        out << s + 1 << ',' << t << ',' << h + 1 << ',' << format_double(set.inflow(s, t, h))
            << '\n';
  atomic_write_file(path, out.str());
}

ScenarioSet load_scenarios_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty scenario CSV");
  if (trim(line) != "scenario,stage,reservoir,inflow")
    throw ConfigError(path + ": expected header scenario,stage,reservoir,inflow");

  struct Rec {
    int s, t, h;
    double v;
  };
  std::vector<Rec> recs;
  int lineno = 1;
  int max_s = 0, max_t = 0, max_h = 0, min_t = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string l = trim(line);
    if (l.empty()) continue;
    auto parts = split(l, ',');
    if (parts.size() != 4)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    Rec r;
    try {
      r.s = std::stoi(parts[0]);
      r.t = std::stoi(parts[1]);
      r.h = std::stoi(parts[2]);
      r.v = std::stod(parts[3]);
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (r.v < 0)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": negative inflow");
    recs.push_back(r);
    max_s = std::max(max_s, r.s);
    max_t = std::max(max_t, r.t);
    max_h = std::max(max_h, r.h);
    min_t = std::min(min_t, r.t);
  }
  if (recs.empty()) throw ConfigError(path + ": no data rows");

  ScenarioSet set;
  set.n_scenarios = max_s;
  set.horizon = max_t;
  set.n_reservoirs = max_h;
  int tau = 1 - min_t;
  set.inflows.assign(static_cast<size_t>(max_s) * max_t * max_h, -1.0);
  set.history.assign(max_h, std::vector<double>(tau, -1.0));
  for (const Rec& r : recs) {
    if (r.t >= 1) {
      if (r.s < 1)
        throw ConfigError(path + ": scenario must be >= 1 for stage >= 1 rows");
      set.at(r.s - 1, r.t, r.h - 1) = r.v;
    } else {
      set.history[r.h - 1][r.t + tau - 1] = r.v;
    }
  }
  for (double v : set.inflows)
    if (v < 0) throw ConfigError(path + ": missing (scenario,stage,reservoir) cells");
  for (const auto& hh : set.history)
    for (double v : hh)
      if (v < 0) throw ConfigError(path + ": missing history cells");
  return set;
}

}  // namespace ldr
