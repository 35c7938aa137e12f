#include "ldr/estimator.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"
#include "json.hpp"

namespace ldr {

int LdrPolicy::block_len() const {
  bool complement = basis.include_complement && stats.n_reservoirs >= 2;
  return block_size(basis, complement);
}

int LdrPolicy::block_offset(int t, int h) const {
  int H = stats.n_reservoirs;
  return ((t - 1) * H + h) * block_len();
}

std::vector<int> penalized_positions(const std::vector<CoefficientIndex>& index) {
  std::vector<int> out;
  for (size_t i = 0; i < index.size(); ++i)
    if (index[i].k > 0) out.push_back(static_cast<int>(i));
  return out;
}

AdalassoWeights adalasso_weights(const LdrPolicy& theta0) {
  AdalassoWeights w;
  for (size_t i = 0; i < theta0.index.size(); ++i) {
    if (theta0.index[i].k == 0) continue;
    double a = std::abs(theta0.theta[i]);
    w.w.push_back(a > kZeroTol ? 1.0 / a : 1.0);
  }
  return w;
}

namespace {

std::string idx_tag(const CoefficientIndex& ci) {
  std::ostringstream s;
  s << ci.t << '_' << ci.h << '_' << ci.k << '_' << ci.l << '_' << ci.r;
  return s.str();
}

}  // namespace

LdrPolicy estimate(const HydroSystem& system, const ScenarioSet& scenarios,
                   const BasisConfig& basis, double lambda, const AdalassoWeights* weights,
                   EstimateInfo* info) {
  auto violations = validate_system(system);
  if (!violations.empty())
    throw ConfigError("estimate: invalid system: " + violations[0].code + ": " +
                      violations[0].message);
  if (scenarios.horizon != system.horizon)
    throw ConfigError("estimate: scenario horizon differs from system horizon");
  if (scenarios.n_reservoirs != system.n_hydros())
    throw ConfigError("estimate: scenario reservoir count differs from system");
  if (scenarios.history_stages() < basis.max_lag)
    throw ConfigError("estimate: scenario history shorter than basis max_lag");
  if (lambda < 0) throw ConfigError("estimate: lambda must be >= 0");
  if (lambda > 0 && weights == nullptr)
    throw ConfigError("estimate: lambda > 0 requires AdaLASSO weights");

  const int T = system.horizon;
  const int H = system.n_hydros();
  const int G = system.n_thermals();
  const int N = scenarios.n_scenarios;
  const int B = system.n_buses();
  const int F = static_cast<int>(system.lines.size());
  const bool complement = complement_active(system, basis);
  const int blk = block_size(basis, complement);

  StandardizationStats stats = standardize_stats(scenarios);
  std::vector<CoefficientIndex> index = index_set(system, basis);
  auto penalized = penalized_positions(index);
  if (weights && weights->w.size() != penalized.size())
    throw ConfigError("estimate: weight vector does not match the penalized index count");

  // Features per (s, t, h) block, in index_set block order.
  std::vector<double> psi(static_cast<size_t>(N) * T * H * blk);
  for (int s = 0; s < N; ++s) {
    InflowFn inflow = [&](int t, int h) { return scenarios.inflow(s, t, h); };
    for (int t = 1; t <= T; ++t)
      for (int h = 0; h < H; ++h) {
        auto f = features(inflow, stats, t, h, basis, H);
        std::copy(f.begin(), f.end(),
                  psi.begin() + ((static_cast<size_t>(s) * T + (t - 1)) * H + h) * blk);
      }
  }

  LpModel lp;
  auto M = system.topology_matrix();

  // theta variables in canonical order
  std::vector<int> theta_var(index.size());
  for (size_t i = 0; i < index.size(); ++i)
    theta_var[i] = lp.add_variable("th_" + idx_tag(index[i]), -kInf, kInf, 0.0);

  // stage variables per (s, t)
  auto g_var = [&](int s, int t, int i) {
    return (static_cast<size_t>(s) * T + (t - 1)) * (G + 3 * H + B + F) + i;
  };
  int stage_base = lp.n_vars();
  const double inv_n = 1.0 / N;
  for (int s = 0; s < N; ++s) {
    for (int t = 1; t <= T; ++t) {
      double disc = discount_factor(system, t) * inv_n;
      std::string st = std::to_string(t) + "_" + std::to_string(s + 1);
      for (int i = 0; i < G; ++i)
        lp.add_variable("g" + std::to_string(i + 1) + "_" + st, 0.0,
                        system.thermals[i].capacity, disc * system.thermals[i].variable_cost);
      for (int h = 0; h < H; ++h)
        lp.add_variable("u" + std::to_string(h + 1) + "_" + st, 0.0, system.hydros[h].u_max,
                        0.0);
      for (int h = 0; h < H; ++h)
        lp.add_variable("sp" + std::to_string(h + 1) + "_" + st, 0.0, kInf, 0.0);
      for (int h = 0; h < H; ++h)
        lp.add_variable("v" + std::to_string(h + 1) + "_" + st, system.hydros[h].v_min,
                        system.hydros[h].v_max, 0.0);
      for (int b = 0; b < B; ++b)
        lp.add_variable("dl" + std::to_string(b + 1) + "_" + st, 0.0, kInf,
                        disc * system.deficit_cost);
      for (int f = 0; f < F; ++f)
        lp.add_variable("f" + std::to_string(f + 1) + "_" + st, -system.lines[f].capacity,
                        system.lines[f].capacity, 0.0);
    }
  }
  auto stage_var = [&](int s, int t, int off) { return stage_base + g_var(s, t, off); };
  auto u_off = [&](int h) { return G + h; };
  auto sp_off = [&](int h) { return G + H + h; };
  auto v_off = [&](int h) { return G + 2 * H + h; };
  auto dl_off = [&](int b) { return G + 3 * H + b; };
  auto f_off = [&](int f) { return G + 3 * H + B + f; };

  // phi epigraph variables for lambda > 0
  std::vector<int> phi_var;
  if (lambda > 0) {
    phi_var.resize(penalized.size());
    for (size_t p = 0; p < penalized.size(); ++p)
      phi_var[p] = lp.add_variable("phi_" + idx_tag(index[penalized[p]]), 0.0, kInf,
                                   lambda * weights->w[p]);
  }

  // constraints
  std::vector<std::pair<int, double>> terms;
  for (int s = 0; s < N; ++s) {
    for (int t = 1; t <= T; ++t) {
      std::string st = std::to_string(t) + "_" + std::to_string(s + 1);
      // energy balance per bus
      for (int b = 0; b < B; ++b) {
        terms.clear();
        for (int i = 0; i < G; ++i)
          if (system.thermals[i].bus == b) terms.push_back({stage_var(s, t, i), 1.0});
        for (int h = 0; h < H; ++h)
          if (system.hydros[h].bus == b)
            terms.push_back({stage_var(s, t, u_off(h)), system.hydros[h].production_factor});
        for (int f = 0; f < F; ++f) {
          if (system.lines[f].to == b) terms.push_back({stage_var(s, t, f_off(f)), 1.0});
          if (system.lines[f].from == b) terms.push_back({stage_var(s, t, f_off(f)), -1.0});
        }
        terms.push_back({stage_var(s, t, dl_off(b)), 1.0});
        std::string name = B > 1 ? "en" + std::to_string(b + 1) + "_" + st : "en_" + st;
        lp.add_constraint(name, terms, RowSense::Equal, system.bus_demand_at(b, t));
      }
      // water balance per reservoir
      for (int h = 0; h < H; ++h) {
        terms.clear();
        terms.push_back({stage_var(s, t, v_off(h)), 1.0});
        if (t > 1) terms.push_back({stage_var(s, t - 1, v_off(h)), -1.0});
        for (int hh = 0; hh < H; ++hh) {
          if (M[h][hh] == 0.0) continue;
          terms.push_back({stage_var(s, t, u_off(hh)), M[h][hh]});
          terms.push_back({stage_var(s, t, sp_off(hh)), M[h][hh]});
        }
        double rhs = scenarios.inflow(s, t, h) + (t == 1 ? system.hydros[h].v0 : 0.0);
        lp.add_constraint("wa" + std::to_string(h + 1) + "_" + st, terms, RowSense::Equal, rhs);
      }
      // LDR coupling v = Psi * theta
      for (int h = 0; h < H; ++h) {
        terms.clear();
        terms.push_back({stage_var(s, t, v_off(h)), 1.0});
        size_t base = ((static_cast<size_t>(s) * T + (t - 1)) * H + h) * blk;
        size_t idx_base = (static_cast<size_t>(t - 1) * H + h) * blk;
        for (int j = 0; j < blk; ++j) {
          double coef = psi[base + j];
          if (coef != 0.0) terms.push_back({theta_var[idx_base + j], -coef});
        }
        lp.add_constraint("ldr" + std::to_string(h + 1) + "_" + st, terms, RowSense::Equal, 0.0);
      }
    }
    // final storage
    for (int h = 0; h < H; ++h) {
      terms.clear();
      terms.push_back({stage_var(s, T, v_off(h)), 1.0});
      lp.add_constraint("vf" + std::to_string(h + 1) + "_" + std::to_string(s + 1), terms,
                        RowSense::GreaterEqual, system.hydros[h].v_f);
    }
  }
  if (lambda > 0) {
    for (size_t p = 0; p < penalized.size(); ++p) {
      int tv = theta_var[penalized[p]];
      std::string tag = idx_tag(index[penalized[p]]);
      lp.add_constraint("epl_" + tag, {{phi_var[p], 1.0}, {tv, -1.0}}, RowSense::GreaterEqual,
                        0.0);
      lp.add_constraint("epu_" + tag, {{phi_var[p], 1.0}, {tv, 1.0}}, RowSense::GreaterEqual,
                        0.0);
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  LpSolution sol = solve(lp);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (sol.status != LpStatus::Optimal)
    throw LpFailure("estimation LP " + std::string(to_string(sol.status)) +
                    (sol.message.empty() ? "" : ": " + sol.message));

  LdrPolicy policy;
  policy.index = std::move(index);
  policy.theta.resize(policy.index.size());
  for (size_t i = 0; i < policy.index.size(); ++i) policy.theta[i] = sol.x[theta_var[i]];
  policy.stats = std::move(stats);
  policy.basis = basis;
  policy.lambda = lambda;

  double op_cost = 0.0;
  for (int s = 0; s < N; ++s)
    for (int t = 1; t <= T; ++t) {
      double disc = discount_factor(system, t);
      double stage = 0.0;
      for (int i = 0; i < G; ++i)
        stage += system.thermals[i].variable_cost * sol.x[stage_var(s, t, i)];
      for (int b = 0; b < B; ++b) stage += system.deficit_cost * sol.x[stage_var(s, t, dl_off(b))];
      op_cost += disc * stage;
    }
  policy.in_sample_cost = op_cost * inv_n;

  if (info) {
    info->status = sol.status;
    info->objective = sol.objective;
    info->operational_cost = policy.in_sample_cost;
    info->solve_seconds = secs;
    double pen = 0.0;
    for (size_t p = 0; p < penalized.size(); ++p)
      pen += (weights ? weights->w[p] : 0.0) * std::abs(policy.theta[penalized[p]]);
    info->penalty_value = lambda * pen;
    int nz = 0;
    for (int pos : penalized)
      if (std::abs(policy.theta[pos]) > kZeroTol) ++nz;
    info->nonzero_count = nz;

    double max_en = 0.0, max_wa = 0.0;
    for (int s = 0; s < N; ++s)
      for (int t = 1; t <= T; ++t) {
        for (int b = 0; b < B; ++b) {
          double lhs = 0.0;
          for (int i = 0; i < G; ++i)
            if (system.thermals[i].bus == b) lhs += sol.x[stage_var(s, t, i)];
          for (int h = 0; h < H; ++h)
            if (system.hydros[h].bus == b)
              lhs += system.hydros[h].production_factor * sol.x[stage_var(s, t, u_off(h))];
          for (int f = 0; f < F; ++f) {
            if (system.lines[f].to == b) lhs += sol.x[stage_var(s, t, f_off(f))];
            if (system.lines[f].from == b) lhs -= sol.x[stage_var(s, t, f_off(f))];
          }
          lhs += sol.x[stage_var(s, t, dl_off(b))];
          max_en = std::max(max_en, std::abs(lhs - system.bus_demand_at(b, t)));
        }
        for (int h = 0; h < H; ++h) {
          double lhs = sol.x[stage_var(s, t, v_off(h))];
          if (t > 1) lhs -= sol.x[stage_var(s, t - 1, v_off(h))];
          for (int hh = 0; hh < H; ++hh) {
            if (M[h][hh] == 0.0) continue;
            lhs += M[h][hh] *
                   (sol.x[stage_var(s, t, u_off(hh))] + sol.x[stage_var(s, t, sp_off(hh))]);
          }
          double rhs = scenarios.inflow(s, t, h) + (t == 1 ? system.hydros[h].v0 : 0.0);
          max_wa = std::max(max_wa, std::abs(lhs - rhs));
        }
      }
    info->max_energy_residual = max_en;
    info->max_water_residual = max_wa;
  }
  return policy;
}

void save_policy(const LdrPolicy& policy, const std::string& path) {
  std::ostringstream csv;
  csv << "t,h,k,l,r,theta\n";
  for (size_t i = 0; i < policy.index.size(); ++i) {
    const auto& ci = policy.index[i];
    csv << ci.t << ',' << ci.h << ',' << ci.k << ',' << ci.l << ',' << ci.r << ','
        << format_double(policy.theta[i]) << '\n';
  }
  atomic_write_file(path, csv.str());

  nlohmann::json meta;
  meta["lambda"] = policy.lambda;
  meta["in_sample_cost"] = policy.in_sample_cost;
  meta["basis"] = {{"max_degree", policy.basis.max_degree},
                   {"max_lag", policy.basis.max_lag},
                   {"include_complement", policy.basis.include_complement}};
  meta["stats"] = {{"horizon", policy.stats.horizon},
                   {"n_reservoirs", policy.stats.n_reservoirs},
                   {"lag_stages", policy.stats.lag_stages},
                   {"mu", policy.stats.mu},
                   {"sigma", policy.stats.sigma},
                   {"mu_c", policy.stats.mu_c},
                   {"sigma_c", policy.stats.sigma_c}};
  atomic_write_file(path + ".meta.json", meta.dump(2) + "\n");
}

LdrPolicy load_policy(const std::string& path) {
  LdrPolicy policy;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(path + ".meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ".meta.json: " + e.what());
  }
  try {
    policy.lambda = meta.at("lambda").get<double>();
    policy.in_sample_cost = meta.at("in_sample_cost").get<double>();
    const auto& b = meta.at("basis");
    policy.basis.max_degree = b.at("max_degree").get<int>();
    policy.basis.max_lag = b.at("max_lag").get<int>();
    policy.basis.include_complement = b.at("include_complement").get<bool>();
    const auto& st = meta.at("stats");
    policy.stats.horizon = st.at("horizon").get<int>();
    policy.stats.n_reservoirs = st.at("n_reservoirs").get<int>();
    policy.stats.lag_stages = st.at("lag_stages").get<int>();
    policy.stats.mu = st.at("mu").get<std::vector<double>>();
    policy.stats.sigma = st.at("sigma").get<std::vector<double>>();
    policy.stats.mu_c = st.at("mu_c").get<std::vector<double>>();
    policy.stats.sigma_c = st.at("sigma_c").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ".meta.json: missing field: " + e.what());
  }

  // Rebuild the canonical index set from the declared basis/stats shape.
  HydroSystem shape;
  shape.horizon = policy.stats.horizon;
  shape.hydros.resize(policy.stats.n_reservoirs);
  policy.index = index_set(shape, policy.basis);
  policy.theta.assign(policy.index.size(), 0.0);

  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,h,k,l,r,theta")
    throw ConfigError(path + ": expected header t,h,k,l,r,theta");

  // map from index tuple to position
  std::unordered_map<std::string, int> pos;
  pos.reserve(policy.index.size() * 2);
  for (size_t i = 0; i < policy.index.size(); ++i)
    pos.emplace(idx_tag(policy.index[i]), static_cast<int>(i));

  std::vector<char> seen(policy.index.size(), 0);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string l = trim(line);
    if (l.empty()) continue;
    auto parts = split(l, ',');
    if (parts.size() != 6)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
    CoefficientIndex ci;
    double value;
    try {
      ci.t = std::stoi(parts[0]);
      ci.h = std::stoi(parts[1]);
      ci.k = std::stoi(parts[2]);
      ci.l = std::stoi(parts[3]);
      ci.r = std::stoi(parts[4]);
      value = std::stod(parts[5]);
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed row");
    }
    auto it = pos.find(idx_tag(ci));
    if (it == pos.end())
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": index not in declared basis: " + idx_tag(ci));
    if (seen[it->second])
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate index " + idx_tag(ci));
    seen[it->second] = 1;
    policy.theta[it->second] = value;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw ConfigError(path + ": missing coefficient for index " + idx_tag(policy.index[i]));
  return policy;
}

}  // namespace ldr
