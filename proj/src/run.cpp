#include "inls/run.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <thread>

#include <json.hpp>

#include "inls/dichotomy.hpp"
#include "inls/evolution.hpp"
#include "inls/io.hpp"
#include "inls/verify.hpp"

namespace inls {

using json = nlohmann::ordered_json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json params_json(const ModelParams& p) {
  return json{{"N", p.dim()}, {"sigma", p.sigma()}, {"b", p.b()}, {"s_sigma", p.s_sigma()}};
}

json describe(const InitialData& d) {
  switch (d.kind) {
    case InitialData::Kind::GroundStateScaled:
      return json{{"kind", "ground_state_scaled"}, {"gamma", d.gamma}};
    case InitialData::Kind::Gaussian:
      return json{{"kind", "gaussian"}, {"amplitude", d.amplitude}, {"width", d.width}, {"center", d.center}};
    case InitialData::Kind::File:
      return json{{"kind", "file"}, {"path", d.path}};
  }
  return {};
}

json threshold_json(const ThresholdReport& t) {
  return json{{"me_u", t.me_u},         {"me_q", t.me_q},
              {"g_u", t.g_u},           {"g_q", t.g_q},
              {"energy_u", t.energy_u}, {"finite_variance", t.finite_variance},
              {"verdict", to_string(t.verdict)}};
}

/// Exact norms of γQ from the certified ones.
Norms scaled_norms(const GroundStateReport& gs, double gamma) {
  const double s2 = 2.0 * gs.profile.params.sigma() + 2.0;
  return {gamma * gamma * gs.l2_sq, gamma * gamma * gs.grad_sq, std::pow(gamma, s2) * gs.pot};
}

FieldState gaussian_field(const InitialData& d, const GridSpec& grid) {
  FieldState f = FieldState::zeros(grid);
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.dim()));
  const double w2 = d.width * d.width;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.unflatten(k, idx.data());
    double rr = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double x = grid.coord(idx[static_cast<std::size_t>(a)]) - (a == 0 ? d.center : 0.0);
      rr += x * x;
    }
    f.values[k] = d.amplitude * std::exp(-0.5 * rr / w2);
  }
  return f;
}

int run_groundstate(const RunConfig& cfg, std::ostream& log) {
  const auto& params = *cfg.params;
  const auto gs = solve_ground_state(params, cfg.gs_tol, cfg.solve);
  write_text(out_path(cfg, "profile.csv"), profile_csv(gs.profile));
  json j = params_json(params);
  j["alpha"] = gs.profile.alpha;
  j["residual"] = gs.profile.residual;
  j["l2_sq"] = gs.l2_sq;
  j["grad_sq"] = gs.grad_sq;
  j["pot"] = gs.pot;
  j["energy"] = ground_state_energy(params, gs.l2_sq);
  j["kopt"] = gs.kopt;
  j["eq_res"] = gs.eq_res;
  j["pohozaev_res"] = json::array({gs.pohozaev_res[0], gs.pohozaev_res[1]});
  j["energy_res"] = gs.energy_res;
  j["bisection_steps"] = gs.bisection_steps;
  j["profile_path"] = "profile.csv";
  write_json(out_path(cfg, "report.json"), j);
  log << "alpha = " << std::setprecision(17) << gs.profile.alpha << "\n";
  return 0;
}

int run_classify(const RunConfig& cfg, std::ostream& log) {
  const auto& params = *cfg.params;
  const auto& data = *cfg.initial_data;
  const auto gs = solve_ground_state(params, cfg.gs_tol, cfg.solve);
  ThresholdReport t;
  switch (data.kind) {
    case InitialData::Kind::GroundStateScaled:
      t = classify(scaled_norms(gs, data.gamma), params, gs, cfg.finite_variance);
      break;
    case InitialData::Kind::Gaussian:
      t = classify(gaussian_field(data, *cfg.grid), params, gs, cfg.finite_variance);
      break;
    case InitialData::Kind::File:
      t = classify(norms(read_profile_csv(data.path, params)), params, gs, cfg.finite_variance);
      break;
  }
  json j = params_json(params);
  j["initial_data"] = describe(data);
  const json tj = threshold_json(t);
  for (const auto& [k, v] : tj.items()) j[k] = v;
  write_json(out_path(cfg, "report.json"), j);
  log << "verdict: " << to_string(t.verdict) << "\n";
  return 0;
}

int run_evolve(const RunConfig& cfg, std::ostream& log) {
  const auto& params = *cfg.params;
  const auto& data = *cfg.initial_data;
  const auto& grid = *cfg.grid;
  FieldState u0 = FieldState::zeros(grid);
  switch (data.kind) {
    case InitialData::Kind::GroundStateScaled:
      u0 = radialize(solve_ground_state(params, cfg.gs_tol, cfg.solve).profile, grid, data.gamma);
      break;
    case InitialData::Kind::Gaussian:
      u0 = gaussian_field(data, grid);
      break;
    case InitialData::Kind::File:
      u0 = radialize(read_profile_csv(data.path, params), grid);
      break;
  }
  const auto traj = evolve(u0, params, cfg.evolve_cfg);
  write_text(out_path(cfg, "trajectory.csv"), trajectory_csv(traj.records));
  json j{{"outcome", to_string(traj.outcome)}};
  if (traj.outcome != Outcome::CompletedT) j["t_detect"] = traj.t_event;
  j["records_path"] = "trajectory.csv";
  write_json(out_path(cfg, "report.json"), j);
  log << "outcome: " << to_string(traj.outcome) << "\n";
  return 0;
}

int run_verify_mode(const RunConfig& cfg, std::ostream& log) {
  const auto rep = run_verify(cfg.cases, cfg.sizes, cfg.seed, cfg.gs_tol, cfg.solve);
  json cases = json::array();
  for (const auto& c : rep.cases) {
    json e{{"N", c.spec.dim}, {"sigma", c.spec.sigma}, {"b", c.spec.b}};
    if (!c.error.empty()) {
      e["error"] = c.error;
    } else {
      e["alpha"] = c.alpha;
      e["pohozaev"] = json{{"res9", c.pohozaev.res9}, {"res10", c.pohozaev.res10}, {"res16", c.pohozaev.res16}};
      e["sharp_constant_error"] = c.gn.jq_kopt_error;
      e["min_jk"] = c.gn.min_jk;
      e["barrier"] = json{{"fprime_rel", c.barrier.fprime_rel},
                          {"froot_rel", c.barrier.froot_rel},
                          {"ratio_rel", c.barrier.ratio_rel},
                          {"ratio_exact_rel", c.barrier.ratio_exact_rel},
                          {"fmax_rel", c.barrier.fmax_rel}};
    }
    cases.push_back(std::move(e));
  }
  json suites = json::array();
  for (const auto& r : rep.rows) {
    suites.push_back(json{{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"limit", r.limit}});
  }
  json j{{"seed", rep.seed},
         {"sizes", json{{"gn_trials", cfg.sizes.gn_trials},
                        {"lemma_pairs", cfg.sizes.lemma_pairs},
                        {"lemma_samples", cfg.sizes.lemma_samples},
                        {"scalar_samples", cfg.sizes.scalar_samples}}},
         {"suites", suites},
         {"cases", cases},
         {"pass", rep.all_pass()}};
  write_json(out_path(cfg, "verify.json"), j);

  log << std::left << std::setw(28) << "suite" << std::setw(6) << "pass" << std::setw(26) << "value"
      << "limit\n";
  for (const auto& r : rep.rows) {
    log << std::setw(28) << r.name << std::setw(6) << (r.pass ? "yes" : "NO") << std::setw(26)
        << format_number(r.value) << format_number(r.limit) << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

json sweep_case(const SweepCase& c, const RunConfig& cfg) {
  json e{{"N", c.dim}, {"sigma", c.sigma}, {"b", c.b}, {"gamma", c.gamma}};
  try {
    const ModelParams params(c.dim, c.sigma, c.b);
    const auto gs = solve_ground_state(params, cfg.gs_tol, cfg.solve);
    const auto t = classify(scaled_norms(gs, c.gamma), params, gs, cfg.finite_variance);
    const json tj = threshold_json(t);
    for (const auto& [k, v] : tj.items()) e[k] = v;
  } catch (const Error& err) {
    e["error"] = json{{"kind", err.kind()}, {"message", err.what()}};
  }
  return e;
}

int run_sweep(const RunConfig& cfg, std::ostream& log) {
  std::vector<json> out(cfg.cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.cases.size(); i = next++) out[i] = sweep_case(cfg.cases[i], cfg);
  };
  const unsigned n = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(cfg.cases.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json arr = json::array();
  std::size_t failed = 0;
  for (auto& e : out) {
    if (e.contains("error")) ++failed;
    arr.push_back(std::move(e));
  }
  write_json(out_path(cfg, "sweep.json"), arr);
  log << cfg.cases.size() << " cases, " << failed << " failed\n";
  return 0;
}

}  // namespace

unsigned sweep_threads() {
  if (const char* env = std::getenv("INLSLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string error_json(const std::string& kind, const std::string& message) {
  return json{{"error", json{{"kind", kind}, {"message", message}}}}.dump();
}

int run(const RunConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.output_dir);
  switch (cfg.mode) {
    case Mode::GroundState: return run_groundstate(cfg, log);
    case Mode::Classify: return run_classify(cfg, log);
    case Mode::Evolve: return run_evolve(cfg, log);
    case Mode::Verify: return run_verify_mode(cfg, log);
    case Mode::Sweep: return run_sweep(cfg, log);
  }
  return 1;
}

}  // namespace inls
