#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "inls/config.hpp"
#include "inls/io.hpp"
#include "inls/run.hpp"
#include "inls/verify.hpp"
#include "oracles.hpp"

using namespace inls;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("inlslab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> keys(const json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

// Runs the CLI with stdout captured to out.txt in `dir`; returns the exit status.
int cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = std::string(INLSLAB_EXE) + " " + args + " > " + (dir / "out.txt").string() +
                          " 2> " + (dir / "err.txt").string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("config: happy path") {
  const auto cfg = parse_config(
      "# evolve a scaled ground state\n"
      "mode = evolve\n"
      "N = 2\n"
      "sigma = 1.0   # cubic\n"
      "b = 0.5\n"
      "L = 12\n"
      "M = 64\n"
      "dt = 2e-3\n"
      "T = 0.5\n"
      "adapt = true\n"
      "initial_data = ground_state_scaled(0.9)\n"
      "output_dir = out\n");
  CHECK(cfg.mode == Mode::Evolve);
  REQUIRE(cfg.params.has_value());
  CHECK(cfg.params->dim() == 2);
  CHECK(cfg.params->b() == 0.5);
  REQUIRE(cfg.grid.has_value());
  CHECK(cfg.grid->points() == 64);
  CHECK(cfg.evolve_cfg.dt == 2e-3);
  CHECK(cfg.evolve_cfg.adapt);
  REQUIRE(cfg.initial_data.has_value());
  CHECK(cfg.initial_data->kind == InitialData::Kind::GroundStateScaled);
  CHECK(cfg.initial_data->gamma == 0.9);
  CHECK(cfg.output_dir == "out");

  const auto g = parse_config("N = 2\nsigma = 1\nb = 0.5\nL = 8\nM = 32\ninitial_data = gaussian(3, 1, 0.5)\n",
                              ".", Mode::Classify);
  CHECK(g.mode == Mode::Classify);
  CHECK(g.initial_data->kind == InitialData::Kind::Gaussian);
  CHECK(g.initial_data->amplitude == 3.0);
  CHECK(g.initial_data->center == 0.5);
}

TEST_CASE("config: errors") {
  const auto kind = [](const std::string& text, std::optional<Mode> m = std::nullopt) {
    return kind_of([&] { parse_config(text, ".", m); });
  };
  CHECK(kind("mode = groundstate\nN = 3\nsigma = 0.5\nb = 2.5\n") == "ValidationError");
  CHECK(kind("mode = groundstate\nN = 1\nsigmma = 1\nb = 0\n") == "ParseError");
  CHECK(kind("mode = groundstate\nN = 1\nN = 1\nsigma = 1\nb = 0\n") == "ParseError");
  CHECK(kind("mode = groundstate\nN 1\n") == "ParseError");
  CHECK(kind("mode = groundstate\nN =\n") == "ParseError");
  CHECK(kind("N = 1\nsigma = 1\nb = 0\n") == "ValidationError");
  CHECK(kind("mode = classify\nN = 1\nsigma = 1\nb = 0\n", Mode::GroundState) == "ValidationError");
  CHECK(kind("mode = groundstate\nN = 1\nsigma = abc\nb = 0\n") == "ValidationError");
  CHECK(kind("mode = evolve\nN = 1\nsigma = 3\nb = 0.5\n") == "ValidationError");
  CHECK(kind("mode = classify\nN = 1\nsigma = 3\nb = 0.5\ninitial_data = box(1)\n") == "ValidationError");
  CHECK(kind("mode = classify\nN = 1\nsigma = 3\nb = 0.5\ninitial_data = file(nope.csv)\n") ==
        "ValidationError");
  CHECK(kind("mode = sweep\n") == "ValidationError");
  CHECK(kind("mode = sweep\ncases = 2 1\n") == "ValidationError");
  CHECK(kind("mode = groundstate\nN = 1\nsigma = 1\nb = 0\nh = 0.01\n") == "ValidationError");
}

TEST_CASE("config: verify defaults") {
  const auto v = parse_config("", ".", Mode::Verify);
  CHECK(v.cases.size() == 27);
  CHECK(v.solve.alpha_lo == suite_solve_options().alpha_lo);
  const auto one = parse_config("N = 1\nsigma = 3\nb = 0.5\n", ".", Mode::Verify);
  REQUIRE(one.cases.size() == 1);
  CHECK(one.cases[0].sigma == 3.0);
  const auto sw = parse_config("cases = 1 3 0.5 0.9; 2 1 0.5\n", ".", Mode::Sweep);
  REQUIRE(sw.cases.size() == 2);
  CHECK(sw.cases[0].gamma == 0.9);
  CHECK(sw.cases[1].gamma == 1.0);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, std::sqrt(2.0), 6.02214076e23, 5e-324, 1.7976931348623157e308}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("profile CSV round-trip") {
  const auto dir = scratch("csv");
  const ModelParams p(1, 1.0, 0.0);
  RadialProfile prof{p, {}, {}, {}, 0.0, 0.0};
  for (int j = 0; j <= 500; ++j) {
    const double r = 1e-6 + 0.0137 * j;
    prof.r.push_back(r);
    prof.q.push_back(oracle::soliton(1.0, r));
    prof.dq.push_back(oracle::soliton_dx(1.0, r));
  }
  prof.alpha = prof.q.front();
  write_text((dir / "p.csv").string(), profile_csv(prof));
  const auto back = read_profile_csv((dir / "p.csv").string(), p);
  REQUIRE(back.r.size() == prof.r.size());
  for (std::size_t j = 0; j < prof.r.size(); ++j) {
    CHECK(back.r[j] == prof.r[j]);
    CHECK(back.q[j] == prof.q[j]);
  }
  CHECK(back.alpha == prof.alpha);

  std::ofstream(dir / "bad.csv") << "r,Q\n0.1,1\n0.05,0.9\n";
  CHECK(kind_of([&] { read_profile_csv((dir / "bad.csv").string(), p); }) == "ParseError");
  std::ofstream(dir / "hdr.csv") << "x,y\n0.1,1\n";
  CHECK(kind_of([&] { read_profile_csv((dir / "hdr.csv").string(), p); }) == "ParseError");
}

TEST_CASE("groundstate run writes the soliton") {
  const auto dir = scratch("gs");
  auto cfg = parse_config("N = 1\nsigma = 1\nb = 0\n", ".", Mode::GroundState);
  cfg.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run(cfg, log) == 0);
  const auto j = read_json(dir / "report.json");
  CHECK(keys(j) == std::vector<std::string>{"N", "sigma", "b", "s_sigma", "alpha", "residual", "l2_sq",
                                            "grad_sq", "pot", "energy", "kopt", "eq_res", "pohozaev_res",
                                            "energy_res", "bisection_steps", "profile_path"});
  CHECK(std::abs(j["alpha"].get<double>() - std::sqrt(2.0)) < 1e-6);
  CHECK(std::abs(j["l2_sq"].get<double>() - 4.0) < 1e-6);
  const auto prof = read_profile_csv((dir / "profile.csv").string(), ModelParams(1, 1.0, 0.0));
  double err = 0.0;
  for (std::size_t k = 0; k < prof.r.size() && prof.r[k] < 20.0; ++k) {
    err = std::max(err, std::abs(prof.q[k] - oracle::soliton(1.0, prof.r[k])));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("classify run") {
  const auto dir = scratch("cl");
  auto cfg = parse_config("N = 1\nsigma = 3\nb = 0.5\ninitial_data = ground_state_scaled(0.9)\n", ".",
                          Mode::Classify);
  cfg.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run(cfg, log) == 0);
  const auto j = read_json(dir / "report.json");
  CHECK(j["verdict"] == "Global");
  CHECK(keys(j) == std::vector<std::string>{"N", "sigma", "b", "s_sigma", "initial_data", "me_u", "me_q",
                                            "g_u", "g_q", "energy_u", "finite_variance", "verdict"});
  CHECK(j["me_u"].get<double>() < j["me_q"].get<double>());
}

TEST_CASE("evolve run") {
  const auto dir = scratch("ev");
  auto cfg = parse_config("N = 1\nsigma = 3\nb = 0.5\nL = 30\nM = 512\ndt = 1e-3\nT = 0.05\nrecord_every = 10\n"
                          "initial_data = ground_state_scaled(0.9)\n",
                          ".", Mode::Evolve);
  cfg.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run(cfg, log) == 0);
  const auto j = read_json(dir / "report.json");
  CHECK(j["outcome"] == "CompletedT");
  CHECK(j["records_path"] == "trajectory.csv");
  std::istringstream csv(slurp(dir / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,mass,energy,grad_sq,variance,variance_rate,virial_rhs");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("sweep run reports per-case errors") {
  const auto dir = scratch("sw");
  auto cfg = parse_config("cases = 1 3 0.5 0.9; 1 3 0.5 1.05; 2 0.5 0.5\n", ".", Mode::Sweep);
  cfg.output_dir = dir.string();
  std::ostringstream log;
  run(cfg, log);
  const auto j = read_json(dir / "sweep.json");
  const auto& arr = j.is_array() ? j : j["cases"];
  REQUIRE(arr.size() == 3);
  CHECK(arr[0]["verdict"] == "Global");
  CHECK(arr[1]["verdict"] == "BlowUp");
  CHECK(arr[2]["error"]["kind"] == "NotSupercritical");
}

TEST_CASE("CLI: errors are JSON with exit code 2") {
  const auto dir = scratch("err");
  std::ofstream(dir / "c.cfg") << "N = 3\nsigma = 0.5\nb = 2.5\n";
  CHECK(cli(dir, "groundstate --config " + (dir / "c.cfg").string()) == 2);
  const auto j = json::parse(slurp(dir / "out.txt"));
  CHECK(j["error"]["kind"] == "ValidationError");
  CHECK(j["error"]["message"].get<std::string>().find("b") != std::string::npos);
}

TEST_CASE("CLI: verify is deterministic for a fixed seed") {
  const auto dir = scratch("ver");
  const auto cfg = [&](const std::string& out) {
    const auto p = dir / (out + ".cfg");
    std::ofstream(p) << "N = 1\nsigma = 3\nb = 0.5\ngn_trials = 30\nlemma_pairs = 5\nlemma_samples = 50\n"
                        "scalar_samples = 100\noutput_dir = "
                     << (dir / out).string() << "\n";
    return p.string();
  };
  CHECK(cli(dir, "verify --seed 42 --config " + cfg("a")) == 0);
  CHECK(cli(dir, "verify --seed 42 --config " + cfg("b")) == 0);
  CHECK(cli(dir, "verify --seed 43 --config " + cfg("c")) == 0);
  const auto a = slurp(dir / "a" / "verify.json");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b" / "verify.json"));
  CHECK(a != slurp(dir / "c" / "verify.json"));
  const auto j = json::parse(a);
  CHECK(keys(j) == std::vector<std::string>{"seed", "sizes", "suites", "cases", "pass"});
  CHECK(j["seed"] == 42);
  CHECK(j["pass"] == true);
}
