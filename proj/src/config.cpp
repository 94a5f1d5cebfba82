#include "inls/config.hpp"
#include "inls/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace inls {

namespace {

Error parse_error(int line, const std::string& what) {
  return Error("ParseError", "line " + std::to_string(line) + ": " + what);
}

Error validation_error(const std::string& key, const std::string& reason) {
  return Error("ValidationError", key + ": " + reason);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw validation_error(key, "expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

long long to_int(const std::string& key, std::string_view v) {
  v = trim(v);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw validation_error(key, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw validation_error(key, "expected true or false");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// name(arg, arg, ...) -> (name, args)
std::pair<std::string_view, std::vector<std::string_view>> call_form(const std::string& key,
                                                                      std::string_view v) {
  v = trim(v);
  const auto open = v.find('(');
  if (open == std::string_view::npos || v.back() != ')') {
    throw validation_error(key, "expected name(arguments)");
  }
  const auto name = trim(v.substr(0, open));
  const auto inner = v.substr(open + 1, v.size() - open - 2);
  return {name, split(inner, ',')};
}

InitialData parse_initial_data(std::string_view v, const std::string& base_dir) {
  const std::string key = "initial_data";
  const auto [name, args] = call_form(key, v);
  InitialData d;
  if (name == "ground_state_scaled") {
    if (args.size() != 1) throw validation_error(key, "ground_state_scaled takes one argument");
    d.kind = InitialData::Kind::GroundStateScaled;
    d.gamma = to_double(key, args[0]);
    if (!(d.gamma > 0.0)) throw validation_error(key, "gamma must be > 0");
  } else if (name == "gaussian") {
    if (args.size() != 3) throw validation_error(key, "gaussian takes (amplitude, width, center)");
    d.kind = InitialData::Kind::Gaussian;
    d.amplitude = to_double(key, args[0]);
    d.width = to_double(key, args[1]);
    d.center = to_double(key, args[2]);
    if (d.amplitude == 0.0) throw validation_error(key, "amplitude must be nonzero");
    if (!(d.width > 0.0)) throw validation_error(key, "width must be > 0");
  } else if (name == "file") {
    if (args.size() != 1 || args[0].empty()) throw validation_error(key, "file takes one path");
    d.kind = InitialData::Kind::File;
    std::filesystem::path p(args[0]);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    if (!std::filesystem::is_regular_file(p)) {
      throw validation_error(key, "file '" + p.string() + "' does not exist");
    }
    d.path = p.string();
  } else {
    throw validation_error(key, "unknown initial data '" + std::string(name) + "'");
  }
  return d;
}

void check_params(int dim, double sigma, double b, const std::string& prefix) {
  if (dim < 1) throw validation_error(prefix + "N", "must be >= 1");
  if (!(b >= 0.0 && b < std::min(2.0, static_cast<double>(dim)))) {
    throw validation_error(prefix + "b", "violates 0 <= b < min(2, N)");
  }
  if (!(sigma > 0.0)) throw validation_error(prefix + "sigma", "must be > 0");
  if (dim >= 3 && sigma >= (2.0 - b) / (dim - 2.0)) {
    throw validation_error(prefix + "sigma", "must be below (2-b)/(N-2)");
  }
}

std::vector<SweepCase> parse_cases(std::string_view v) {
  std::vector<SweepCase> out;
  for (auto item : split(v, ';')) {
    if (item.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t i = 0;
    while (i < item.size()) {
      const auto j = item.find_first_of(" \t", i);
      const auto tok = item.substr(i, j == std::string_view::npos ? j : j - i);
      if (!tok.empty()) f.push_back(tok);
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
    if (f.size() != 3 && f.size() != 4) {
      throw validation_error("cases", "each case is 'N sigma b [gamma]'");
    }
    SweepCase c;
    c.dim = static_cast<int>(to_int("cases", f[0]));
    c.sigma = to_double("cases", f[1]);
    c.b = to_double("cases", f[2]);
    if (f.size() == 4) c.gamma = to_double("cases", f[3]);
    check_params(c.dim, c.sigma, c.b, "cases.");
    if (!(c.gamma > 0.0)) throw validation_error("cases", "gamma must be > 0");
    out.push_back(c);
  }
  if (out.empty()) throw validation_error("cases", "no cases given");
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "mode",          "N",              "sigma",          "b",
      "L",             "M",              "dt",             "T",
      "record_every",  "blowup_grad_factor", "blowup_dt_floor", "adapt",
      "boundary_tol",  "alias_tol",      "initial_data",   "output_dir",
      "seed",          "finite_variance", "gs_tol",        "r_max",
      "h",             "alpha_lo",       "alpha_hi",       "cases",
      "gn_trials",     "lemma_pairs",    "lemma_samples",  "scalar_samples"};
  return keys;
}

int positive_int(const std::string& key, std::string_view v) {
  const long long n = to_int(key, v);
  if (n < 1 || n > 100000000) throw validation_error(key, "must be a positive integer");
  return static_cast<int>(n);
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::GroundState: return "groundstate";
    case Mode::Classify: return "classify";
    case Mode::Evolve: return "evolve";
    case Mode::Verify: return "verify";
    case Mode::Sweep: return "sweep";
  }
  return "?";
}

RunConfig parse_config(std::string_view text, const std::string& base_dir,
                       std::optional<Mode> forced_mode) {
  std::map<std::string, std::string> kv;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw parse_error(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw parse_error(line_no, "unknown key '" + key + "'");
    }
    if (value.empty()) throw parse_error(line_no, "missing value for '" + key + "'");
    if (!kv.emplace(key, value).second) throw parse_error(line_no, "duplicate key '" + key + "'");
  }

  RunConfig cfg;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };

  const auto* mode = get("mode");
  if (mode == nullptr) {
    if (!forced_mode) throw validation_error("mode", "required");
    cfg.mode = *forced_mode;
  } else {
    if (*mode == "groundstate") cfg.mode = Mode::GroundState;
    else if (*mode == "classify") cfg.mode = Mode::Classify;
    else if (*mode == "evolve") cfg.mode = Mode::Evolve;
    else if (*mode == "verify") cfg.mode = Mode::Verify;
    else if (*mode == "sweep") cfg.mode = Mode::Sweep;
    else throw validation_error("mode", "unknown mode '" + *mode + "'");
    if (forced_mode && *forced_mode != cfg.mode) {
      throw validation_error("mode", "config says '" + *mode + "' but subcommand is '" +
                                         to_string(*forced_mode) + "'");
    }
  }

  const auto* n = get("N");
  const auto* sigma = get("sigma");
  const auto* b = get("b");
  if (n != nullptr || sigma != nullptr || b != nullptr) {
    if (n == nullptr) throw validation_error("N", "required with sigma and b");
    if (sigma == nullptr) throw validation_error("sigma", "required with N and b");
    if (b == nullptr) throw validation_error("b", "required with N and sigma");
    const long long dim = to_int("N", *n);
    if (dim < 1 || dim > 3) throw validation_error("N", "must be 1, 2 or 3");
    const double sv = to_double("sigma", *sigma);
    const double bv = to_double("b", *b);
    check_params(static_cast<int>(dim), sv, bv, "");
    cfg.params.emplace(static_cast<int>(dim), sv, bv);
  }

  const auto* l = get("L");
  const auto* m = get("M");
  if ((l == nullptr) != (m == nullptr)) {
    throw validation_error(l == nullptr ? "L" : "M", "L and M must be given together");
  }
  if (l != nullptr) {
    if (!cfg.params) throw validation_error("L", "grid needs N");
    const double lv = to_double("L", *l);
    const long long mv = to_int("M", *m);
    if (!(lv > 0.0)) throw validation_error("L", "must be > 0");
    if (mv < 8 || mv % 2 != 0) throw validation_error("M", "must be even and >= 8");
    cfg.grid.emplace(cfg.params->dim(), lv, static_cast<std::size_t>(mv));
  }

  auto& ec = cfg.evolve_cfg;
  if (const auto* v = get("dt")) ec.dt = to_double("dt", *v);
  if (const auto* v = get("T")) ec.T = to_double("T", *v);
  if (const auto* v = get("record_every")) ec.record_every = positive_int("record_every", *v);
  if (const auto* v = get("blowup_grad_factor")) ec.blowup_grad_factor = to_double("blowup_grad_factor", *v);
  if (const auto* v = get("blowup_dt_floor")) ec.blowup_dt_floor = to_double("blowup_dt_floor", *v);
  if (const auto* v = get("adapt")) ec.adapt = to_bool("adapt", *v);
  if (const auto* v = get("boundary_tol")) ec.boundary_tol = to_double("boundary_tol", *v);
  if (const auto* v = get("alias_tol")) ec.alias_tol = to_double("alias_tol", *v);
  if (!(ec.dt > 0.0)) throw validation_error("dt", "must be > 0");
  if (!(ec.T > 0.0)) throw validation_error("T", "must be > 0");
  if (!(ec.blowup_grad_factor > 1.0)) throw validation_error("blowup_grad_factor", "must be > 1");
  if (!(ec.blowup_dt_floor > 0.0)) throw validation_error("blowup_dt_floor", "must be > 0");
  if (!(ec.boundary_tol > 0.0)) throw validation_error("boundary_tol", "must be > 0");
  if (!(ec.alias_tol > 0.0)) throw validation_error("alias_tol", "must be > 0");

  if (const auto* v = get("initial_data")) cfg.initial_data = parse_initial_data(*v, base_dir);
  if (const auto* v = get("output_dir")) cfg.output_dir = *v;
  if (const auto* v = get("seed")) {
    const long long s = to_int("seed", *v);
    if (s < 0) throw validation_error("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto* v = get("finite_variance")) cfg.finite_variance = to_bool("finite_variance", *v);
  if (const auto* v = get("gs_tol")) {
    cfg.gs_tol = to_double("gs_tol", *v);
    if (!(cfg.gs_tol > 0.0)) throw validation_error("gs_tol", "must be > 0");
  }
  auto& so = cfg.solve;
  if (cfg.mode == Mode::Verify || cfg.mode == Mode::Sweep) so = suite_solve_options();
  if (const auto* v = get("r_max")) {
    so.shoot.r_max = to_double("r_max", *v);
    if (so.shoot.r_max < 20.0) throw validation_error("r_max", "must be >= 20");
  }
  if (const auto* v = get("h")) {
    so.shoot.h = to_double("h", *v);
    if (!(so.shoot.h > 0.0 && so.shoot.h <= 1e-3)) throw validation_error("h", "must be in (0, 1e-3]");
  }
  if (const auto* v = get("alpha_lo")) so.alpha_lo = to_double("alpha_lo", *v);
  if (const auto* v = get("alpha_hi")) so.alpha_hi = to_double("alpha_hi", *v);
  if (!(so.alpha_lo > 0.0 && so.alpha_lo < so.alpha_hi)) {
    throw validation_error("alpha_lo", "need 0 < alpha_lo < alpha_hi");
  }
  if (const auto* v = get("cases")) cfg.cases = parse_cases(*v);
  auto& sz = cfg.sizes;
  if (const auto* v = get("gn_trials")) sz.gn_trials = positive_int("gn_trials", *v);
  if (const auto* v = get("lemma_pairs")) sz.lemma_pairs = positive_int("lemma_pairs", *v);
  if (const auto* v = get("lemma_samples")) sz.lemma_samples = positive_int("lemma_samples", *v);
  if (const auto* v = get("scalar_samples")) sz.scalar_samples = positive_int("scalar_samples", *v);

  // Per-mode requirements.
  switch (cfg.mode) {
    case Mode::GroundState:
      if (!cfg.params) throw validation_error("N", "groundstate needs N, sigma and b");
      break;
    case Mode::Classify:
    case Mode::Evolve:
      if (!cfg.params) throw validation_error("N", std::string(to_string(cfg.mode)) + " needs N, sigma and b");
      if (!cfg.initial_data) cfg.initial_data = InitialData{};
      if ((cfg.mode == Mode::Evolve || cfg.initial_data->kind == InitialData::Kind::Gaussian) &&
          !cfg.grid) {
        throw validation_error("L", "a grid (L, M) is required");
      }
      break;
    case Mode::Verify:
      if (cfg.cases.empty()) {
        cfg.cases = cfg.params ? std::vector<SweepCase>{{cfg.params->dim(), cfg.params->sigma(), cfg.params->b(), 1.0}}
                               : default_cases();
      }
      break;
    case Mode::Sweep:
      if (cfg.cases.empty()) throw validation_error("cases", "sweep needs cases");
      break;
  }
  return cfg;
}

RunConfig load_config(const std::string& path, std::optional<Mode> forced_mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), base.empty() ? "." : base.string(), forced_mode);
}

}  // namespace inls
