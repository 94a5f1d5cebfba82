// Flat `key = value` run configuration for the command-line front end.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inls/core.hpp"
#include "inls/evolution.hpp"
#include "inls/groundstate.hpp"

namespace inls {

enum class Mode { GroundState, Classify, Evolve, Verify, Sweep };

const char* to_string(Mode m);

struct InitialData {
  enum class Kind { GroundStateScaled, Gaussian, File };
  Kind kind = Kind::GroundStateScaled;
  double gamma = 1.0;      // ground_state_scaled(γ)
  double amplitude = 0.0;  // gaussian(A, w, c): A exp(-|x - c e₁|²/(2w²))
  double width = 1.0;
  double center = 0.0;
  std::string path;        // file(path): r,Q profile as written by groundstate
};

/// One (N, σ, b, γ) entry of `cases`; γ defaults to 1.
struct SweepCase {
  int dim = 1;
  double sigma = 1.0;
  double b = 0.0;
  double gamma = 1.0;
};

struct VerifySizes {
  int gn_trials = 1000;
  int lemma_pairs = 200;
  int lemma_samples = 1000;
  int scalar_samples = 10000;
};

struct RunConfig {
  Mode mode = Mode::GroundState;
  std::optional<ModelParams> params;
  std::optional<GridSpec> grid;
  EvolveConfig evolve_cfg;
  std::optional<InitialData> initial_data;  // classify/evolve default: ground_state_scaled(1)
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  bool finite_variance = true;
  double gs_tol = 1e-5;
  SolveOptions solve;
  std::vector<SweepCase> cases;
  VerifySizes sizes;
};

/// Parse and validate. Unknown keys and malformed lines raise ParseError;
/// out-of-range values raise ValidationError. Relative file paths resolve
/// against `base_dir`. With `forced_mode` (the CLI subcommand) the `mode`
/// key becomes optional and must agree when present.
RunConfig parse_config(std::string_view text, const std::string& base_dir = ".",
                       std::optional<Mode> forced_mode = std::nullopt);

RunConfig load_config(const std::string& path, std::optional<Mode> forced_mode = std::nullopt);

}  // namespace inls
