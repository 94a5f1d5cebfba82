// Property suites behind `verify`: ground-state certificates, the sharp
// Gagliardo-Nirenberg bound, the trapping barrier and the scalar lemmas.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "inls/config.hpp"
#include "inls/core.hpp"
#include "inls/groundstate.hpp"

namespace inls {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// The 27 supercritical cases N ∈ {1,2,3}, b ∈ {0.25, 0.5, 0.9 min(2,N)},
/// σ = (2-b)/(N-2s) for s ∈ {1/4, 1/2, 3/4}·min(1, N/2).
std::vector<SweepCase> default_cases();

/// Solver options for the suites: the α scan starts at 1e-12 because the
/// ground state for b close to 2 in two dimensions has a very small peak.
SolveOptions suite_solve_options();

struct PohozaevCheck {
  double res9 = 0.0;
  double res10 = 0.0;
  double res16 = 0.0;
  double worst() const;
};

PohozaevCheck pohozaev_suite(const GroundStateReport& gs);

struct GnSearch {
  double jq_kopt_error = 0.0;  // |J(Q)·K_opt - 1|
  double min_jk = 0.0;         // min over trials of J(u)·K_opt
  int trials = 0;
};

/// Random radial trial fields (Gaussian mixtures, sech powers and
/// perturbations of Q) on a thinned copy of the profile grid.
GnSearch gn_random_search(const GroundStateReport& gs, int trials, std::mt19937_64& rng);

struct BarrierCheck {
  double fprime_rel = 0.0;      // |f'(x_max)| / x_max
  double froot_rel = 0.0;       // |f(x_root)| / f(x_max)
  double ratio_rel = 0.0;       // |x_root/x_max / c - 1|
  double ratio_exact_rel = 0.0; // |x_root/x_crit / c - 1|
  double fmax_rel = 0.0;        // |f(x_max) - E[Q]M[Q]^{(1-s)/s}| / that value
};

BarrierCheck barrier_suite(const ModelParams& params, const GroundStateReport& gs);

struct LemmaSuite {
  double min_scaled_gap = 0.0;  // min of gap / max(1, |f(x_max)|)
  int pairs = 0;
  int samples = 0;
};

LemmaSuite lemma51_suite(int pairs, int samples, std::mt19937_64& rng);

struct ScalarSuite {
  double min_first = 0.0;
  double min_second = 0.0;
  int samples = 0;
};

/// Log-spaced x ∈ [1e-6, 1e6].
ScalarSuite scalar_suite(int samples);

struct SuiteRow {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

struct CaseResult {
  SweepCase spec;
  std::string error;  // non-empty when the ground state could not be certified
  double alpha = 0.0;
  double solve_seconds = 0.0;  // wall time of the ground-state solve; not reported
  PohozaevCheck pohozaev;
  GnSearch gn;
  BarrierCheck barrier;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;
  LemmaSuite lemma;
  ScalarSuite scalar;
  std::vector<SuiteRow> rows;
  bool all_pass() const;
};

/// Runs every suite on `cases` with the given sizes and seed.
VerifyReport run_verify(const std::vector<SweepCase>& cases, const VerifySizes& sizes,
                        std::uint64_t seed, double gs_tol, const SolveOptions& solve);

}  // namespace inls
