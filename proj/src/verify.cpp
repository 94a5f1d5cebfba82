#include "inls/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "inls/dichotomy.hpp"
#include "inls/quadrature.hpp"

namespace inls {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<SweepCase> default_cases() {
  std::vector<SweepCase> out;
  for (int n = 1; n <= 3; ++n) {
    const double reach = std::min(1.0, 0.5 * n);
    for (double b : {0.25, 0.5, 0.9 * std::min(2, n)}) {
      for (double frac : {0.25, 0.5, 0.75}) {
        const double s = frac * reach;
        out.push_back({n, (2.0 - b) / (n - 2.0 * s), b, 1.0});
      }
    }
  }
  return out;
}

SolveOptions suite_solve_options() {
  SolveOptions o;
  o.alpha_lo = 1e-12;
  o.scan_points = 57;
  return o;
}

double PohozaevCheck::worst() const { return std::max({res9, res10, res16}); }

PohozaevCheck pohozaev_suite(const GroundStateReport& gs) {
  const auto r = pohozaev_check(gs.profile);
  return {r.res9, r.res10, r.res16};
}

namespace {

struct Trial {
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> d2u;
};

Norms trial_norms(const std::vector<double>& r, const Trial& t, const ModelParams& params) {
  const std::size_t n = r.size();
  const double e = 2.0 * params.sigma() + 2.0;
  std::vector<double> g(n), dg(n);
  const double area = sphere_area(params.dim());
  const double power = params.dim() - 1.0;
  Norms out;
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = t.u[j] * t.u[j];
    dg[j] = 2.0 * t.u[j] * t.du[j];
  }
  out.mass = area * radial_integral(r, g, dg, power);
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = t.du[j] * t.du[j];
    dg[j] = 2.0 * t.du[j] * t.d2u[j];
  }
  out.grad_sq = area * radial_integral(r, g, dg, power);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(t.u[j]);
    g[j] = std::pow(a, e);
    dg[j] = e * std::pow(a, e - 2.0) * t.u[j] * t.du[j];
  }
  out.pot = area * radial_integral(r, g, dg, power - params.b());
  return out;
}

double draw(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

GnSearch gn_random_search(const GroundStateReport& gs, int trials, std::mt19937_64& rng) {
  const auto& prof = gs.profile;
  const auto& params = prof.params;
  if (prof.dq.size() != prof.r.size()) {
    throw Error("InvalidArgument", "ground-state profile must carry Q'");
  }
  GnSearch out;
  out.trials = trials;
  out.jq_kopt_error = std::abs(weinstein(Norms{gs.l2_sq, gs.grad_sq, gs.pot}, params) * gs.kopt - 1.0);

  // Every tenth sample keeps the graded spacing near the origin.
  std::vector<double> r, q, dq, d2q;
  for (std::size_t j = 0; j < prof.r.size(); j += 10) {
    const double rj = prof.r[j];
    r.push_back(rj);
    q.push_back(prof.q[j]);
    dq.push_back(prof.dq[j]);
    d2q.push_back(-(params.dim() - 1.0) / rj * prof.dq[j] + prof.q[j] -
                  std::pow(rj, -params.b()) * std::pow(std::abs(prof.q[j]), 2.0 * params.sigma()) *
                      prof.q[j]);
  }
  const std::size_t n = r.size();

  double best = std::numeric_limits<double>::infinity();
  Trial t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < trials; ++i) {
    std::fill(t.u.begin(), t.u.end(), 0.0);
    std::fill(t.du.begin(), t.du.end(), 0.0);
    std::fill(t.d2u.begin(), t.d2u.end(), 0.0);
    switch (i % 3) {
      case 0: {  // Gaussian mixture
        const int terms = 1 + static_cast<int>(3.0 * uniform01(rng));
        for (int k = 0; k < terms; ++k) {
          const double c = draw(rng, 0.2, 2.0) * (uniform01(rng) < 0.2 ? -1.0 : 1.0);
          const double w = 0.3 * std::pow(10.0, uniform01(rng));
          const double w2 = w * w;
          for (std::size_t j = 0; j < n; ++j) {
            const double e = c * std::exp(-0.5 * r[j] * r[j] / w2);
            t.u[j] += e;
            t.du[j] += -r[j] / w2 * e;
            t.d2u[j] += (r[j] * r[j] / (w2 * w2) - 1.0 / w2) * e;
          }
        }
        break;
      }
      case 1: {  // sech(r/w)^k
        const double k = draw(rng, 0.5, 3.0);
        const double w = 0.3 * std::pow(10.0, uniform01(rng));
        for (std::size_t j = 0; j < n; ++j) {
          const double sk = std::pow(1.0 / std::cosh(r[j] / w), k);
          const double th = std::tanh(r[j] / w);
          t.u[j] = sk;
          t.du[j] = -k / w * sk * th;
          t.d2u[j] = k / (w * w) * sk * ((k + 1.0) * th * th - 1.0);
        }
        break;
      }
      default: {  // Q(1 + εφ), φ = cos(κr) exp(-r²/(2ℓ²))
        const double eps = draw(rng, 0.05, 0.3) * (uniform01(rng) < 0.5 ? -1.0 : 1.0);
        const double kappa = draw(rng, 0.0, 3.0);
        const double ell = draw(rng, 0.5, 3.0);
        const double l2 = ell * ell;
        for (std::size_t j = 0; j < n; ++j) {
          const double e = std::exp(-0.5 * r[j] * r[j] / l2);
          const double c = std::cos(kappa * r[j]);
          const double sn = std::sin(kappa * r[j]);
          const double phi = c * e;
          const double dphi = (-kappa * sn - r[j] / l2 * c) * e;
          const double d2phi =
              (-kappa * kappa * c + 2.0 * kappa * sn * r[j] / l2 + c * (r[j] * r[j] / (l2 * l2) - 1.0 / l2)) * e;
          t.u[j] = q[j] * (1.0 + eps * phi);
          t.du[j] = dq[j] * (1.0 + eps * phi) + eps * q[j] * dphi;
          t.d2u[j] = d2q[j] * (1.0 + eps * phi) + 2.0 * eps * dq[j] * dphi + eps * q[j] * d2phi;
        }
        break;
      }
    }
    const Norms nm = trial_norms(r, t, params);
    if (!(nm.pot > 0.0)) continue;
    best = std::min(best, weinstein(nm, params) * gs.kopt);
  }
  out.min_jk = best;
  return out;
}

BarrierCheck barrier_suite(const ModelParams& params, const GroundStateReport& gs) {
  const auto s5 = section5_barrier(params, gs);
  const double c = c_sigma_b_n(params);
  BarrierCheck out;
  out.fprime_rel = std::abs(section5_fprime(params, s5.kopt, s5.x_max)) / s5.x_max;
  const double fmax = section5_f(params, s5.kopt, s5.x_max);
  out.froot_rel = std::abs(section5_f(params, s5.kopt, s5.x_root)) / std::abs(fmax);
  out.ratio_rel = std::abs(s5.x_root / s5.x_max / c - 1.0);
  out.ratio_exact_rel = std::abs(s5.x_root / s5.x_crit / c - 1.0);
  out.fmax_rel = std::abs(fmax - s5.f_at_x_max) / std::abs(s5.f_at_x_max);
  return out;
}

LemmaSuite lemma51_suite(int pairs, int samples, std::mt19937_64& rng) {
  LemmaSuite out;
  out.pairs = pairs;
  out.samples = samples;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const double a = std::pow(10.0, draw(rng, -3.0, 3.0));
    const double alpha = 2.0 + 8.0 * (1.0 - uniform01(rng));  // (2, 10]
    const auto iv = lemma51_interval(a, alpha);
    const double top = 0.5 * iv.x_max * iv.x_max - a * std::pow(iv.x_max, alpha);
    const double scale = std::max(1.0, std::abs(top));
    for (int k = 0; k < samples; ++k) {
      const double x = iv.x_max + (iv.x_root - iv.x_max) * uniform01(rng);
      worst = std::min(worst, lemma51_gap(a, alpha, x) / scale);
    }
  }
  out.min_scaled_gap = worst;
  return out;
}

ScalarSuite scalar_suite(int samples) {
  ScalarSuite out;
  out.samples = samples;
  out.min_first = std::numeric_limits<double>::infinity();
  out.min_second = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = samples > 1 ? static_cast<double>(i) / (samples - 1) : 0.0;
    const double x = std::pow(10.0, -6.0 + 12.0 * t);
    const auto v = lemma51_scalar_inequalities(x);
    out.min_first = std::min(out.min_first, v.first);
    out.min_second = std::min(out.min_second, v.second);
  }
  return out;
}

bool VerifyReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

VerifyReport run_verify(const std::vector<SweepCase>& cases, const VerifySizes& sizes,
                        std::uint64_t seed, double gs_tol, const SolveOptions& solve) {
  VerifyReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  double worst_res = 0.0, worst_jq = 0.0, min_jk = std::numeric_limits<double>::infinity();
  BarrierCheck worst_bar;
  bool solved_all = true;
  for (const auto& c : cases) {
    CaseResult cr;
    cr.spec = c;
    try {
      const ModelParams params(c.dim, c.sigma, c.b);
      const auto t0 = std::chrono::steady_clock::now();
      const auto gs = solve_ground_state(params, gs_tol, solve);
      cr.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      cr.alpha = gs.profile.alpha;
      cr.pohozaev = pohozaev_suite(gs);
      cr.gn = gn_random_search(gs, sizes.gn_trials, rng);
      cr.barrier = barrier_suite(params, gs);
      worst_res = std::max(worst_res, cr.pohozaev.worst());
      worst_jq = std::max(worst_jq, cr.gn.jq_kopt_error);
      min_jk = std::min(min_jk, cr.gn.min_jk);
      worst_bar.fprime_rel = std::max(worst_bar.fprime_rel, cr.barrier.fprime_rel);
      worst_bar.froot_rel = std::max(worst_bar.froot_rel, cr.barrier.froot_rel);
      worst_bar.ratio_rel = std::max(worst_bar.ratio_rel, cr.barrier.ratio_rel);
      worst_bar.ratio_exact_rel = std::max(worst_bar.ratio_exact_rel, cr.barrier.ratio_exact_rel);
      worst_bar.fmax_rel = std::max(worst_bar.fmax_rel, cr.barrier.fmax_rel);
    } catch (const Error& e) {
      cr.error = e.kind() + ": " + e.what();
      solved_all = false;
    }
    rep.cases.push_back(cr);
  }

  rep.lemma = lemma51_suite(sizes.lemma_pairs, sizes.lemma_samples, rng);
  rep.scalar = scalar_suite(sizes.scalar_samples);

  auto at_most = [&](std::string name, double v, double limit, bool ok = true) {
    rep.rows.push_back({std::move(name), ok && v <= limit, v, limit});
  };
  auto at_least = [&](std::string name, double v, double limit, bool ok = true) {
    rep.rows.push_back({std::move(name), ok && v >= limit, v, limit});
  };
  at_most("pohozaev_residual", worst_res, gs_tol, solved_all);
  at_most("sharp_constant", worst_jq, 1e-4, solved_all);
  at_least("gn_random_search", min_jk - 1.0, -1e-6, solved_all);
  at_most("barrier_critical_point", worst_bar.fprime_rel, 1e-6, solved_all);
  at_most("barrier_root", worst_bar.froot_rel, 1e-8, solved_all);
  at_most("barrier_root_ratio", worst_bar.ratio_rel, 1e-6, solved_all);
  at_most("barrier_root_ratio_exact", worst_bar.ratio_exact_rel, 1e-12, solved_all);
  at_most("barrier_max_value", worst_bar.fmax_rel, 1e-4, solved_all);
  at_least("lemma51_gap", rep.lemma.min_scaled_gap, -1e-12);
  at_least("scalar_inequality_first", rep.scalar.min_first, -1e-12);
  rep.rows.push_back({"scalar_inequality_second", rep.scalar.min_second > 0.0, rep.scalar.min_second, 0.0});
  return rep;
}

}  // namespace inls
