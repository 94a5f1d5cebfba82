#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "inls/dichotomy.hpp"
#include "oracles.hpp"

using namespace inls;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

const GroundStateReport& gs_1d() {
  static const GroundStateReport gs = solve_ground_state(ModelParams(1, 3.0, 0.5));
  return gs;
}

const GroundStateReport& gs_2d() {
  static const GroundStateReport gs = solve_ground_state(ModelParams(2, 1.0, 0.5));
  return gs;
}

// Exact norms of γQ.
Norms scaled(const GroundStateReport& gs, double gamma) {
  const double k = 2.0 * gs.profile.params.sigma() + 2.0;
  return {gamma * gamma * gs.l2_sq, gamma * gamma * gs.grad_sq, std::pow(gamma, k) * gs.pot};
}

}  // namespace

TEST_CASE("scaled ground states: global below, threshold at, blow-up above") {
  const auto& gs = gs_1d();
  const ModelParams& p = gs.profile.params;

  const auto below = classify(scaled(gs, 0.9), p, gs, true);
  CHECK(below.verdict == Verdict::Global);
  CHECK(below.me_u < below.me_q);
  CHECK(below.g_u < below.g_q);
  // E[γQ] evaluated by hand from the certified norms.
  const double e09 = 0.5 * 0.81 * gs.grad_sq - std::pow(0.9, 8) / 8.0 * gs.pot;
  CHECK(rel(below.energy_u, e09) < 1e-14);

  CHECK(classify(scaled(gs, 1.0), p, gs, true).verdict == Verdict::Threshold);

  const auto above = classify(scaled(gs, 1.05), p, gs, true);
  CHECK(above.energy_u > 0.0);
  CHECK(above.me_u < above.me_q);
  CHECK(above.g_u > above.g_q);
  CHECK(above.verdict == Verdict::BlowUp);
  CHECK(classify(scaled(gs, 1.05), p, gs, false).verdict == Verdict::OutsideTheory);
}

TEST_CASE("gamma scan") {
  const auto& gs = gs_1d();
  const ModelParams& p = gs.profile.params;
  double prev = 0.0;
  for (double gamma = 0.05; gamma < 1.6; gamma += 0.05) {
    const auto r = classify(scaled(gs, gamma), p, gs, true);
    CHECK(r.g_u > prev);
    prev = r.g_u;
    if (std::abs(gamma - 1.0) < 1e-9) continue;
    // me_u has its maximum me_q at γ = 1 along the scaling family.
    CHECK(r.me_u < r.me_q);
    CHECK(r.verdict == (gamma < 1.0 ? Verdict::Global : Verdict::BlowUp));
  }
}

TEST_CASE("classification depends on |u| only") {
  const auto& gs = gs_2d();
  const ModelParams& p = gs.profile.params;
  const GridSpec g(2, 24.0, 192);
  auto u = radialize(gs.profile, g, 0.9);
  const auto a = classify(u, p, gs, true);
  for (auto& z : u.values) z *= std::polar(1.0, 1.234);
  const auto b = classify(u, p, gs, true);
  CHECK(a.verdict == Verdict::Global);
  CHECK(b.verdict == a.verdict);
  CHECK(rel(b.me_u, a.me_u) < 1e-12);
  CHECK(rel(b.g_u, a.g_u) < 1e-12);
}

TEST_CASE("negative-energy Gaussian blows up") {
  const auto& gs = gs_2d();
  const ModelParams& p = gs.profile.params;
  const GridSpec g(2, 10.0, 128);
  const auto u = oracle::sample_radial(g, [](double r) { return 3.0 * std::exp(-0.5 * r * r); });
  const auto r = classify(u, p, gs, true);
  CHECK(r.energy_u < 0.0);
  CHECK(r.verdict == Verdict::BlowUp);
  CHECK(classify(u, p, gs, false).verdict == Verdict::OutsideTheory);
}

TEST_CASE("mass-critical rule") {
  const ModelParams p(1, 2.0, 0.0);
  const auto gs = solve_ground_state(p);
  CHECK(classify(scaled(gs, 0.9), p, gs, true).verdict == Verdict::CriticalGlobal);
  CHECK(classify(scaled(gs, 1.0), p, gs, true).verdict == Verdict::Threshold);
  CHECK(classify(scaled(gs, 1.1), p, gs, true).verdict == Verdict::OutsideTheory);
}

TEST_CASE("subcritical powers are rejected") {
  const ModelParams p(2, 0.5, 0.5);
  const auto& gs = gs_2d();
  CHECK(kind_of([&] { classify(Norms{1.0, 1.0, 1.0}, p, gs, true); }) == "NotSupercritical");
  CHECK(kind_of([&] { c_sigma_b_n(p); }) == "NotSupercritical");
}

TEST_CASE("energy barrier at the ground state") {
  for (const auto* gs : {&gs_1d(), &gs_2d()}) {
    const ModelParams& p = gs->profile.params;
    const double eq = ground_state_energy(p, gs->l2_sq);
    const auto c = barrier(p, gs->l2_sq, eq, gs->kopt);
    CHECK(rel(c.x0, gs->grad_sq) < 1e-4);
    CHECK(rel(2.0 * eq, c.fx0) < 1e-4);
    CHECK(rel(c.fx0, (p.gn_exponent() - 2.0) / p.gn_exponent() * c.x0) < 1e-14);
    CHECK(c.fx0 > 0.0);

    const auto n = scaled(*gs, 0.9);
    const auto d = barrier(p, n.mass, energy(n, p), gs->kopt);
    CHECK(d.below);
    CHECK(n.grad_sq < d.x0);
  }
  CHECK(kind_of([&] { barrier(gs_1d().profile.params, 1.0, 1.0, 0.0); }) == "DegenerateBarrier");
}

TEST_CASE("barrier condition agrees with the mass-energy condition at mass M[Q]") {
  const auto& gs = gs_2d();
  const ModelParams& p = gs.profile.params;
  const double eq = ground_state_energy(p, gs.l2_sq);
  for (double f : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
    const double e = f * eq;
    const auto c = barrier(p, gs.l2_sq, e, gs.kopt);
    const Norms n{gs.l2_sq, gs.grad_sq, (p.sigma() + 1.0) * (gs.grad_sq - 2.0 * e)};
    const auto r = classify(n, p, gs, true);
    CHECK(rel(r.energy_u, e) < 1e-12);
    CHECK(c.below == (r.me_u < r.me_q));
  }
}

TEST_CASE("trapping constants") {
  CHECK(c_sigma_b_n(ModelParams(2, 1.0, 0.5)) == doctest::Approx(1.5625).epsilon(1e-15));
  const auto& gs = gs_1d();
  const ModelParams& p = gs.profile.params;
  const double s = p.s_sigma();
  const double c0 = c_sigma_b_n(p);
  const double eq = ground_state_energy(p, gs.l2_sq);

  const auto a = energy_trap(gs.l2_sq, -1.0, 4.0 * gs.grad_sq, p, gs);
  CHECK(a.trap_case == TrapCase::NonPositiveE);
  CHECK(a.constant == doctest::Approx(std::pow(c0, s)).epsilon(1e-15));

  // Part (b) approaches part (a) as the energy goes to zero.
  const auto b = energy_trap(gs.l2_sq, 1e-8 * eq, 4.0 * gs.grad_sq, p, gs);
  CHECK(b.trap_case == TrapCase::PositiveE);
  CHECK(rel(b.constant, a.constant) < 1e-8);
  CHECK(b.constant > 1.0);

  CHECK(kind_of([&] { energy_trap(gs.l2_sq, 1.1 * eq, gs.grad_sq, p, gs); }) == "HypothesisViolated");

  // Above-threshold data below the energy level satisfy the bound.
  for (double gamma : {1.02, 1.1, 1.3, 1.6}) {
    const auto n = scaled(gs, gamma);
    const auto t = energy_trap(n.mass, energy(n, p), n.grad_sq, p, gs);
    CHECK(t.holds);
  }
}

TEST_CASE("trapping constants exceed one across parameters") {
  for (int n = 1; n <= 3; ++n) {
    for (double b : {0.1, 0.5, 0.9}) {
      for (double frac : {0.1, 0.5, 0.9}) {
        const double s = frac * std::min(1.0, 0.5 * n);
        const ModelParams p(n, (2.0 - b) / (n - 2.0 * s), b);
        const double c0 = c_sigma_b_n(p);
        CHECK(c0 > 1.0);
        for (double ratio : {0.0, 0.3, 0.9, 0.999}) {
          CHECK(std::pow(1.0 + std::sqrt(1.0 - ratio) * (c0 - 1.0), p.s_sigma()) > 1.0);
        }
      }
    }
  }
}

TEST_CASE("section 5 barrier geometry") {
  for (const auto* gs : {&gs_1d(), &gs_2d()}) {
    const ModelParams& p = gs->profile.params;
    const auto s5 = section5_barrier(p, *gs);
    CHECK(std::abs(section5_fprime(p, s5.kopt, s5.x_max)) / s5.x_max < 1e-6);
    const double fmax = section5_f(p, s5.kopt, s5.x_max);
    CHECK(std::abs(section5_f(p, s5.kopt, s5.x_root)) / fmax < 1e-8);
    CHECK(rel(fmax, s5.f_at_x_max) < 1e-4);
    CHECK(rel(s5.x_root / s5.x_crit, c_sigma_b_n(p)) < 1e-12);
    CHECK(rel(s5.x_root / s5.x_max, c_sigma_b_n(p)) < 1e-6);
  }
}

TEST_CASE("tangent parabola gap") {
  const double a = 0.3;
  const double alpha = 3.5;
  const auto iv = lemma51_interval(a, alpha);
  CHECK(std::abs(lemma51_gap(a, alpha, iv.x_max)) < 1e-15);
  CHECK(std::abs(lemma51_gap(a, alpha, iv.x_root)) < 1e-15);
  CHECK(kind_of([&] { lemma51_gap(a, alpha, 0.5 * iv.x_max); }) == "OutOfInterval");
  CHECK(kind_of([&] { lemma51_gap(a, alpha, 1.5 * iv.x_root); }) == "OutOfInterval");
  CHECK(kind_of([&] { lemma51_interval(-1.0, 3.0); }) == "InvalidArgument");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double aa = std::pow(10.0, -3.0 + 6.0 * u01(rng));
    const double al = 2.0 + 8.0 * (1.0 - u01(rng));
    const auto v = lemma51_interval(aa, al);
    const double top = 0.5 * v.x_max * v.x_max - aa * std::pow(v.x_max, al);
    for (int k = 0; k < 1000; ++k) {
      const double x = v.x_max + (v.x_root - v.x_max) * u01(rng);
      worst = std::min(worst, lemma51_gap(aa, al, x) / std::max(1.0, std::abs(top)));
    }
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("normalized constants") {
  const auto c4 = lemma51_normalized_constants(4.0);
  CHECK(c4.A == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c4.B == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (double alpha = 2.05; alpha <= 10.0; alpha += 0.05) {
    const auto c = lemma51_normalized_constants(alpha);
    const auto F = [&](double x) { return 0.5 * x * x - std::pow(x, alpha) / alpha; };
    CHECK(std::abs(F(c.B)) < 1e-13);
    CHECK(std::abs(F(1.0) - c.A) < 1e-15);
  }
  const double b = lemma51_normalized_constants(2.0 + 1e-9).B;
  CHECK(std::abs(b - std::exp(0.5)) < 1e-8);
}

TEST_CASE("scalar inequalities") {
  CHECK(lemma51_scalar_inequalities(2.0).first == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(lemma51_scalar_inequalities(1e-9).first) < 1e-9);
  double first = 1.0;
  double second = 1.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = std::pow(10.0, -6.0 + 12.0 * i / 9999.0);
    const auto v = lemma51_scalar_inequalities(x);
    first = std::min(first, v.first);
    second = std::min(second, v.second);
  }
  CHECK(first > -1e-12);
  CHECK(second > 0.0);
}
