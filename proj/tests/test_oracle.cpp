#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "pspectra/eigenfunctions.hpp"
#include "pspectra/errors.hpp"
#include "pspectra/oracle.hpp"

using namespace pspectra;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPiSq = 9.8696044010893586188;

std::shared_ptr<const PTrigTable> table_for(double p) {
  static std::vector<std::pair<double, std::shared_ptr<const PTrigTable>>> cache;
  for (const auto& e : cache)
    if (e.first == p) return e.second;
  cache.push_back({p, std::make_shared<PTrigTable>(PTrigTable::build(p))});
  return cache.back().second;
}

double rel(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("flux: weighted one-sided powers") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  CHECK(flux(prm, 2.0) == 2.0);
  CHECK(flux(prm, -2.0) == -18.0);
  CHECK(flux(prm, 0.0) == 0.0);
  CHECK(flux({3.0, 2.0, 1.0, 1.0}, 2.0) == 32.0);  // 2^3 * 2^2
  // strictly increasing
  double prev = flux(prm, -5.0);
  for (double s = -4.5; s <= 5.0; s += 0.5) {
    CHECK(flux(prm, s) > prev);
    prev = flux(prm, s);
  }
}

TEST_CASE("flux inverse round-trips on both branches") {
  std::mt19937_64 rng(7);
  for (double p : {1.5, 2.0, 3.0}) {
    const ProblemParams prm{p, 1.7, 0.4, 1.0};
    for (int i = 0; i < 1000; ++i) {
      const double v = 100.0 * (unit_double(rng) - 0.5);
      CHECK(rel(flux(prm, flux_inverse(prm, v)), v) < 1e-12);
      const double s = 10.0 * (unit_double(rng) - 0.5);
      if (std::abs(s) > 1e-3)
        CHECK(rel(flux_inverse(prm, flux(prm, s)), s) < 1e-12);
    }
    CHECK(flux_inverse(prm, 0.0) == 0.0);
  }
}

TEST_CASE("first integral: oscillator form at p = 2 and positivity") {
  const ProblemParams prm{2.0, 1.0, 1.0, 1.0};
  for (double u : {-0.8, 0.0, 0.3})
    for (double v : {-0.7, 0.0, 1.2}) {
      const double want =
          0.5 * v * v + 0.5 * (u >= 0.0 ? 4.0 * u * u : 9.0 * u * u);
      CHECK(std::abs(hamiltonian(prm, 4.0, 9.0, u, v) - want) < 1e-15);
    }
  CHECK(hamiltonian(prm, 1.0, 1.0, 0.0, 0.0) == 0.0);
  const ProblemParams prm3{3.0, 2.0, 1.0, 1.0};
  for (double u : {-1.5, 0.2})
    for (double v : {-0.4, 2.0})
      CHECK(hamiltonian(prm3, 5.0, 7.0, u, v) > 0.0);
  CHECK_THROWS_AS(hamiltonian(prm, -1.0, 1.0, 0.1, 0.1), std::domain_error);
}

TEST_CASE("shot trajectories: symmetric linear case hits its known zero") {
  const ProblemParams prm{2.0, 1.0, 1.0, 1.0};
  const ShootingResult r = shoot(prm, kPiSq, kPiSq, 1.0, 1.05);
  REQUIRE(r.zeros.size() == 1);
  CHECK(std::abs(r.zeros[0] - 1.0) < 1e-8);
  REQUIRE(r.humps.size() == 1);
  CHECK(r.humps[0] == 1);
  // u = sin(pi t) / pi, so u'(1) = -1 and u(1.05) < 0
  CHECK(std::abs(r.slopes_at_zeros[0] + 1.0) < 1e-6);
  CHECK(r.end_value < 0.0);
  CHECK(std::abs(r.end_value - std::sin(1.05 * kPi) / kPi) < 1e-8);
  CHECK(r.energy_drift < 1e-7);
}

TEST_CASE("shot trajectories: asymmetric principal hump spans the interval") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const double lam1 = 4.0 * kPiSq;
  const ShootingResult r = shoot(prm, lam1, lam1, 1.0, 1.02);
  REQUIRE(r.zeros.size() == 1);
  CHECK(std::abs(r.zeros[0] - 1.0) < 1e-8);
  CHECK(r.humps[0] == 1);
  CHECK(r.energy_drift < 1e-7);
}

TEST_CASE("shot trajectories: different jump levels give unequal hump widths") {
  // mu = 4 pi^2 makes positive humps of width 1/2, nu = pi^2 negative ones
  // of width 1
  const ProblemParams prm{2.0, 1.0, 1.0, 1.0};
  const ShootingResult r = shoot(prm, 4.0 * kPiSq, kPiSq, 1.0, 1.6);
  REQUIRE(r.zeros.size() == 2);
  CHECK(std::abs(r.zeros[0] - 0.5) < 1e-8);
  CHECK(std::abs(r.zeros[1] - 1.5) < 1e-8);
  CHECK(r.humps[0] == 1);
  CHECK(r.humps[1] == -1);
  CHECK(r.end_value > 0.0);  // third hump is positive again

  // starting downward swaps the hump order
  const ShootingResult rn = shoot(prm, 4.0 * kPiSq, kPiSq, -1.0, 1.6);
  REQUIRE(rn.zeros.size() == 2);
  CHECK(std::abs(rn.zeros[0] - 1.0) < 1e-8);
  CHECK(std::abs(rn.zeros[1] - 1.5) < 1e-8);
  CHECK(rn.humps[0] == -1);
  CHECK(rn.humps[1] == 1);
}

TEST_CASE("shot zeros are invariant under initial-slope scaling") {
  const ProblemParams prm{3.0, 1.0, 2.0, 1.0};
  const ShootingResult r1 = shoot(prm, 50.0, 80.0, 1.0, 2.0);
  const ShootingResult r2 = shoot(prm, 50.0, 80.0, 2.0, 2.0);
  REQUIRE(r1.zeros.size() == r2.zeros.size());
  REQUIRE(!r1.zeros.empty());
  for (std::size_t i = 0; i < r1.zeros.size(); ++i)
    CHECK(std::abs(r1.zeros[i] - r2.zeros[i]) < 1e-9);
}

TEST_CASE("shot zeros contract like lambda^{-1/p}") {
  const ProblemParams prm{1.5, 2.0, 0.5, 1.0};
  const double lam = 40.0;
  const ShootingResult r1 = shoot(prm, lam, lam, 1.0, 1.5);
  const double scale = std::pow(2.0, prm.p);  // lambda -> 2^p lambda
  const ShootingResult r2 = shoot(prm, scale * lam, scale * lam, 1.0, 0.75);
  REQUIRE(!r1.zeros.empty());
  REQUIRE(!r2.zeros.empty());
  CHECK(rel(r2.zeros[0], r1.zeros[0] / 2.0) < 1e-6);
}

TEST_CASE("shot rejects bad parameters and coarse steps") {
  const ProblemParams prm{3.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(shoot(prm, -1.0, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(shoot(prm, 1.0, 1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(shoot(prm, 1.0, 1.0, 1.0, -2.0), std::domain_error);
  // a handful of steps across several humps cannot conserve energy
  CHECK_THROWS_AS(shoot(prm, 300.0, 300.0, 1.0, 2.0, 0.5), AccuracyError);
}

TEST_CASE("eigenvalue shooting matches the closed forms") {
  CHECK(rel(first_eigenvalue_shooting({2.0, 1.0, 1.0, 1.0}), kPiSq) < 1e-6);
  CHECK(rel(first_eigenvalue_shooting({2.0, 1.0, 3.0, 1.0}), 4.0 * kPiSq) <
        1e-6);
  CHECK(rel(first_eigenvalue_shooting({3.0, 2.0, 2.0, 1.0}),
            226.31009580802044333) < 1e-6);
}

TEST_CASE("eigenvalue shooting respects the length scaling law") {
  const ProblemParams one{1.5, 2.0, 0.5, 1.0};
  const ProblemParams two{1.5, 2.0, 0.5, 2.0};
  const double l1 = first_eigenvalue_shooting(one);
  const double l2 = first_eigenvalue_shooting(two);
  CHECK(rel(l2, l1 / std::pow(2.0, 1.5)) < 1e-6);
}

TEST_CASE("eigenvalue shooting reports an unusable bracket") {
  // on a huge interval the first zero precedes L throughout the bracket
  CHECK_THROWS_AS(first_eigenvalue_shooting({2.0, 1.0, 1.0, 1e9}), SearchError);
}

TEST_CASE("rayleigh minimization: symmetric and asymmetric ground states") {
  const RayleighResult rs = rayleigh_minimize({2.0, 1.0, 1.0, 1.0}, 600);
  CHECK(rs.converged);
  CHECK(rs.iterations > 0);
  CHECK(rel(rs.value, kPiSq) < 1e-3);

  const RayleighResult ra = rayleigh_minimize({2.0, 1.0, 3.0, 1.0}, 600);
  CHECK(ra.converged);
  CHECK(rel(ra.value, 4.0 * kPiSq) < 1e-3);
  // the crest sits at the weight split a / (a + b) = 1/4
  int arg = 0;
  for (int i = 0; i <= 600; ++i)
    if (ra.minimizer.values[i] > ra.minimizer.values[arg]) arg = i;
  CHECK(std::abs(ra.minimizer.node(arg) - 0.25) <= 2.0 / 600.0 + 1e-12);
}

TEST_CASE("rayleigh minimizer keeps one sign and a monotone history") {
  const RayleighResult r = rayleigh_minimize({3.0, 2.0, 1.0, 1.0}, 320);
  CHECK(r.converged);
  double low = 0.0;
  for (double x : r.minimizer.values) low = std::min(low, x);
  CHECK(low >= -1e-12);
  REQUIRE(!r.objective_history.empty());
  for (std::size_t i = 1; i < r.objective_history.size(); ++i)
    CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-12);
  // minimum is the first eigenvalue of the p = 3 problem with (a+b)/2 = 1.5
  CHECK(rel(r.value, std::pow(1.5, 3.0) * 28.288761976002555416) < 2e-3);

  CHECK_THROWS_AS(rayleigh_minimize({2.0, 1.0, 1.0, 1.0}, 32),
                  std::domain_error);
  CHECK_THROWS_AS(rayleigh_minimize({2.0, 1.0, 1.0, 1.0}, 600, 0),
                  std::domain_error);
}

TEST_CASE("weak residual separates eigenfunctions from impostors") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const double lam1 = lambda_1_asym(prm);

  const PiecewisePSolution u1 = build_principal(prm, tab);
  CHECK(weak_residual(prm, u1, lam1, lam1) < 1e-6);
  CHECK(weak_residual(prm, u1, 1.1 * lam1, 1.1 * lam1) > 1e-3);

  const PiecewisePSolution u3 = build_kth(prm, 3, +1, tab);
  const double lam3 = std::pow(3.0, prm.p) * lam1;
  CHECK(weak_residual(prm, u3, lam3, lam3) < 1e-6);

  const ProblemParams prm15{1.5, 2.0, 1.0, 1.0};
  const auto tab15 = table_for(1.5);
  const double lam1_15 = lambda_1_asym(prm15);
  const PiecewisePSolution w2 = build_kth(prm15, 2, -1, tab15);
  CHECK(weak_residual(prm15, w2, std::pow(2.0, 1.5) * lam1_15,
                      std::pow(2.0, 1.5) * lam1_15) < 1e-6);

  CHECK_THROWS_AS(weak_residual(prm, u1, lam1, lam1, 4), std::domain_error);
  CHECK_THROWS_AS(weak_residual(prm, u1, 0.0, lam1), std::domain_error);
}

TEST_CASE("weak residual accepts mixed jump levels on a curve point") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const double mu = 6.25 * lambda_1_asym(prm);
  const double nu = fucik_nu_on_curve(prm, {2, 2}, mu);
  const PiecewisePSolution u = build_fucik_solution(prm, mu, nu, +1, tab);
  CHECK(weak_residual(prm, u, mu, nu) < 1e-6);
  // the same profile against swapped levels is far off
  CHECK(weak_residual(prm, u, nu, mu) > 1e-3);
}

TEST_CASE("grid profiles interpolate linearly between pinned nodes") {
  GridFunction g;
  g.L = 2.0;
  g.values.assign(33, 0.0);
  for (int i = 1; i < 32; ++i) g.values[i] = std::sin(kPi * i / 32.0);
  const GridProfile gp(g);
  CHECK(gp.lo() == 0.0);
  CHECK(gp.hi() == 2.0);
  const double h = 2.0 / 32.0;
  CHECK(gp.value(5 * h) == g.values[5]);
  CHECK(std::abs(gp.value(5.5 * h) - 0.5 * (g.values[5] + g.values[6])) <
        1e-15);
  CHECK(std::abs(gp.slope(5.5 * h) - (g.values[6] - g.values[5]) / h) < 1e-12);
  CHECK(gp.kinks().size() == 31);

  GridFunction bad = g;
  bad.values[0] = 0.5;
  CHECK_THROWS_AS(GridProfile{bad}, std::domain_error);
  GridFunction tiny;
  tiny.L = 1.0;
  tiny.values.assign(9, 0.0);
  CHECK_THROWS_AS(GridProfile{tiny}, std::domain_error);
}

TEST_CASE("pointwise convexity defect: exact zeros and special forms") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  // proportional pairs are the equality case
  for (double c : {0.3, 1.0, 2.5})
    for (double dv : {-1.2, 0.4}) {
      const PiconeResult r = picone_residual(prm, c * 0.8, c * dv, 0.8, dv);
      CHECK(std::abs(r.R) < 1e-12);
      REQUIRE(r.P_defined);
      CHECK(std::abs(r.P) < 1e-12);
    }
  // dv = 0 disables the quotient form; R reduces to the first term
  const PiconeResult r0 = picone_residual(prm, 0.5, 2.0, 1.0, 0.0);
  CHECK(!r0.P_defined);
  CHECK(std::abs(r0.R - 4.0) < 1e-15);  // (a du)^2 = 4
  const PiconeResult rn = picone_residual(prm, 0.5, -2.0, 1.0, 0.0);
  CHECK(std::abs(rn.R - 36.0) < 1e-15);  // (b |du|)^2 = 36
  // u = 0 also reduces to the first term
  const PiconeResult rz = picone_residual(prm, 0.0, -1.0, 0.7, 0.9);
  CHECK(std::abs(rz.R - 9.0) < 1e-15);

  CHECK_THROWS_AS(picone_residual(prm, 0.5, 1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(picone_residual(prm, -0.5, 1.0, 1.0, 1.0),
                  std::domain_error);
}

TEST_CASE("pointwise convexity defect: random sweep stays consistent") {
  std::mt19937_64 rng(0xABCD);
  for (double p : {1.5, 2.0, 3.0}) {
    CAPTURE(p);
    double worst_gap = 0.0, most_negative = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const ProblemParams prm{p, 0.1 + 9.9 * unit_double(rng),
                              0.1 + 9.9 * unit_double(rng), 1.0};
      const double u = 3.0 * unit_double(rng);
      const double du = 6.0 * unit_double(rng) - 3.0;
      const double v = 0.1 + 2.9 * unit_double(rng);
      const double dv = 6.0 * unit_double(rng) - 3.0;
      const PiconeResult r = picone_residual(prm, u, du, v, dv);
      most_negative = std::min(most_negative, r.R);
      if (r.P_defined) {
        const double scale = std::max({std::abs(r.R), std::abs(r.P), 1.0});
        worst_gap = std::max(worst_gap, std::abs(r.R - r.P) / scale);
      }
    }
    CHECK(worst_gap < 1e-10);
    CHECK(most_negative >= -1e-12);
  }
}
