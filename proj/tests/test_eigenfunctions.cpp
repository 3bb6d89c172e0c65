#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "pspectra/eigenfunctions.hpp"
#include "pspectra/errors.hpp"

using namespace pspectra;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

}  // namespace

TEST_CASE("principal profile: closed form at p = 2") {
  // a = 1, b = 3: rising part sqrt(2) sin(2 pi t), falling part
  // sqrt(2) sin(pi (1 - t) / 1.5), crest sqrt(2) at t = 1/4
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const PiecewisePSolution u = build_principal(prm, tab);

  CHECK(u.lo() == 0.0);
  CHECK(u.hi() == 1.0);
  CHECK(u.value(0.0) == 0.0);
  CHECK(u.value(1.0) == 0.0);
  const double c2 = std::sqrt(2.0);
  CHECK(rel(u.value(0.25), c2) < 1e-14);
  CHECK(rel(u.value(0.1), c2 * std::sin(0.2 * kPi)) < 1e-12);
  CHECK(rel(u.value(0.7), c2 * std::sin(kPi * 0.3 / 1.5)) < 1e-12);
  CHECK(rel(u.slope(0.1), 2.0 * kPi * c2 * std::cos(0.2 * kPi)) < 1e-11);
  CHECK(rel(u.slope(0.7), -c2 * (kPi / 1.5) * std::cos(kPi * 0.3 / 1.5)) <
        1e-11);

  // endpoint slopes carry the weight asymmetry
  CHECK(rel(u.slope(0.0), c2 * kPi / (2.0 * 0.25)) < 1e-12);
  CHECK(rel(u.slope(1.0), -c2 * kPi / (2.0 * 0.75)) < 1e-12);

  const auto kk = u.kinks();
  REQUIRE(kk.size() == 1);
  CHECK(rel(kk[0], 0.25) < 1e-15);

  CHECK_THROWS_AS(u.value(-0.1), std::domain_error);
  CHECK_THROWS_AS(u.slope(1.1), std::domain_error);
}

TEST_CASE("principal profile: crest location and height for general weights") {
  for (const ProblemParams prm :
       {ProblemParams{3.0, 1.0, 3.0, 2.0}, ProblemParams{1.5, 2.0, 0.5, 1.0},
        ProblemParams{2.0, 1.0, 1.0, 1.0}}) {
    CAPTURE(prm.p);
    const auto tab = table_for(prm.p);
    const PiecewisePSolution u = build_principal(prm, tab, 2.0);
    const double t_peak = breakpoint_t0(prm) * prm.L;
    CHECK(rel(u.value(t_peak), 2.0 * tab->c_p()) < 1e-13);
    CHECK(std::abs(u.slope(t_peak)) < 1e-12);
    // the crest is a genuine maximum
    const double h = 1e-3 * prm.L;
    CHECK(u.value(t_peak - h) < u.value(t_peak));
    CHECK(u.value(t_peak + h) < u.value(t_peak));
  }
}

TEST_CASE("global scale multiplies values and slopes linearly") {
  const ProblemParams prm{2.5, 1.2, 0.8, 1.7};
  const auto tab = table_for(2.5);
  const PiecewisePSolution u1 = build_principal(prm, tab, 1.0);
  const PiecewisePSolution u3 = build_principal(prm, tab, 3.0);
  for (double t : {0.2, 0.8, 1.3}) {
    CHECK(rel(u3.value(t), 3.0 * u1.value(t)) < 1e-15);
    CHECK(rel(u3.slope(t), 3.0 * u1.slope(t)) < 1e-15);
  }
}

TEST_CASE("k-hump profiles: joints, alternation, smooth slope across joints") {
  const ProblemParams prm{3.0, 1.0, 2.0, 1.5};
  const auto tab = table_for(3.0);
  for (int start : {+1, -1}) {
    CAPTURE(start);
    const PiecewisePSolution u = build_kth(prm, 4, start, tab);
    REQUIRE(u.pieces().size() == 4);
    const double w = prm.L / 4.0;
    for (int j = 1; j < 4; ++j) {
      const double tj = j * w;
      // the function vanishes at each joint
      CHECK(std::abs(u.value(tj)) < 1e-14);
      // one-sided slopes agree: the profile is C^1 across the joint
      const double eps = 1e-10 * prm.L;
      const double sl = u.slope(tj - eps);
      const double sr = u.slope(tj + eps);
      CHECK(rel(sl, sr) < 1e-6);
    }
    // humps alternate sign starting from start
    int sign = start;
    for (int i = 0; i < 4; ++i) {
      const double mid = (i + 0.5) * w;
      CHECK(sign * u.value(mid) > 0.0);
      sign = -sign;
    }
  }
  CHECK_THROWS_AS(build_kth(prm, 0, +1, tab), std::domain_error);
  CHECK_THROWS_AS(build_kth(prm, 3, 2, tab), std::domain_error);
}

TEST_CASE("k-hump crest abscissae swap with the hump sign") {
  // positive humps peak at the a : b split of their support, negative humps
  // at the mirrored split
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const PiecewisePSolution u = build_kth(prm, 2, +1, tab);
  const auto kk = u.kinks();
  REQUIRE(kk.size() == 3);  // crest, joint, crest
  CHECK(rel(kk[0], 0.25 * 0.5) < 1e-14);
  CHECK(rel(kk[1], 0.5) < 1e-15);
  CHECK(rel(kk[2], 0.5 + 0.75 * 0.5) < 1e-14);
  CHECK(rel(u.value(kk[0]), std::sqrt(2.0)) < 1e-13);
  CHECK(rel(u.value(kk[2]), -std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("piece lists are validated") {
  const ProblemParams prm{2.0, 1.0, 1.0, 1.0};
  const auto tab = table_for(2.0);
  using P = std::vector<SolutionPiece>;
  CHECK_THROWS_AS(PiecewisePSolution(prm, P{}, tab), std::invalid_argument);
  CHECK_THROWS_AS(
      PiecewisePSolution(prm, P{{0.0, 0.4, +1, 1.0}, {0.5, 1.0, -1, 1.0}}, tab),
      std::invalid_argument);  // gap between pieces
  CHECK_THROWS_AS(
      PiecewisePSolution(prm, P{{0.0, 0.5, +1, 1.0}, {0.5, 1.0, +1, 1.0}}, tab),
      std::invalid_argument);  // no sign alternation
  CHECK_THROWS_AS(PiecewisePSolution(prm, P{{0.0, 1.0, +1, 0.0}}, tab),
                  std::invalid_argument);  // zero amplitude
  CHECK_THROWS_AS(PiecewisePSolution(prm, P{{0.0, 1.0, 2, 1.0}}, tab),
                  std::invalid_argument);  // bad sign
  CHECK_THROWS_AS(PiecewisePSolution(prm, P{{0.0, 1.0, +1, 1.0}}, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      PiecewisePSolution(prm, P{{0.0, 1.0, +1, 1.0}}, table_for(3.0)),
      std::invalid_argument);  // table built for a different exponent
}

TEST_CASE("covers on the trivial lines") {
  const ProblemParams prm{2.0, 1.0, 3.0, 2.0};
  const double lam1 = lambda_1_asym(prm);

  const InterspersedCover cp = build_cover(prm, lam1, 123.0, +1);
  CHECK(cp.P == 1);
  CHECK(cp.N == 0);
  REQUIRE(cp.intervals.size() == 1);
  CHECK(cp.intervals[0].t_l == 0.0);
  CHECK(cp.intervals[0].t_r == prm.L);
  CHECK(cp.intervals[0].sign == 1);
  CHECK(cp.l_mu == prm.L);

  const InterspersedCover cn = build_cover(prm, 123.0, lam1, -1);
  CHECK(cn.P == 0);
  CHECK(cn.N == 1);
  CHECK(cn.intervals[0].sign == -1);

  // the mu line needs a positive start; with a negative start it is not a
  // one-hump solution and the point is off every admissible curve
  CHECK_THROWS_AS(build_cover(prm, lam1, 9.0 * lam1, -1), NotOnSpectrumError);
}

TEST_CASE("covers at diagonal eigenvalue points tile evenly") {
  const ProblemParams prm{3.0, 2.0, 1.0, 2.0};
  const double lam1 = lambda_1_asym(prm);
  const double lam4 = std::pow(4.0, prm.p) * lam1;
  const InterspersedCover c = build_cover(prm, lam4, lam4, +1);
  CHECK(c.P == 2);
  CHECK(c.N == 2);
  REQUIRE(c.intervals.size() == 4);
  CHECK(rel(c.l_mu, prm.L / 4.0) < 1e-12);
  CHECK(rel(c.l_nu, prm.L / 4.0) < 1e-12);
  CHECK(c.intervals.front().t_l == 0.0);
  CHECK(c.intervals.back().t_r == prm.L);
  int sign = +1;
  for (int i = 0; i < 4; ++i) {
    CHECK(c.intervals[i].sign == sign);
    sign = -sign;
    if (i > 0) CHECK(c.intervals[i].t_l == c.intervals[i - 1].t_r);
    CHECK(rel(c.intervals[i].t_r - c.intervals[i].t_l, prm.L / 4.0) < 1e-9);
  }

  // odd hump count forces the extra hump onto the starting sign
  const double lam3 = std::pow(3.0, prm.p) * lam1;
  const InterspersedCover c3p = build_cover(prm, lam3, lam3, +1);
  CHECK(c3p.P == 2);
  CHECK(c3p.N == 1);
  const InterspersedCover c3n = build_cover(prm, lam3, lam3, -1);
  CHECK(c3n.P == 1);
  CHECK(c3n.N == 2);
}

TEST_CASE("covers reject off-curve points with the two nearest candidates") {
  const ProblemParams prm{2.0, 1.0, 1.0, 1.0};
  const double lam1 = lambda_1_asym(prm);
  try {
    build_cover(prm, 6.25 * lam1, 6.25 * lam1, +1);
    FAIL("expected NotOnSpectrumError");
  } catch (const NotOnSpectrumError& e) {
    CHECK(e.nearest[0].residual <= e.nearest[1].residual);
    CHECK(e.nearest[0].P > 0);
    CHECK(e.nearest[1].P > 0);
    CHECK(e.nearest[0].residual > 1e-9);
    CHECK(doctest::Contains("nearest").checkWith(e.what()));
  }
  CHECK_THROWS_AS(build_cover(prm, -1.0, 2.0, +1), std::domain_error);
  CHECK_THROWS_AS(build_cover(prm, 1.0, 2.0, 0), std::domain_error);
}

TEST_CASE("jump-parameter solutions vanish at joints and stay C^1") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const double lam1 = lambda_1_asym(prm);
  const auto tab = table_for(2.0);
  const double mu = 6.25 * lam1;
  const double nu = fucik_nu_on_curve(prm, {2, 2}, mu);
  const PiecewisePSolution u = build_fucik_solution(prm, mu, nu, +1, tab);

  REQUIRE(u.pieces().size() == 4);
  CHECK(u.value(0.0) == 0.0);
  CHECK(u.value(prm.L) == 0.0);
  for (std::size_t i = 1; i < u.pieces().size(); ++i) {
    const double tj = u.pieces()[i].t_l;
    CHECK(std::abs(u.value(tj)) < 1e-14);
    const double eps = 1e-10;
    CHECK(rel(u.slope(tj - eps), u.slope(tj + eps)) < 1e-6);
  }
  // amplitudes track hump widths, making the peak heights proportional
  for (const SolutionPiece& pc : u.pieces())
    CHECK(rel(pc.amplitude, pc.width()) < 1e-12);
  // negative humps are narrower here since nu > mu
  CHECK(u.pieces()[0].width() > u.pieces()[1].width());
}

TEST_CASE("reflection doubles a rising fragment into a symmetric hump") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const auto u = std::make_shared<PiecewisePSolution>(build_principal(prm, tab));
  const double t_peak = 0.25;

  const ReflectedFragment w = reflect_extend(u, 0.0, t_peak);
  CHECK(w.lo() == 0.0);
  CHECK(rel(w.hi(), 0.5) < 1e-15);
  for (double t : {0.05, 0.12, 0.2}) {
    CHECK(rel(w.value(t), w.value(0.5 - t)) < 1e-12);
    CHECK(rel(w.slope(t), -w.slope(0.5 - t)) < 1e-12);
  }
  // the doubled hump is the symmetric-problem principal profile sin(pi t / W)
  for (double t : {0.1, 0.3, 0.45})
    CHECK(rel(w.value(t), std::sqrt(2.0) * std::sin(2.0 * kPi * t / 1.0)) <
          1e-12);
  const auto kk = w.kinks();
  REQUIRE(!kk.empty());
  CHECK(rel(kk.front(), 0.25) < 1e-15);
}

TEST_CASE("reflection preconditions name the offending endpoint") {
  const ProblemParams prm{2.0, 1.0, 3.0, 1.0};
  const auto tab = table_for(2.0);
  const auto u = std::make_shared<PiecewisePSolution>(build_principal(prm, tab));

  CHECK_THROWS_WITH_AS(reflect_extend(u, 0.0, 0.17),
                       doctest::Contains("slope at crest"), std::domain_error);
  CHECK_THROWS_WITH_AS(reflect_extend(u, 0.1, 0.25),
                       doctest::Contains("value at left end"),
                       std::domain_error);
  CHECK_THROWS_WITH_AS(reflect_extend(u, -0.5, 0.25),
                       doctest::Contains("domain"), std::domain_error);
  CHECK_THROWS_AS(reflect_extend(u, 0.25, 0.25), std::domain_error);
  CHECK_THROWS_AS(reflect_extend(nullptr, 0.0, 0.25), std::invalid_argument);
}
