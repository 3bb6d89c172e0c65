#include "pspectra/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pspectra/errors.hpp"

namespace pspectra {

void ProblemParams::validate() const {
  if (!(p > 1.0))
    throw std::domain_error("exponent p must exceed 1, got " + std::to_string(p));
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("slope weights a, b must be positive");
  if (!(L > 0.0))
    throw std::domain_error("interval length L must be positive");
}

FucikCurveId::FucikCurveId(int P_, int N_) : P(P_), N(N_) {
  if (P < 1 || N < 1)
    throw std::domain_error("curve hump counts must be >= 1");
  if (std::abs(P - N) > 1)
    throw std::domain_error("curve hump counts must satisfy |P - N| <= 1, got (" +
                            std::to_string(P) + ", " + std::to_string(N) + ")");
}

double lambda_1_asym(const ProblemParams& prm) {
  prm.validate();
  const double half_sum = 0.5 * (prm.a + prm.b);
  return std::pow(half_sum, prm.p) * lambda_k_symmetric(prm.p, prm.L, 1);
}

double breakpoint_t0(const ProblemParams& prm) {
  prm.validate();
  return prm.a / (prm.a + prm.b);
}

std::vector<DirichletEigenvalue> dirichlet_spectrum(const ProblemParams& prm,
                                                    int k_max) {
  prm.validate();
  if (k_max < 1) throw std::domain_error("k_max must be >= 1");
  const double half_sum = 0.5 * (prm.a + prm.b);
  const double pi_p = compute_pi_p(prm.p);
  std::vector<DirichletEigenvalue> out;
  out.reserve(k_max);
  for (int k = 1; k <= k_max; ++k)
    out.push_back(
        {k, (prm.p - 1.0) * std::pow(k * half_sum * pi_p / prm.L, prm.p)});
  return out;
}

double fucik_nu_on_curve(const ProblemParams& prm, FucikCurveId curve,
                         double mu) {
  prm.validate();
  const double lam1 = lambda_1_asym(prm);
  const double asymptote = std::pow(static_cast<double>(curve.P), prm.p) * lam1;
  if (!(mu > asymptote))
    throw AsymptoteError(
        "mu must exceed the curve asymptote P^p lambda_1 = " +
            std::to_string(asymptote) + ", got mu = " + std::to_string(mu),
        asymptote);
  const double inv_p = 1.0 / prm.p;
  const double r = std::pow(lam1, -inv_p) - curve.P * std::pow(mu, -inv_p);
  return std::pow(curve.N / r, prm.p);
}

std::vector<FucikPoint> sample_fucik_curve(const ProblemParams& prm,
                                           FucikCurveId curve, double mu_lo,
                                           double mu_hi, int n) {
  prm.validate();
  if (n < 2) throw std::domain_error("sample count must be >= 2");
  if (!(mu_lo > 0.0) || !(mu_hi > mu_lo))
    throw std::domain_error("sample range must satisfy 0 < mu_lo < mu_hi");
  const double lam1 = lambda_1_asym(prm);
  const double asymptote = std::pow(static_cast<double>(curve.P), prm.p) * lam1;
  if (!(mu_lo > asymptote))
    throw AsymptoteError(
        "mu_lo must exceed the curve asymptote " + std::to_string(asymptote),
        asymptote);
  std::vector<FucikPoint> pts;
  pts.reserve(n);
  const double ratio = mu_hi / mu_lo;
  for (int i = 0; i < n; ++i) {
    const double mu =
        mu_lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    pts.push_back({mu, fucik_nu_on_curve(prm, curve, mu)});
  }
  return pts;
}

Membership fucik_membership(const ProblemParams& prm, double mu, double nu,
                            double rel_tol) {
  prm.validate();
  if (!(mu > 0.0) || !(nu > 0.0))
    throw std::domain_error("membership requires mu, nu > 0");
  if (!(rel_tol > 0.0)) throw std::domain_error("rel_tol must be positive");
  const double lam1 = lambda_1_asym(prm);

  Membership m;
  if (std::abs(mu - lam1) <= rel_tol * lam1) {
    m.kind = MembershipKind::TrivialLineMu;
    m.residual = std::abs(mu - lam1) / lam1;
    return m;
  }
  if (std::abs(nu - lam1) <= rel_tol * lam1) {
    m.kind = MembershipKind::TrivialLineNu;
    m.residual = std::abs(nu - lam1) / lam1;
    return m;
  }

  // curve equation in the lambda^{-1/p} metric
  const double inv_p = 1.0 / prm.p;
  const double target = std::pow(lam1, -inv_p);
  const double wmu = std::pow(mu, -inv_p);
  const double wnu = std::pow(nu, -inv_p);
  const int p_bound = static_cast<int>(std::ceil(target / wmu)) + 1;

  double best_residual = std::numeric_limits<double>::infinity();
  int best_P = 0, best_N = 0;
  for (int P = 1; P <= p_bound; ++P) {
    for (int N = std::max(1, P - 1); N <= P + 1; ++N) {
      const double res = std::abs(P * wmu + N * wnu - target) / target;
      const bool better =
          res <= rel_tol &&
          (best_P == 0 || P + N < best_P + best_N ||
           (P + N == best_P + best_N && P < best_P));
      if (better) {
        best_P = P;
        best_N = N;
        best_residual = res;
      }
      if (best_P == 0 && res < best_residual) best_residual = res;
    }
  }
  if (best_P > 0) {
    m.kind = MembershipKind::OnCurve;
    m.curve = FucikCurveId(best_P, best_N);
    m.residual = best_residual;
  } else {
    m.kind = MembershipKind::NotInSpectrum;
    m.residual = best_residual;
  }
  return m;
}

ClassicalBranch classical_branch_of(FucikCurveId curve) {
  if (curve.P == curve.N) return {BranchFamily::Even, curve.P};
  if (curve.N == curve.P + 1) return {BranchFamily::OddFirst, curve.P};
  return {BranchFamily::OddSecond, curve.N};
}

}  // namespace pspectra
