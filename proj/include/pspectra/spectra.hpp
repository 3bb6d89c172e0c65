#pragma once

#include <vector>

#include "pspectra/ptrig.hpp"

namespace pspectra {

// Data of the one-dimensional problem -(a^p ((u')^+)^{p-1} - b^p ((u')^-)^{p-1})'
// on (0, L): exponent p and the two slope weights a, b.
struct ProblemParams {
  double p = 2.0;
  double a = 1.0;
  double b = 1.0;
  double L = 1.0;
  void validate() const;
};

struct DirichletEigenvalue {
  int k;         // 1-based index
  double value;  // ((a+b)/2)^p * (p-1) * (k pi_p / L)^p
};

// A nontrivial Fucik curve, identified by its hump counts.  P and N count
// the positive and negative humps of the solutions on the curve.
struct FucikCurveId {
  int P = 1;
  int N = 1;
  FucikCurveId(int P_, int N_);
};

struct FucikPoint {
  double mu;
  double nu;
};

// first Dirichlet eigenvalue ((a+b)/2)^p lambda_{1,p}(0,L)
double lambda_1_asym(const ProblemParams& prm);

// interior break of the principal positive eigenfunction, t0 = a/(a+b)
double breakpoint_t0(const ProblemParams& prm);

// eigenvalues k = 1..k_max; entry k equals k^p times entry 1
std::vector<DirichletEigenvalue> dirichlet_spectrum(const ProblemParams& prm,
                                                    int k_max);

// solve the curve equation P mu^{-1/p} + N nu^{-1/p} = lambda_1^{-1/p} for nu;
// throws AsymptoteError when mu <= P^p lambda_1
double fucik_nu_on_curve(const ProblemParams& prm, FucikCurveId curve,
                         double mu);

// n geometrically spaced samples of the curve over [mu_lo, mu_hi]
std::vector<FucikPoint> sample_fucik_curve(const ProblemParams& prm,
                                           FucikCurveId curve, double mu_lo,
                                           double mu_hi, int n);

enum class MembershipKind { OnCurve, TrivialLineMu, TrivialLineNu, NotInSpectrum };

struct Membership {
  MembershipKind kind = MembershipKind::NotInSpectrum;
  FucikCurveId curve{1, 1};  // meaningful only for OnCurve
  double residual = 0.0;     // relative residual of the best match
};

// Classify (mu, nu): trivial lines take precedence, then the curve with the
// smallest P+N whose equation holds within rel_tol, else NotInSpectrum.
Membership fucik_membership(const ProblemParams& prm, double mu, double nu,
                            double rel_tol = 1e-9);

// classical two-parameter branch families: Even carries (k, k), OddFirst
// (k, k+1) and OddSecond (k+1, k)
enum class BranchFamily { Even, OddFirst, OddSecond };

struct ClassicalBranch {
  BranchFamily family;
  int k;  // branch index, k >= 1
};

ClassicalBranch classical_branch_of(FucikCurveId curve);

}  // namespace pspectra
