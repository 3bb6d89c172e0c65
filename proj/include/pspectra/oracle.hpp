#pragma once

#include <vector>

#include "pspectra/profile.hpp"
#include "pspectra/spectra.hpp"

namespace pspectra {

// Outcome of integrating the initial-value problem u(0) = 0, u'(0) = s0 for
// the asymmetric jump equation.  humps[i] is the sign of u on the interval
// ending at zeros[i]; signs alternate and zeros are strictly increasing.
struct ShootingResult {
  std::vector<double> zeros;            // zero abscissae in (0, t_end]
  std::vector<double> slopes_at_zeros;  // u' at each zero
  std::vector<int> humps;               // sign of u before each zero
  double end_value = 0.0;               // u(t_end)
  double energy_drift = 0.0;            // max relative deviation of H
};

// Node values of a grid function on the uniform n+1-point grid over [0, L]
// with pinned zero boundary values.
struct GridFunction {
  double L = 1.0;
  std::vector<double> values;
  int n() const { return static_cast<int>(values.size()) - 1; }
  double node(int i) const { return L * i / n(); }
};

// Piecewise-linear view of a GridFunction; every interior node is a kink.
class GridProfile : public Profile {
 public:
  explicit GridProfile(GridFunction g);
  double lo() const override { return 0.0; }
  double hi() const override { return g_.L; }
  double value(double t) const override;
  double slope(double t) const override;
  std::vector<double> kinks() const override;
  const GridFunction& grid() const { return g_; }

 private:
  int cell_at(double t) const;
  GridFunction g_;
};

// a^p (s+)^{p-1} - b^p (s-)^{p-1}; strictly increasing, odd through 0
double flux(const ProblemParams& prm, double s);

// inverse of flux: (v / a^p)^{1/(p-1)} for v >= 0, mirrored for v < 0
double flux_inverse(const ProblemParams& prm, double v);

// First integral of the autonomous system u' = flux_inverse(v),
// v' = -mu (u+)^{p-1} + nu (u-)^{p-1}; zero only at the origin.
double hamiltonian(const ProblemParams& prm, double mu, double nu, double u,
                   double v);

// Fixed-step fourth-order integration of the system from (0, flux(s0)), with
// each sign change of u localized by bisection on cubic dense output.  A
// step of 0 selects the default L / 10^4.  Raises AccuracyError when the
// relative energy drift exceeds 1e-3.
ShootingResult shoot(const ProblemParams& prm, double mu, double nu, double s0,
                     double t_end, double step = 0.0);

// Bisect lambda (geometrically, within [1e-6, 1e9]) in mu = nu = lambda until
// the first zero of the shot trajectory lands within tol of L.  Raises
// SearchError when the bracket does not straddle L.
double first_eigenvalue_shooting(const ProblemParams& prm, double tol = 1e-9);

struct RayleighResult {
  double value = 0.0;
  GridFunction minimizer;
  bool converged = false;
  int iterations = 0;  // accepted descent steps, all grid levels combined
  std::vector<double> objective_history;  // finest level; nonincreasing
};

// Minimize sum_i h [a^p((Du_i)+)^p + b^p((Du_i)-)^p] over grid functions with
// trapezoidal p-norm 1 (forward differences Du) by projected gradient descent
// with backtracking.  Coarse-grid minimizers seed finer grids internally; the
// returned history covers the requested grid only.  A failure to find any
// descent step is reported through converged = false, not an exception.
RayleighResult rayleigh_minimize(const ProblemParams& prm, int n,
                                 int max_iter = 10000, double tol = 1e-9);

// max over n_test hat functions phi of |∫ flux(u') phi' - ∫ (mu (u+)^{p-1}
// - nu (u-)^{p-1}) phi|, quadrature panels split at the profile's kinks,
// scaled by sup|flux(u')| * L.
double weak_residual(const ProblemParams& prm, const Profile& sol, double mu,
                     double nu, int n_test = 64);

struct PiconeResult {
  double R = 0.0;
  double P = 0.0;
  bool P_defined = false;
};

// Pointwise convexity defect of the pair (u, v) at one abscissa, for
// H(t) = a t+ + b t-:
//   R = H^p(du) - (u^p / v^{p-1})' H^{p-1}(dv) H'(dv)
// with the derivative expanded through (u, du, v, dv).  The equivalent
// quotient form P divides by dv and is evaluated only when |dv| > 1e-12.
// Requires v > 0 and u >= 0.
PiconeResult picone_residual(const ProblemParams& prm, double u, double du,
                             double v, double dv);

}  // namespace pspectra
