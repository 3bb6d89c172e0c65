#pragma once

#include <memory>
#include <vector>

#include "pspectra/profile.hpp"
#include "pspectra/ptrig.hpp"
#include "pspectra/spectra.hpp"

namespace pspectra {

// One hump of a solution: u does not change sign on [t_l, t_r] and vanishes
// at both ends.  sigma maps the hump onto the reference interval [0, 1].
// amplitude multiplies the reference hump shape, whose peak height is c_p.
struct SolutionPiece {
  double t_l = 0.0;
  double t_r = 1.0;
  int sign = 1;  // +1 or -1
  double amplitude = 1.0;
  double width() const { return t_r - t_l; }
  double sigma(double t) const { return (t - t_l) / (t_r - t_l); }
};

// A function on [0, L] assembled from contiguous humps.  Adjacent pieces
// share an endpoint (a joint); the solution vanishes there and the pieces
// alternate sign.  On each piece the shape is the principal hump of the
// asymmetric problem (breakpoint t0 for positive humps, 1 - t0 for negative
// ones, the weights swapping roles under reflection of sign).
class PiecewisePSolution : public Profile {
 public:
  PiecewisePSolution(const ProblemParams& prm,
                     std::vector<SolutionPiece> pieces,
                     std::shared_ptr<const PTrigTable> table,
                     double global_scale = 1.0);

  double lo() const override { return pieces_.front().t_l; }
  double hi() const override { return pieces_.back().t_r; }
  double value(double t) const override;
  double slope(double t) const override;
  // joints between pieces plus each hump's crest abscissa
  std::vector<double> kinks() const override;

  const std::vector<SolutionPiece>& pieces() const { return pieces_; }
  double global_scale() const { return scale_; }
  const ProblemParams& params() const { return prm_; }
  const PTrigTable& table() const { return *table_; }

 private:
  const SolutionPiece& piece_at(double t, double* sigma) const;

  ProblemParams prm_;
  std::vector<SolutionPiece> pieces_;
  std::shared_ptr<const PTrigTable> table_;
  double scale_;
  double t0_;  // a / (a + b)
};

// Partition of [0, L] into P positive and N negative hump supports,
// alternating in sign.  Positive intervals have length l_mu, negative ones
// l_nu; the lengths close up to L exactly when (mu, nu) lies on the curve.
struct CoverInterval {
  double t_l, t_r;
  int sign;
};

struct InterspersedCover {
  std::vector<CoverInterval> intervals;
  int P = 0;
  int N = 0;
  double l_mu = 0.0;  // width of each positive interval
  double l_nu = 0.0;  // width of each negative interval
};

// Principal positive eigenfunction on (0, L): a single hump with unit
// amplitude, peak c_p at t0 * L.
PiecewisePSolution build_principal(const ProblemParams& prm,
                                   std::shared_ptr<const PTrigTable> table,
                                   double global_scale = 1.0);

// k-th eigenfunction: k humps of equal width L / k, alternating sign from
// start_sign, equal amplitudes.
PiecewisePSolution build_kth(const ProblemParams& prm, int k, int start_sign,
                             std::shared_ptr<const PTrigTable> table,
                             double global_scale = 1.0);

// Find hump counts (P, N) compatible with start_sign for which (mu, nu)
// satisfies the curve equation within rel_tol, and lay out the alternating
// cover.  Points on the trivial lines yield a single-hump cover when
// start_sign matches.  Throws NotOnSpectrumError (with the two nearest
// candidates) when no admissible curve fits.
InterspersedCover build_cover(const ProblemParams& prm, double mu, double nu,
                              int start_sign, double rel_tol = 1e-9);

// Solution with slope weights (a, b) and jump parameters (mu, nu): humps of
// the cover, each with amplitude equal to its width so that slopes match at
// the joints.
PiecewisePSolution build_fucik_solution(const ProblemParams& prm, double mu,
                                        double nu, int start_sign,
                                        std::shared_ptr<const PTrigTable> table,
                                        double global_scale = 1.0,
                                        double rel_tol = 1e-9);

// Even reflection of src restricted to [lo, hi] about t = hi, giving a
// profile on [lo, 2 hi - lo].  Requires src(lo) ~ 0 and src'(hi) ~ 0.
class ReflectedFragment : public Profile {
 public:
  ReflectedFragment(std::shared_ptr<const Profile> src, double lo, double hi);

  double lo() const override { return lo_; }
  double hi() const override { return 2.0 * center_ - lo_; }
  double value(double t) const override;
  double slope(double t) const override;
  std::vector<double> kinks() const override;

 private:
  std::shared_ptr<const Profile> src_;
  double lo_;
  double center_;
};

// Validate the reflection preconditions (vanishing value at lo, vanishing
// slope at hi) before constructing the fragment; a violation raises
// std::domain_error naming the offending endpoint.
ReflectedFragment reflect_extend(std::shared_ptr<const Profile> src, double lo,
                                 double hi, double tol = 1e-9);

}  // namespace pspectra
