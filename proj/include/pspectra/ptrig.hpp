#pragma once

#include <string>
#include <vector>

namespace pspectra {

// Supported exponent range; outside it the quadrature and inversion
// tolerances below are not guaranteed.
inline constexpr double kMinExponent = 1.05;
inline constexpr double kMaxExponent = 20.0;
inline constexpr int kMinResolution = 64;
inline constexpr int kDefaultResolution = 4096;

// pi_p = 2 * int_0^1 (1 - t^p)^(-1/p) dt, the half period of sin_p.
// Evaluated by tanh-sinh quadrature; the integrand's algebraic singularity
// at t = 1 is formed from the endpoint distance to avoid cancellation.
double compute_pi_p(double p);

// k-th Dirichlet eigenvalue (p-1) * (k * pi_p / L)^p of -(|u'|^{p-2} u')'
// on (0, L).
double lambda_k_symmetric(double p, double L, int k);

/**
 * Tabulated inverse of the arclength integral F_p(x) = int_0^x (1-s^p)^{-1/p} ds
 * on the quarter period, plus the constants derived from it.  All sin_p
 * evaluation goes through one of these tables.
 *
 * Amplitude nodes are uniform; the arclength at each node comes from
 * singularity-aware quadrature at build time.  Evaluation seeds a monotone
 * piecewise cubic between nodes and polishes with safeguarded Newton on a
 * local quadrature of F_p; the flat crest (where F_p' diverges) is owned by
 * the last cell and inverted through the complementary integral instead.
 */
class PTrigTable {
 public:
  static PTrigTable build(double p, int resolution = kDefaultResolution);

  double p() const { return p_; }
  int resolution() const { return static_cast<int>(x_.size()); }
  double pi_p() const { return pi_p_; }
  // normalization making || c_p sin_p(pi_p t) ||_p = 1 on (0,1);
  // computed by quadrature, equals p^{1/p} analytically
  double c_p() const { return c_p_; }
  const std::vector<double>& node_x() const { return x_; }
  const std::vector<double>& node_s() const { return s_; }

  // odd, 2 pi_p periodic, increasing from 0 to 1 on [0, pi_p/2]
  double sin_p(double s) const;
  // derivative of sin_p; satisfies |sin_p|^p + |sin_p'|^p = 1
  double sin_p_prime(double s) const;

  // phi_p(t) = c_p sin_p(pi_p t): principal Dirichlet eigenfunction on (0,1)
  // normalized to unit p-norm; t must lie in [0, 1]
  double phi_p(double t) const;
  double phi_p_prime(double t) const;

  // Binary cache; load reproduces the stored fields bit-exactly.
  void save(const std::string& path) const;
  static PTrigTable load(const std::string& path);

 private:
  PTrigTable() = default;
  void finish_derivatives();  // limited Hermite slopes from (x, s) nodes
  struct Eval {
    double x;    // sin_p value
    double cos;  // (1 - x^p)^{1/p}, the slope magnitude
  };
  Eval invert(double s) const;         // s in [0, pi_p/2]
  Eval crest_invert(double tau) const; // tau = pi_p/2 - s, small
  double arc_between(double xa, double xb) const;
  double d_original(int j) const;      // unlimited slope at node j

  double p_ = 0.0;
  double pi_p_ = 0.0;
  double c_p_ = 0.0;
  double h_ = 0.0;              // uniform arclength spacing
  std::vector<double> x_;       // amplitudes, x_0 = 0, x_{n-1} = 1
  std::vector<double> s_;       // arclengths, s_j = j h
  std::vector<double> d_;       // monotonicity-limited dx/ds at nodes
};

}  // namespace pspectra
