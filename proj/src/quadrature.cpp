#include "pspectra/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace pspectra::quad {

namespace {

constexpr double kPiHalf = 1.57079632679489661923;

// One symmetric pair of tanh-sinh samples at parameter theta >= 0.
// Returns w * (f(left point) + f(right point)); for theta == 0 the single
// midpoint sample is returned.  Terms whose endpoint distance underflows are
// dropped: the weight decay guarantees they are below rounding at that point.
double ts_pair(const SingularIntegrand& f, double mid, double half,
               double theta) {
  const double v = kPiHalf * std::sinh(theta);
  const double em = std::exp(-2.0 * v);            // e^{-2v}, v >= 0
  const double dn = 2.0 * em / (1.0 + em);         // 1 - tanh(v)
  const double w =
      kPiHalf * std::cosh(theta) * 4.0 * em / ((1.0 + em) * (1.0 + em));
  if (dn == 0.0 || w == 0.0) return 0.0;
  const double dnear = half * dn;                  // distance to nearer end
  const double dfar = 2.0 * half - dnear;
  const double xr = mid + (half - dnear);          // point near b
  if (theta == 0.0) return w * f(mid, half, half);
  const double xl = mid - (half - dnear);          // point near a
  const double fr = f(xr, dfar, dnear);
  const double fl = f(xl, dnear, dfar);
  double s = 0.0;
  if (std::isfinite(fr)) s += fr;
  if (std::isfinite(fl)) s += fl;
  return w * s;
}

}  // namespace

double tanh_sinh(const SingularIntegrand& f, double a, double b,
                 double rel_tol, int max_level) {
  if (!(b > a)) {
    if (b == a) return 0.0;
    throw std::invalid_argument("tanh_sinh: interval endpoints out of order");
  }
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double theta_max = 6.5;

  // compensated accumulation: the pair terms span many orders of magnitude
  double sum = 0.0, comp = 0.0;
  const auto add = [&sum, &comp](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };

  // level 0: h = 1
  double h = 1.0;
  add(ts_pair(f, mid, half, 0.0));
  for (int k = 1; k * h <= theta_max; ++k) add(ts_pair(f, mid, half, k * h));
  double prev = sum * h * half;

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // new points are the odd multiples of the refined h
    for (int k = 1; k * h <= theta_max; k += 2)
      add(ts_pair(f, mid, half, k * h));
    const double cur = sum * h * half;
    if (level >= 2 &&
        std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300))
      return cur;
    prev = cur;
  }
  return prev;
}

namespace {

// Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on the recurrence; accurate to machine precision.
std::vector<std::array<double, 2>> legendre_rule(int n) {
  std::vector<std::array<double, 2>> rule(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root (descending)
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    {
      // one clean-up pass so the weight uses the converged abscissa
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    rule[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return rule;
}

const std::vector<std::array<double, 2>>& rule_for(int n) {
  static const std::vector<std::array<double, 2>> r8 = legendre_rule(8);
  static const std::vector<std::array<double, 2>> r16 = legendre_rule(16);
  static const std::vector<std::array<double, 2>> r32 = legendre_rule(32);
  switch (n) {
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    default: throw std::invalid_argument("gauss_legendre: order must be 8, 16 or 32");
  }
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n) {
  const auto& rule = rule_for(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (const auto& nw : rule) s += nw[1] * f(mid + half * nw[0]);
  return s * half;
}

}  // namespace pspectra::quad
