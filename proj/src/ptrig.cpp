#include "pspectra/ptrig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "pspectra/errors.hpp"
#include "pspectra/quadrature.hpp"
#include "pspectra/version.hpp"

namespace pspectra {

namespace {

void check_exponent(double p) {
  if (!(p >= kMinExponent && p <= kMaxExponent))
    throw std::domain_error(
        "exponent p must lie in [1.05, 20], got p = " + std::to_string(p));
}

// (1 - t^p)^(-1/p) for t in [0, 1); 1 - t^p formed through expm1/log to stay
// accurate when t is close to 1
double arc_integrand(double p, double t) {
  if (t <= 0.0) return 1.0;
  const double one_minus_tp = -std::expm1(p * std::log(t));
  return std::pow(one_minus_tp, -1.0 / p);
}

// same, with the distance 1 - t supplied exactly
double arc_integrand_near_one(double p, double dist_to_one) {
  const double one_minus_tp = -std::expm1(p * std::log1p(-dist_to_one));
  return std::pow(one_minus_tp, -1.0 / p);
}

// complementary arclength: Psi(c) = int_0^c u^(p-2) (1 - u^p)^((1-p)/p) du;
// pi_p/2 - s = Psi((1 - x^p)^(1/p)) where x = sin_p(s)
double psi_integral(double p, double c) {
  if (c <= 0.0) return 0.0;
  return quad::tanh_sinh(
      [p](double u, double dl, double) {
        // u == dl since the interval starts at 0; u^(p-2) may be singular
        const double g = std::pow(1.0 - std::pow(u, p), (1.0 - p) / p);
        return std::pow(dl, p - 2.0) * g;
      },
      0.0, c);
}

// Psi via the substitution u = c w^(1/(p-1)), which removes the u = 0
// singularity; valid and smooth whenever c^p << 1.  Used by the crest patch
// where speed matters and c is small.
double psi_small_c(double p, double c) {
  if (c <= 0.0) return 0.0;
  const double cp = std::pow(c, p);
  const double expo = (1.0 - p) / p;
  const double integral = quad::gauss_legendre(
      [&](double w) { return std::pow(1.0 - cp * std::pow(w, p / (p - 1.0)), expo); },
      0.0, 1.0, 16);
  return std::pow(c, p - 1.0) / (p - 1.0) * integral;
}

double psi_derivative(double p, double c) {
  return std::pow(c, p - 2.0) * std::pow(1.0 - std::pow(c, p), (1.0 - p) / p);
}

constexpr std::uint64_t kCacheMagic = 0x5054524947544231ull;  // "PTRIGTB1"

}  // namespace

double compute_pi_p(double p) {
  check_exponent(p);
  const double integral = quad::tanh_sinh(
      [p](double, double, double dr) { return arc_integrand_near_one(p, dr); },
      0.0, 1.0);
  return 2.0 * integral;
}

double lambda_k_symmetric(double p, double L, int k) {
  check_exponent(p);
  if (!(L > 0.0)) throw std::domain_error("interval length L must be positive");
  if (k < 1) throw std::domain_error("eigenvalue index k must be >= 1");
  return (p - 1.0) * std::pow(k * compute_pi_p(p) / L, p);
}

PTrigTable PTrigTable::build(double p, int resolution) {
  check_exponent(p);
  if (resolution < kMinResolution)
    throw std::domain_error("table resolution must be >= 64, got " +
                            std::to_string(resolution));

  PTrigTable t;
  t.p_ = p;
  t.pi_p_ = compute_pi_p(p);
  const double qp = 0.5 * t.pi_p_;
  const int m = resolution - 1;  // cell count

  t.x_.resize(resolution);
  t.s_.resize(resolution);

  // Amplitudes are uniform; arclengths come from direct quadrature.  Above
  // x_split the complementary integral is used so that no evaluation point
  // approaches the singular end of the arclength integrand.
  const double x_split = std::pow(2.0, -1.0 / p);
  t.x_[0] = 0.0;
  t.s_[0] = 0.0;
  t.x_[m] = 1.0;
  t.s_[m] = qp;
  for (int j = 1; j < m; ++j) {
    const double x = static_cast<double>(j) / m;
    t.x_[j] = x;
    if (x <= x_split) {
      t.s_[j] = quad::tanh_sinh(
          [p](double u, double, double) { return arc_integrand(p, u); }, 0.0,
          x);
    } else {
      const double delta = static_cast<double>(m - j) / m;  // 1 - x, exact
      const double c = std::pow(-std::expm1(p * std::log1p(-delta)), 1.0 / p);
      t.s_[j] = qp - psi_integral(p, c);
    }
  }
  t.h_ = qp / m;  // mean spacing; lookups use binary search, not this
  t.finish_derivatives();

  // c_p from || sin_p(pi_p t) ||_p on (0,1); analytically equal to p^(1/p)
  const double mean_power =
      (2.0 / t.pi_p_) * quad::tanh_sinh(
                            [&t, p](double s, double, double) {
                              return std::pow(t.sin_p(s), p);
                            },
                            0.0, qp, 1e-13);
  t.c_p_ = std::pow(mean_power, -1.0 / p);
  return t;
}

void PTrigTable::finish_derivatives() {
  const int n = static_cast<int>(x_.size());
  d_.assign(n, 0.0);
  d_[0] = 1.0;
  for (int j = 1; j < n - 1; ++j) {
    // (1 - x^p)^(1/p) with 1 - x = (n-1-j)/(n-1) exact
    const double delta = static_cast<double>(n - 1 - j) / (n - 1);
    d_[j] = std::pow(-std::expm1(p_ * std::log1p(-delta)), 1.0 / p_);
  }
  d_[n - 1] = 0.0;
  // Fritsch-Carlson cap keeps each Hermite cell monotone.
  for (int j = 0; j + 1 < n; ++j) {
    const double ds = s_[j + 1] - s_[j];
    const double secant = (x_[j + 1] - x_[j]) / ds;
    d_[j] = std::min(d_[j], 3.0 * secant);
    d_[j + 1] = std::min(d_[j + 1], 3.0 * secant);
  }
}

double PTrigTable::arc_between(double xa, double xb) const {
  if (xb == xa) return 0.0;
  const double p = p_;
  return quad::gauss_legendre(
      [p](double u) { return arc_integrand(p, u); }, xa, xb, 16);
}

PTrigTable::Eval PTrigTable::crest_invert(double tau) const {
  // solve Psi(c) = tau on (0, c_top]; the last table cell owns this branch
  const int n = static_cast<int>(x_.size());
  const double c_top = std::pow(
      -std::expm1(p_ * std::log1p(-1.0 / static_cast<double>(n - 1))),
      1.0 / p_);
  const double tau_top = 0.5 * pi_p_ - s_[n - 2];
  if (tau <= 0.0) return {1.0, 0.0};

  double lo = 0.0, hi = c_top;
  double c = c_top * std::pow(tau / tau_top, 1.0 / (p_ - 1.0));
  c = std::min(std::max(c, 1e-300), c_top);
  for (int it = 0; it < 60; ++it) {
    const double f = psi_small_c(p_, c) - tau;
    if (f > 0.0) hi = c; else lo = c;
    if (std::abs(f) <= 8e-16 * pi_p_) break;
    const double step = f / psi_derivative(p_, c);
    double next = c - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == c) break;
    c = next;
  }
  const double x = std::pow(-std::expm1(p_ * std::log(c)), 1.0 / p_);
  return {x, c};
}

PTrigTable::Eval PTrigTable::invert(double s) const {
  const int n = static_cast<int>(x_.size());
  const double qp = 0.5 * pi_p_;
  if (s <= 0.0) return {0.0, 1.0};
  if (s >= qp) return {1.0, 0.0};

  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  int j = static_cast<int>(it - s_.begin()) - 1;
  j = std::clamp(j, 0, n - 2);
  if (s == s_[j]) return {x_[j], d_original(j)};
  if (j == n - 2) return crest_invert(qp - s);

  // monotone cubic Hermite guess for x(s) on the cell
  const double ds = s_[j + 1] - s_[j];
  const double th = (s - s_[j]) / ds;
  const double th2 = th * th, th3 = th2 * th;
  double x = x_[j] * (2 * th3 - 3 * th2 + 1) + ds * d_[j] * (th3 - 2 * th2 + th) +
             x_[j + 1] * (-2 * th3 + 3 * th2) + ds * d_[j + 1] * (th3 - th2);
  x = std::clamp(x, x_[j], x_[j + 1]);

  // Newton polish on the local arclength; bisection fallback keeps the
  // iterate inside the cell bracket
  double lo = x_[j], hi = x_[j + 1];
  const double target = s - s_[j];
  for (int iter = 0; iter < 8; ++iter) {
    const double f = arc_between(x_[j], x) - target;
    if (f > 0.0) hi = x; else lo = x;
    if (std::abs(f) <= 4e-16 * pi_p_) break;
    const double slope_here =
        std::pow(-std::expm1(p_ * std::log(x)), 1.0 / p_);  // dx/ds at x
    double next = x - f * slope_here;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
    if (iter >= 1 && hi - lo <= 1e-16 * (1.0 + x)) break;
  }
  const double cosv =
      x > 0.0 ? std::pow(-std::expm1(p_ * std::log(x)), 1.0 / p_) : 1.0;
  return {x, cosv};
}

// exact slope magnitude at a node (bypasses the Fritsch-Carlson cap)
double PTrigTable::d_original(int j) const {
  const int n = static_cast<int>(x_.size());
  if (j <= 0) return 1.0;
  if (j >= n - 1) return 0.0;
  const double delta = static_cast<double>(n - 1 - j) / (n - 1);
  return std::pow(-std::expm1(p_ * std::log1p(-delta)), 1.0 / p_);
}

double PTrigTable::sin_p(double s) const {
  const double period = 2.0 * pi_p_;
  double y = std::fmod(s, period);
  if (y < 0.0) y += period;
  double sign = 1.0;
  if (y >= pi_p_) {
    y -= pi_p_;
    sign = -1.0;
  }
  if (y > 0.5 * pi_p_) y = pi_p_ - y;
  return sign * invert(y).x;
}

double PTrigTable::sin_p_prime(double s) const {
  const double period = 2.0 * pi_p_;
  double z = std::fmod(s, period);
  if (z < 0.0) z += period;
  // the derivative is negative on (pi_p/2, 3 pi_p/2) mod 2 pi_p
  const double dsign = (z > 0.5 * pi_p_ && z < 1.5 * pi_p_) ? -1.0 : 1.0;
  if (z >= pi_p_) z -= pi_p_;
  if (z > 0.5 * pi_p_) z = pi_p_ - z;
  return dsign * invert(z).cos;
}

double PTrigTable::phi_p(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("phi_p argument must lie in [0, 1], got " +
                            std::to_string(t));
  return c_p_ * sin_p(pi_p_ * t);
}

double PTrigTable::phi_p_prime(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("phi_p argument must lie in [0, 1], got " +
                            std::to_string(t));
  return c_p_ * pi_p_ * sin_p_prime(pi_p_ * t);
}

void PTrigTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open table cache for writing: " + path);
  const std::uint64_t magic = kCacheMagic;
  const std::uint32_t version = kTableFormatVersion;
  const std::uint64_t res = x_.size();
  out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&p_), sizeof p_);
  out.write(reinterpret_cast<const char*>(&res), sizeof res);
  out.write(reinterpret_cast<const char*>(&pi_p_), sizeof pi_p_);
  out.write(reinterpret_cast<const char*>(&c_p_), sizeof c_p_);
  out.write(reinterpret_cast<const char*>(x_.data()),
            static_cast<std::streamsize>(x_.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s_.data()),
            static_cast<std::streamsize>(s_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write to table cache: " + path);
}

PTrigTable PTrigTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table cache: " + path);
  std::uint64_t magic = 0, res = 0;
  std::uint32_t version = 0;
  PTrigTable t;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&t.p_), sizeof t.p_);
  in.read(reinterpret_cast<char*>(&res), sizeof res);
  in.read(reinterpret_cast<char*>(&t.pi_p_), sizeof t.pi_p_);
  in.read(reinterpret_cast<char*>(&t.c_p_), sizeof t.c_p_);
  if (!in || magic != kCacheMagic)
    throw std::runtime_error("not a table cache file: " + path);
  if (version != kTableFormatVersion)
    throw std::runtime_error("table cache version mismatch in " + path);
  if (res < static_cast<std::uint64_t>(kMinResolution) || res > (1u << 26))
    throw std::runtime_error("table cache resolution out of range in " + path);
  t.x_.resize(res);
  t.s_.resize(res);
  in.read(reinterpret_cast<char*>(t.x_.data()),
          static_cast<std::streamsize>(res * sizeof(double)));
  in.read(reinterpret_cast<char*>(t.s_.data()),
          static_cast<std::streamsize>(res * sizeof(double)));
  if (!in) throw std::runtime_error("truncated table cache: " + path);
  check_exponent(t.p_);
  for (std::size_t j = 1; j < res; ++j)
    if (!(t.x_[j] > t.x_[j - 1] && t.s_[j] > t.s_[j - 1]))
      throw std::runtime_error("table cache nodes not monotone in " + path);
  t.h_ = 0.5 * t.pi_p_ / static_cast<double>(res - 1);
  t.finish_derivatives();
  return t;
}

}  // namespace pspectra
