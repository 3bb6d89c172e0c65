#include "pspectra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pspectra/errors.hpp"
#include "pspectra/quadrature.hpp"

namespace pspectra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// cubic Hermite value at relative abscissa th in [0, 1]
double hermite(double th, double y0, double m0, double y1, double m1,
               double h) {
  const double t2 = th * th;
  const double t3 = t2 * th;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + th) * h * m0 +
         (3.0 * t2 - 2.0 * t3) * y1 + (t3 - t2) * h * m1;
}

// precomputed powers for the autonomous system u' = fi(v), v' = g(u)
struct JumpSystem {
  double mu, nu, pm1, inv_pm1, ap, bp, pp, app, bpp, p;

  JumpSystem(const ProblemParams& prm, double mu_, double nu_)
      : mu(mu_), nu(nu_), pm1(prm.p - 1.0), inv_pm1(1.0 / (prm.p - 1.0)),
        ap(std::pow(prm.a, prm.p)), bp(std::pow(prm.b, prm.p)),
        pp(prm.p / (prm.p - 1.0)), app(std::pow(prm.a, prm.p / (prm.p - 1.0))),
        bpp(std::pow(prm.b, prm.p / (prm.p - 1.0))), p(prm.p) {}

  double fi(double v) const {
    return v >= 0.0 ? std::pow(v / ap, inv_pm1) : -std::pow(-v / bp, inv_pm1);
  }
  double g(double u) const {
    return u >= 0.0 ? -mu * std::pow(u, pm1) : nu * std::pow(-u, pm1);
  }
  double energy(double u, double v) const {
    const double kin = v >= 0.0 ? std::pow(v, pp) / app : std::pow(-v, pp) / bpp;
    const double pot = u >= 0.0 ? mu * std::pow(u, p) : nu * std::pow(-u, p);
    return (pm1 / p) * kin + pot / p;
  }

  void rk4(double u, double v, double h, double* u1, double* v1,
           double* du0, double* dv0, double* du1, double* dv1) const {
    const double k1u = fi(v), k1v = g(u);
    const double k2u = fi(v + 0.5 * h * k1v), k2v = g(u + 0.5 * h * k1u);
    const double k3u = fi(v + 0.5 * h * k2v), k3v = g(u + 0.5 * h * k2u);
    const double k4u = fi(v + h * k3v), k4v = g(u + h * k3u);
    *u1 = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    *v1 = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    *du0 = k1u;
    *dv0 = k1v;
    *du1 = fi(*v1);
    *dv1 = g(*u1);
  }
};

// locate the sign change of the dense cubic for u inside one step
double bisect_zero_theta(double u0, double m0, double u1, double m1,
                         double h) {
  double a = 0.0, b = 1.0;
  const bool pos = u0 > 0.0;
  while ((b - a) * h > 1e-12) {
    const double mid = 0.5 * (a + b);
    const double fm = hermite(mid, u0, m0, u1, m1, h);
    if (fm != 0.0 && (fm > 0.0) == pos)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

// outcome of re-integrating one interval with a graded micro-step mesh:
// final state plus the sign-flip pattern of u and v across the micro-steps
// (1-based indices of the first/last flip, n_micro total steps)
struct GradedStats {
  double u = 0.0, v = 0.0;
  int u_flips = 0, v_flips = 0;
  int first_u_flip = 0, last_u_flip = 0;
  int first_v_flip = 0, last_v_flip = 0;
  int n_micro = 0;
};

// integrate (u, v) over an interval of length len with 2*m RK4 micro-steps
// whose sizes shrink quadratically toward both endpoints; the vector field
// loses smoothness on the manifolds u = 0 and v = 0, so intervals are split
// at located events and the clustering confines the order loss to a
// vanishing neighborhood of the endpoint that sits on the manifold
GradedStats rk4_graded(const JumpSystem& sys, double u, double v, double len,
                       int m) {
  GradedStats st;
  st.n_micro = 2 * m;
  double prev_f = 0.0;
  for (int i = 1; i <= 2 * m; ++i) {
    const double r = static_cast<double>(i <= m ? i : 2 * m - i) /
                     static_cast<double>(m);
    const double f = i <= m ? 0.5 * r * r : 1.0 - 0.5 * r * r;
    double u1, v1, du0, dv0, du1, dv1;
    sys.rk4(u, v, (f - prev_f) * len, &u1, &v1, &du0, &dv0, &du1, &dv1);
    prev_f = f;
    if ((u > 0.0 && u1 < 0.0) || (u < 0.0 && u1 > 0.0)) {
      ++st.u_flips;
      if (st.first_u_flip == 0) st.first_u_flip = i;
      st.last_u_flip = i;
    }
    if ((v > 0.0 && v1 < 0.0) || (v < 0.0 && v1 > 0.0)) {
      ++st.v_flips;
      if (st.first_v_flip == 0) st.first_v_flip = i;
      st.last_v_flip = i;
    }
    u = u1;
    v = v1;
  }
  st.u = u;
  st.v = v;
  return st;
}

void check_shot_params(const ProblemParams& prm, double mu, double nu,
                       double s0, double t_end, double step) {
  prm.validate();
  if (!(mu > 0.0) || !(nu > 0.0))
    throw std::domain_error("shooting requires mu, nu > 0");
  if (s0 == 0.0) throw std::domain_error("initial slope must be nonzero");
  if (!(t_end > 0.0)) throw std::domain_error("t_end must be positive");
  if (step < 0.0) throw std::domain_error("step must be positive");
}

}  // namespace

GridProfile::GridProfile(GridFunction g) : g_(std::move(g)) {
  if (g_.n() < 16) throw std::domain_error("grid needs at least 17 nodes");
  if (!(g_.L > 0.0)) throw std::domain_error("grid length must be positive");
  if (g_.values.front() != 0.0 || g_.values.back() != 0.0)
    throw std::domain_error("boundary values must be pinned to 0");
}

int GridProfile::cell_at(double t) const {
  const int n = g_.n();
  const double x = t / g_.L * n;
  return std::clamp(static_cast<int>(std::floor(x)), 0, n - 1);
}

double GridProfile::value(double t) const {
  const int i = cell_at(t);
  const double h = g_.L / g_.n();
  const double th = (t - i * h) / h;
  return (1.0 - th) * g_.values[i] + th * g_.values[i + 1];
}

double GridProfile::slope(double t) const {
  const int i = cell_at(t);
  const double h = g_.L / g_.n();
  return (g_.values[i + 1] - g_.values[i]) / h;
}

std::vector<double> GridProfile::kinks() const {
  std::vector<double> out;
  const int n = g_.n();
  out.reserve(n - 1);
  for (int i = 1; i < n; ++i) out.push_back(g_.node(i));
  return out;
}

double flux(const ProblemParams& prm, double s) {
  const double pm1 = prm.p - 1.0;
  if (s >= 0.0) return std::pow(prm.a, prm.p) * std::pow(s, pm1);
  return -std::pow(prm.b, prm.p) * std::pow(-s, pm1);
}

double flux_inverse(const ProblemParams& prm, double v) {
  const double inv = 1.0 / (prm.p - 1.0);
  if (v >= 0.0) return std::pow(v / std::pow(prm.a, prm.p), inv);
  return -std::pow(-v / std::pow(prm.b, prm.p), inv);
}

double hamiltonian(const ProblemParams& prm, double mu, double nu, double u,
                   double v) {
  if (!(mu > 0.0) || !(nu > 0.0))
    throw std::domain_error("hamiltonian requires mu, nu > 0");
  return JumpSystem(prm, mu, nu).energy(u, v);
}

ShootingResult shoot(const ProblemParams& prm, double mu, double nu, double s0,
                     double t_end, double step) {
  check_shot_params(prm, mu, nu, s0, t_end, step);
  if (step == 0.0) step = prm.L * 1e-4;

  const JumpSystem sys(prm, mu, nu);
  const long n_steps = static_cast<long>(std::ceil(t_end / step));
  const double h = t_end / static_cast<double>(n_steps);

  ShootingResult out;
  double u = 0.0, v = flux(prm, s0);
  const double e0 = sys.energy(u, v);
  int cur = s0 > 0.0 ? 1 : -1;

  for (long i = 0; i < n_steps; ++i) {
    const double t = h * static_cast<double>(i);
    double u1, v1, du0, dv0, du1, dv1;
    sys.rk4(u, v, h, &u1, &v1, &du0, &dv0, &du1, &dv1);

    const bool crossed = u1 == 0.0 || (cur > 0 ? u1 < 0.0 : u1 > 0.0);
    double th_u = kInf;
    if (crossed) {
      double z, sl;
      if (u1 == 0.0) {
        th_u = 1.0;
        z = t + h;
        sl = sys.fi(v1);
      } else {
        th_u = bisect_zero_theta(u, du0, u1, du1, h);
        z = t + th_u * h;
        sl = sys.fi(hermite(th_u, v, dv0, v1, dv1, h));
      }
      out.zeros.push_back(z);
      out.slopes_at_zeros.push_back(sl);
      out.humps.push_back(cur);
      cur = -cur;
    }

    // the vector field loses smoothness on u = 0 and v = 0, so a plain
    // step that touches either manifold drops below fourth order and leaks
    // energy; steps containing or adjacent to an event are re-integrated on
    // graded micro-meshes split at the located event, and the refined state
    // is kept only when its sign-flip pattern confirms a cleanly resolved
    // single event (a step too coarse to resolve the dynamics keeps the
    // plain value and is caught by the drift gate below)
    const bool crested = (v > 0.0 && v1 < 0.0) || (v < 0.0 && v1 > 0.0) ||
                         (v != 0.0 && v1 == 0.0);
    const bool near_zero = std::abs(u) <= 2.0 * h * std::abs(du0) ||
                           std::abs(u1) <= 2.0 * h * std::abs(du1);
    const bool near_crest = std::abs(v) <= 2.0 * h * std::abs(dv0) ||
                            std::abs(v1) <= 2.0 * h * std::abs(dv1);
    if (crossed || crested || near_zero || near_crest || i == 0) {
      double th_v = kInf;
      if (crested)
        th_v = v1 == 0.0 ? 1.0 : bisect_zero_theta(v, dv0, v1, dv1, h);
      const double th = std::min(th_u, th_v);
      bool accepted = false;
      if (th > 1e-6 && th < 1.0 - 1e-6) {
        const GradedStats A = rk4_graded(sys, u, v, th * h, 16);
        const GradedStats B = rk4_graded(sys, A.u, A.v, (1.0 - th) * h, 16);
        // the half ending at the event may flip the event component only in
        // its last micro-step, the half starting there only in its first;
        // the other component must not flip at all
        bool ok;
        if (th_u <= th_v)
          ok = (A.u_flips == 0 ||
                (A.u_flips == 1 && A.first_u_flip == A.n_micro)) &&
               (B.u_flips == 0 || (B.u_flips == 1 && B.first_u_flip == 1)) &&
               A.v_flips == 0 && B.v_flips == 0;
        else
          ok = (A.v_flips == 0 ||
                (A.v_flips == 1 && A.first_v_flip == A.n_micro)) &&
               (B.v_flips == 0 || (B.v_flips == 1 && B.first_v_flip == 1)) &&
               A.u_flips == 0 && B.u_flips == 0;
        if (ok) {
          if (crossed && th_u <= th_v)
            out.slopes_at_zeros.back() = sys.fi(A.v);
          u1 = B.u;
          v1 = B.v;
          accepted = true;
        }
      }
      if (!accepted) {
        const GradedStats R = rk4_graded(sys, u, v, h, 16);
        const bool ok =
            (R.u_flips == 0 ||
             (R.u_flips == 1 &&
              (R.first_u_flip == 1 || R.first_u_flip == R.n_micro))) &&
            (R.v_flips == 0 ||
             (R.v_flips == 1 &&
              (R.first_v_flip == 1 || R.first_v_flip == R.n_micro)));
        if (ok) {
          u1 = R.u;
          v1 = R.v;
        }
      }
    }

    // the refined step may reveal that the plain step misjudged a crossing
    // right at the step boundary: drop the record if u ends on its old side
    if (crossed && u1 != 0.0 &&
        ((u1 > 0.0 && out.humps.back() > 0) ||
         (u1 < 0.0 && out.humps.back() < 0))) {
      out.zeros.pop_back();
      out.slopes_at_zeros.pop_back();
      out.humps.pop_back();
      cur = -cur;
    }

    u = u1;
    v = v1;
    const double drift = std::abs(sys.energy(u, v) - e0) / e0;
    if (drift > out.energy_drift) out.energy_drift = drift;
  }
  out.end_value = u;

  if (out.energy_drift > 1e-3) {
    std::ostringstream os;
    os << "energy drift " << out.energy_drift
       << " exceeds 1e-3; integrate with a step smaller than " << h;
    throw AccuracyError(os.str());
  }
  return out;
}

namespace {

// first zero of the shot with mu = nu = lam, or +inf if none before t_cap;
// stops integrating at the first crossing
double first_zero_of_shot(const ProblemParams& prm, double lam, double t_cap,
                          double step) {
  const JumpSystem sys(prm, lam, lam);
  const long n_steps = static_cast<long>(std::ceil(t_cap / step));
  const double h = t_cap / static_cast<double>(n_steps);
  double u = 0.0, v = flux(prm, 1.0);
  for (long i = 0; i < n_steps; ++i) {
    double u1, v1, du0, dv0, du1, dv1;
    sys.rk4(u, v, h, &u1, &v1, &du0, &dv0, &du1, &dv1);
    if (u1 <= 0.0) {
      if (u1 == 0.0) return h * static_cast<double>(i + 1);
      const double th = bisect_zero_theta(u, du0, u1, du1, h);
      return h * static_cast<double>(i) + th * h;
    }
    u = u1;
    v = v1;
  }
  return kInf;
}

}  // namespace

double first_eigenvalue_shooting(const ProblemParams& prm, double tol) {
  prm.validate();
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");
  const double step = prm.L * 1e-4;
  const double t_cap = 2.2 * prm.L;

  double lo = 1e-6, hi = 1e9;
  if (!(first_zero_of_shot(prm, lo, t_cap, step) > prm.L))
    throw SearchError("first zero at lambda = 1e-6 already precedes L");
  if (!(first_zero_of_shot(prm, hi, t_cap, step) < prm.L))
    throw SearchError("first zero at lambda = 1e9 still exceeds L");

  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double t1 = first_zero_of_shot(prm, mid, t_cap, step);
    if (std::abs(t1 - prm.L) <= tol) return mid;
    if (t1 > prm.L)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4e-16 * hi) break;
  }
  throw AccuracyError(
      "eigenvalue bisection exhausted its bracket before matching L within "
      "tol");
}

namespace {

// discrete Rayleigh machinery on the uniform n-cell grid over [0, L]

double trap_norm_pow(const std::vector<double>& u, double h, double p) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    s += std::pow(std::abs(u[i]), p);
  return h * s;
}

void normalize_grid(std::vector<double>* u, double h, double p) {
  const double c = std::pow(trap_norm_pow(*u, h, p), 1.0 / p);
  for (double& x : *u) x /= c;
}

double rayleigh_objective(const ProblemParams& prm,
                          const std::vector<double>& u, double h) {
  const double ap = std::pow(prm.a, prm.p), bp = std::pow(prm.b, prm.p);
  double s = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double d = (u[i] - u[i - 1]) / h;
    s += d >= 0.0 ? ap * std::pow(d, prm.p) : bp * std::pow(-d, prm.p);
  }
  return h * s;
}

// gradient of the quotient at a normalized iterate (interior entries only)
void rayleigh_gradient(const ProblemParams& prm, const std::vector<double>& u,
                       double h, double q, std::vector<double>* g) {
  const std::size_t n = u.size() - 1;
  g->assign(u.size(), 0.0);
  const double p = prm.p;
  for (std::size_t i = 1; i < n; ++i) {
    const double dl = (u[i] - u[i - 1]) / h;
    const double dr = (u[i + 1] - u[i]) / h;
    const double sgn_u = u[i] >= 0.0 ? 1.0 : -1.0;
    (*g)[i] = p * (flux(prm, dl) - flux(prm, dr)) -
              q * p * h * std::pow(std::abs(u[i]), p - 1.0) * sgn_u;
  }
}

// minimize on one grid; appends accepted objective values to history
void descend_level(const ProblemParams& prm, std::vector<double>* u,
                   int max_iter, double tol, int* iterations,
                   std::vector<double>* history, bool* converged) {
  const double h = prm.L / static_cast<double>(u->size() - 1);
  normalize_grid(u, h, prm.p);
  double q = rayleigh_objective(prm, *u, h);
  std::vector<double> g, g_new, w;
  rayleigh_gradient(prm, *u, h, q, &g);
  std::vector<double> u_prev, g_prev;
  *converged = false;

  for (int it = 0; it < max_iter; ++it) {
    double gg = 0.0;
    for (double x : g) gg += x * x;

    // Barzilai-Borwein trial step when history is available, else unit step
    double alpha = 1.0;
    if (!u_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double si = (*u)[i] - u_prev[i];
        ss += si * si;
        sy += si * (g[i] - g_prev[i]);
      }
      if (sy > 0.0 && std::isfinite(ss / sy))
        alpha = std::clamp(ss / sy, 1e-14, 1e8);
    }

    bool accepted = false;
    double q_new = q;
    for (int back = 0; back < 60; ++back) {
      w = *u;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= alpha * g[i];
      const double c = trap_norm_pow(w, h, prm.p);
      if (c > 0.0 && std::isfinite(c)) {
        const double inv = 1.0 / std::pow(c, 1.0 / prm.p);
        for (double& x : w) x *= inv;
        q_new = rayleigh_objective(prm, w, h);
        if (std::isfinite(q_new) && q_new <= q - 1e-4 * alpha * gg) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) return;  // no descent step found: report, don't throw

    u_prev = *u;
    g_prev = g;
    *u = w;
    ++*iterations;
    if (history) history->push_back(q_new);

    rayleigh_gradient(prm, *u, h, q_new, &g_new);
    g.swap(g_new);

    const double decrease = q - q_new;
    q = q_new;
    if (decrease <= tol * std::max(1.0, std::abs(q))) {
      *converged = true;
      return;
    }
  }
}

}  // namespace

RayleighResult rayleigh_minimize(const ProblemParams& prm, int n, int max_iter,
                                 double tol) {
  prm.validate();
  if (n < 64) throw std::domain_error("grid size n must be >= 64");
  if (max_iter < 1) throw std::domain_error("max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");

  std::vector<int> sizes{n};
  while (sizes.back() > 160) sizes.push_back(sizes.back() / 2);
  std::reverse(sizes.begin(), sizes.end());

  RayleighResult res;
  std::vector<double> u(static_cast<std::size_t>(sizes.front()) + 1, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 1; i < sizes.front(); ++i)
    u[i] = std::sin(pi * i / sizes.front());

  for (std::size_t lvl = 0; lvl < sizes.size(); ++lvl) {
    if (lvl > 0) {
      // linear prolongation onto the finer grid
      const int nc = sizes[lvl - 1], nf = sizes[lvl];
      std::vector<double> fine(static_cast<std::size_t>(nf) + 1, 0.0);
      for (int i = 1; i < nf; ++i) {
        const double x = static_cast<double>(i) * nc / nf;
        const int j = std::min(static_cast<int>(std::floor(x)), nc - 1);
        const double th = x - j;
        fine[i] = (1.0 - th) * u[j] + th * u[j + 1];
      }
      u.swap(fine);
    }
    const bool last = lvl + 1 == sizes.size();
    descend_level(prm, &u, max_iter, tol, &res.iterations,
                  last ? &res.objective_history : nullptr, &res.converged);
  }

  const double h = prm.L / n;
  normalize_grid(&u, h, prm.p);
  res.value = rayleigh_objective(prm, u, h);
  u.front() = 0.0;
  u.back() = 0.0;
  res.minimizer = GridFunction{prm.L, std::move(u)};
  return res;
}

double weak_residual(const ProblemParams& prm, const Profile& sol, double mu,
                     double nu, int n_test) {
  prm.validate();
  if (n_test < 8) throw std::domain_error("need at least 8 test functions");
  if (!(mu > 0.0) || !(nu > 0.0))
    throw std::domain_error("weak residual requires mu, nu > 0");

  const double lo = sol.lo(), hi = sol.hi();
  const double span = hi - lo;
  const double w = span / (n_test + 1);
  std::vector<double> kinks = sol.kinks();
  std::sort(kinks.begin(), kinks.end());

  const double pm1 = prm.p - 1.0;
  const auto rhs = [&](double u) {
    return u >= 0.0 ? mu * std::pow(u, pm1) : -nu * std::pow(-u, pm1);
  };

  double max_r = 0.0, max_flux = 0.0;
  for (int j = 1; j <= n_test; ++j) {
    const double c = lo + j * w;
    double r = 0.0;
    for (int half = 0; half < 2; ++half) {
      const double x0 = half == 0 ? c - w : c;
      const double x1 = half == 0 ? c : c + w;
      const double dphi = (half == 0 ? 1.0 : -1.0) / w;
      std::vector<double> cuts{x0};
      for (double k : kinks)
        if (k > x0 + 1e-15 * span && k < x1 - 1e-15 * span) cuts.push_back(k);
      cuts.push_back(x1);
      for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
        r += quad::gauss_legendre(
            [&](double t) {
              const double fl = flux(prm, sol.slope(t));
              const double af = std::abs(fl);
              if (af > max_flux) max_flux = af;
              const double phi = 1.0 - std::abs(t - c) / w;
              return fl * dphi - rhs(sol.value(t)) * phi;
            },
            cuts[q], cuts[q + 1], 16);
      }
    }
    if (std::abs(r) > max_r) max_r = std::abs(r);
  }
  return max_r / (std::max(max_flux, 1e-300) * span);
}

PiconeResult picone_residual(const ProblemParams& prm, double u, double du,
                             double v, double dv) {
  prm.validate();
  if (!(v > 0.0)) throw std::domain_error("picone form requires v > 0");
  if (u < 0.0) throw std::domain_error("picone form requires u >= 0");
  const double p = prm.p;
  const auto H = [&](double t) {
    return prm.a * std::max(t, 0.0) + prm.b * std::max(-t, 0.0);
  };

  const double hp_du = std::pow(H(du), p);
  // (u^p / v^{p-1})' expanded pointwise; flux(dv) = H^{p-1}(dv) H'(dv),
  // extended by continuity to 0 at dv = 0
  const double dquot = p * std::pow(u, p - 1.0) * du / std::pow(v, p - 1.0) -
                       (p - 1.0) * std::pow(u, p) * dv / std::pow(v, p);
  PiconeResult res;
  res.R = hp_du - dquot * flux(prm, dv);
  if (std::abs(dv) > 1e-12) {
    const double hp_dv = std::pow(H(dv), p);
    res.P = hp_du - std::pow(u / v, p) * hp_dv -
            p * std::pow(u / v, p - 1.0) * hp_dv * (du / dv - u / v);
    res.P_defined = true;
  }
  return res;
}

}  // namespace pspectra
