#include "pspectra/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pspectra/errors.hpp"

namespace pspectra {

namespace {

void require_table(const ProblemParams& prm,
                   const std::shared_ptr<const PTrigTable>& table) {
  if (!table) throw std::invalid_argument("table must not be null");
  if (table->p() != prm.p) {
    std::ostringstream os;
    os << "table exponent " << table->p() << " does not match problem exponent "
       << prm.p;
    throw std::invalid_argument(os.str());
  }
}

void require_sign(int start_sign) {
  if (start_sign != 1 && start_sign != -1)
    throw std::domain_error("start_sign must be +1 or -1");
}

}  // namespace

PiecewisePSolution::PiecewisePSolution(const ProblemParams& prm,
                                       std::vector<SolutionPiece> pieces,
                                       std::shared_ptr<const PTrigTable> table,
                                       double global_scale)
    : prm_(prm),
      pieces_(std::move(pieces)),
      table_(std::move(table)),
      scale_(global_scale) {
  prm_.validate();
  require_table(prm_, table_);
  if (pieces_.empty()) throw std::invalid_argument("need at least one piece");
  const double span = pieces_.back().t_r - pieces_.front().t_l;
  if (!(span > 0.0)) throw std::invalid_argument("pieces must span an interval");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const SolutionPiece& pc = pieces_[i];
    if (pc.sign != 1 && pc.sign != -1)
      throw std::invalid_argument("piece sign must be +1 or -1");
    if (!(pc.t_l < pc.t_r) || !(pc.amplitude > 0.0))
      throw std::invalid_argument("piece must have t_l < t_r, amplitude > 0");
    if (i > 0) {
      if (std::abs(pc.t_l - pieces_[i - 1].t_r) > 1e-12 * span)
        throw std::invalid_argument("pieces must share joint abscissae");
      pieces_[i].t_l = pieces_[i - 1].t_r;  // snap to the exact joint
      if (pc.sign != -pieces_[i - 1].sign)
        throw std::invalid_argument("adjacent pieces must alternate sign");
    }
  }
  t0_ = breakpoint_t0(prm_);
}

const SolutionPiece& PiecewisePSolution::piece_at(double t,
                                                  double* sigma) const {
  const double slack = 1e-9 * (hi() - lo());
  if (t < lo() - slack || t > hi() + slack) {
    std::ostringstream os;
    os << "t = " << t << " outside domain [" << lo() << ", " << hi() << "]";
    throw std::domain_error(os.str());
  }
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](double v, const SolutionPiece& pc) { return v < pc.t_l; });
  const std::size_t idx =
      it == pieces_.begin() ? 0 : static_cast<std::size_t>(it - pieces_.begin()) - 1;
  const SolutionPiece& pc = pieces_[idx];
  *sigma = std::clamp(pc.sigma(t), 0.0, 1.0);
  return pc;
}

double PiecewisePSolution::value(double t) const {
  double sigma = 0.0;
  const SolutionPiece& pc = piece_at(t, &sigma);
  // positive humps break at t0, negative ones at 1 - t0 (weights swap roles)
  const double beta = pc.sign > 0 ? t0_ : 1.0 - t0_;
  const double shape = sigma <= beta
                           ? table_->phi_p(sigma / (2.0 * beta))
                           : table_->phi_p((1.0 - sigma) / (2.0 * (1.0 - beta)));
  return scale_ * pc.sign * pc.amplitude * shape;
}

double PiecewisePSolution::slope(double t) const {
  double sigma = 0.0;
  const SolutionPiece& pc = piece_at(t, &sigma);
  const double beta = pc.sign > 0 ? t0_ : 1.0 - t0_;
  double dshape;
  if (sigma <= beta)
    dshape = table_->phi_p_prime(sigma / (2.0 * beta)) / (2.0 * beta);
  else
    dshape = -table_->phi_p_prime((1.0 - sigma) / (2.0 * (1.0 - beta))) /
             (2.0 * (1.0 - beta));
  return scale_ * pc.sign * pc.amplitude * dshape / pc.width();
}

std::vector<double> PiecewisePSolution::kinks() const {
  std::vector<double> out;
  out.reserve(2 * pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const SolutionPiece& pc = pieces_[i];
    if (i > 0) out.push_back(pc.t_l);
    const double beta = pc.sign > 0 ? t0_ : 1.0 - t0_;
    out.push_back(pc.t_l + beta * pc.width());
  }
  return out;
}

PiecewisePSolution build_principal(const ProblemParams& prm,
                                   std::shared_ptr<const PTrigTable> table,
                                   double global_scale) {
  prm.validate();
  std::vector<SolutionPiece> pieces{{0.0, prm.L, +1, 1.0}};
  return PiecewisePSolution(prm, std::move(pieces), std::move(table),
                            global_scale);
}

PiecewisePSolution build_kth(const ProblemParams& prm, int k, int start_sign,
                             std::shared_ptr<const PTrigTable> table,
                             double global_scale) {
  prm.validate();
  require_sign(start_sign);
  if (k < 1) throw std::domain_error("eigenvalue index k must be >= 1");
  std::vector<SolutionPiece> pieces;
  pieces.reserve(k);
  int sign = start_sign;
  for (int i = 0; i < k; ++i) {
    const double t_l = prm.L * i / k;
    const double t_r = prm.L * (i + 1) / k;
    pieces.push_back({t_l, t_r, sign, 1.0});
    sign = -sign;
  }
  return PiecewisePSolution(prm, std::move(pieces), std::move(table),
                            global_scale);
}

InterspersedCover build_cover(const ProblemParams& prm, double mu, double nu,
                              int start_sign, double rel_tol) {
  prm.validate();
  require_sign(start_sign);
  if (!(mu > 0.0) || !(nu > 0.0))
    throw std::domain_error("cover requires mu, nu > 0");
  if (!(rel_tol > 0.0)) throw std::domain_error("rel_tol must be positive");

  const double lam1 = lambda_1_asym(prm);
  // first eigenvalue on the unit interval; a hump of width l carries lam1_unit / l^p
  const double lam1_unit = lam1 * std::pow(prm.L, prm.p);
  const double l_mu = std::pow(lam1_unit / mu, 1.0 / prm.p);
  const double l_nu = std::pow(lam1_unit / nu, 1.0 / prm.p);

  InterspersedCover cover;

  // trivial lines: a single hump of the matching sign fills (0, L)
  if (start_sign == +1 && std::abs(mu - lam1) <= rel_tol * lam1) {
    cover.intervals = {{0.0, prm.L, +1}};
    cover.P = 1;
    cover.N = 0;
    cover.l_mu = prm.L;
    cover.l_nu = 0.0;
    return cover;
  }
  if (start_sign == -1 && std::abs(nu - lam1) <= rel_tol * lam1) {
    cover.intervals = {{0.0, prm.L, -1}};
    cover.P = 0;
    cover.N = 1;
    cover.l_mu = 0.0;
    cover.l_nu = prm.L;
    return cover;
  }

  const int p_bound =
      static_cast<int>(std::ceil(prm.L / std::min(l_mu, prm.L))) + 1;
  CandidateResidual best[2] = {{0, 0, std::numeric_limits<double>::infinity()},
                               {0, 0, std::numeric_limits<double>::infinity()}};
  int found_P = 0, found_N = 0;
  for (int P = 1; P <= p_bound && found_P == 0; ++P) {
    // admissible alternating layouts: start + needs N in {P-1, P},
    // start - needs N in {P, P+1}
    const int n_lo = start_sign > 0 ? std::max(1, P - 1) : P;
    const int n_hi = start_sign > 0 ? P : P + 1;
    for (int N = n_lo; N <= n_hi; ++N) {
      const double res = std::abs(P * l_mu + N * l_nu - prm.L);
      if (res <= rel_tol * prm.L) {
        found_P = P;
        found_N = N;
        break;
      }
      if (res < best[0].residual) {
        best[1] = best[0];
        best[0] = {P, N, res};
      } else if (res < best[1].residual) {
        best[1] = {P, N, res};
      }
    }
  }
  if (found_P == 0) {
    std::ostringstream os;
    os << "(mu, nu) = (" << mu << ", " << nu
       << ") lies on no admissible curve for the requested start sign; "
       << "nearest cover length misfits: (P=" << best[0].P << ", N=" << best[0].N
       << ") -> " << best[0].residual << ", (P=" << best[1].P
       << ", N=" << best[1].N << ") -> " << best[1].residual;
    throw NotOnSpectrumError(os.str(), best[0], best[1]);
  }

  cover.P = found_P;
  cover.N = found_N;
  cover.l_mu = l_mu;
  cover.l_nu = l_nu;
  const int total = found_P + found_N;
  cover.intervals.reserve(total);
  double t = 0.0;
  int sign = start_sign;
  for (int i = 0; i < total; ++i) {
    const double w = sign > 0 ? l_mu : l_nu;
    const double t_next = i + 1 == total ? prm.L : t + w;
    cover.intervals.push_back({t, t_next, sign});
    t = t_next;
    sign = -sign;
  }
  return cover;
}

PiecewisePSolution build_fucik_solution(const ProblemParams& prm, double mu,
                                        double nu, int start_sign,
                                        std::shared_ptr<const PTrigTable> table,
                                        double global_scale, double rel_tol) {
  const InterspersedCover cover = build_cover(prm, mu, nu, start_sign, rel_tol);
  std::vector<SolutionPiece> pieces;
  pieces.reserve(cover.intervals.size());
  for (const CoverInterval& iv : cover.intervals)
    pieces.push_back({iv.t_l, iv.t_r, iv.sign, iv.t_r - iv.t_l});
  return PiecewisePSolution(prm, std::move(pieces), std::move(table),
                            global_scale);
}

ReflectedFragment::ReflectedFragment(std::shared_ptr<const Profile> src,
                                     double lo, double hi)
    : src_(std::move(src)), lo_(lo), center_(hi) {}

double ReflectedFragment::value(double t) const {
  return t <= center_ ? src_->value(t) : src_->value(2.0 * center_ - t);
}

double ReflectedFragment::slope(double t) const {
  return t <= center_ ? src_->slope(t) : -src_->slope(2.0 * center_ - t);
}

std::vector<double> ReflectedFragment::kinks() const {
  std::vector<double> left;
  for (double k : src_->kinks())
    if (k > lo_ && k < center_) left.push_back(k);
  std::sort(left.begin(), left.end());
  std::vector<double> out = left;
  out.push_back(center_);
  for (auto it = left.rbegin(); it != left.rend(); ++it)
    out.push_back(2.0 * center_ - *it);
  return out;
}

ReflectedFragment reflect_extend(std::shared_ptr<const Profile> src, double lo,
                                 double hi, double tol) {
  if (!src) throw std::invalid_argument("profile must not be null");
  if (!(lo < hi))
    throw std::domain_error("reflection needs lo < hi");
  const double slack = 1e-9 * (src->hi() - src->lo());
  if (lo < src->lo() - slack || hi > src->hi() + slack) {
    std::ostringstream os;
    os << "fragment [" << lo << ", " << hi << "] leaves the profile domain ["
       << src->lo() << ", " << src->hi() << "]";
    throw std::domain_error(os.str());
  }
  const double crest = src->value(hi);
  const double v_lo = src->value(lo);
  const double v_ref = std::max(std::abs(crest), 1e-300);
  if (std::abs(v_lo) > tol * v_ref) {
    std::ostringstream os;
    os << "cannot reflect: value at left end t = " << lo << " is " << v_lo
       << ", expected 0";
    throw std::domain_error(os.str());
  }
  const double s_hi = src->slope(hi);
  const double s_ref =
      std::max({std::abs(src->slope(lo)), std::abs(crest) / (hi - lo), 1e-300});
  if (std::abs(s_hi) > tol * s_ref) {
    std::ostringstream os;
    os << "cannot reflect: slope at crest t = " << hi << " is " << s_hi
       << ", expected 0";
    throw std::domain_error(os.str());
  }
  return ReflectedFragment(std::move(src), lo, hi);
}

}  // namespace pspectra
