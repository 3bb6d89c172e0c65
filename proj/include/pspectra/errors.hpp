#pragma once

#include <stdexcept>
#include <string>

namespace pspectra {

// Raised when a Fucik curve is sampled at or below its vertical asymptote.
struct AsymptoteError : std::domain_error {
  double bound;  // the asymptote mu = P^p * lambda_1
  AsymptoteError(const std::string& msg, double bound_)
      : std::domain_error(msg), bound(bound_) {}
};

struct CandidateResidual {
  int P = 0, N = 0;
  double residual = 0.0;  // |P*l_mu + N*l_nu - L|
};

// Raised when (mu, nu) admits no interspersed cover of (0, L).
struct NotOnSpectrumError : std::runtime_error {
  CandidateResidual nearest[2];  // two closest (P, N) candidates
  NotOnSpectrumError(const std::string& msg, CandidateResidual c0,
                     CandidateResidual c1)
      : std::runtime_error(msg), nearest{c0, c1} {}
};

// Raised when a numerical routine detects it cannot meet its own tolerance.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a bracketing search fails to enclose a root.
struct SearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pspectra
