#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pspectra/ptrig.hpp"
#include "pspectra/spectra.hpp"

namespace pspectra {

struct VerifyCheck {
  std::string name;
  double error = 0.0;  // measured
  double bound = 0.0;  // pass iff error <= bound
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Deterministic cross-validation of the closed forms against the numerical
// oracles at one parameter point: half-period identity, shooting vs the
// first eigenvalue, eigenvalue scaling in L, weak residuals of the first
// three eigenfunctions, curve points shot across (0, L), pointwise convexity
// identity on seeded samples, energy drift and zero-set homogeneity of the
// integrator.  The same seed always yields the same report.
VerifyReport run_verify(const ProblemParams& prm,
                        std::shared_ptr<const PTrigTable> table,
                        std::uint64_t seed);

}  // namespace pspectra
