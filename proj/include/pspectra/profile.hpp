#pragma once

#include <vector>

namespace pspectra {

// A scalar function on [lo, hi] with a one-sided-safe derivative.  kinks()
// lists interior abscissae where smoothness may drop; quadrature panels and
// root brackets must not straddle them.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual double value(double t) const = 0;
  virtual double slope(double t) const = 0;
  virtual std::vector<double> kinks() const = 0;
};

}  // namespace pspectra
