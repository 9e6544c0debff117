#pragma once

#include <cmath>

#include "lrwave/errors.hpp"

namespace lrwave {

// Uniform symmetric grid on [-R, R] with spacing h = 1/q.
//
// q must be even so that every half-integer window edge m/2 of the moving
// average operators lands exactly on a node, and R must be a positive integer
// multiple of h. The node count n = 2Rq + 1 is odd; node `center()` sits at 0.
class Grid {
 public:
  Grid(int q, double R) : q_(q) {
    if (q < 2 || q % 2 != 0) throw ConfigError("grid: q must be even and >= 2");
    const double cells = R * q;
    half_cells_ = static_cast<long>(std::llround(cells));
    if (!(R > 0) || std::abs(cells - static_cast<double>(half_cells_)) > 1e-9 ||
        half_cells_ < 1)
      throw ConfigError("grid: R must be a positive integer multiple of h = 1/q");
  }

  int q() const { return q_; }
  double h() const { return 1.0 / q_; }
  double R() const { return static_cast<double>(half_cells_) / q_; }
  long n() const { return 2 * half_cells_ + 1; }
  long center() const { return half_cells_; }
  long mirror(long i) const { return n() - 1 - i; }
  double node(long i) const { return static_cast<double>(i - half_cells_) / q_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.q_ == b.q_ && a.half_cells_ == b.half_cells_;
  }

 private:
  int q_;
  long half_cells_;
};

}  // namespace lrwave
