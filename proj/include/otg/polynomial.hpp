#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace otg {

/// Cubic polynomial c0 + c1 x + c2 x^2 + c3 x^3 in a local variable.
struct poly3 {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  double eval(double x) const { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }
  double deriv(double x) const { return c[1] + x * (2.0 * c[2] + x * 3.0 * c[3]); }
  poly3 shifted(double dx) const;  // q(x) = p(x + dx)

  poly3 operator-(const poly3& o) const {
    return poly3{{c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]}};
  }
};

/// Real roots of b x + c = 0.
std::vector<double> solve_linear(double b, double c);

/// Real roots of a x^2 + b x + c = 0 (degenerates gracefully).
std::vector<double> solve_quadratic(double a, double b, double c);

/// Real roots of a x^3 + b x^2 + c x + d = 0. Trigonometric/Cardano solution
/// followed by one Newton polish step per root.
std::vector<double> solve_cubic(double a, double b, double c, double d);

/// Real roots of a x^4 + b x^3 + c x^2 + d x + e = 0 (Ferrari + polish).
std::vector<double> solve_quartic(double a, double b, double c, double d, double e);

/// Roots of `p` inside [lo, hi], sorted ascending, deduplicated to 1e-9.
std::vector<double> roots_in_interval(const poly3& p, double lo, double hi);

/// Piecewise cubic in absolute time. Each piece is anchored at its start time;
/// evaluation outside the covered span extrapolates the nearest piece.
class piecewise_poly {
 public:
  piecewise_poly() = default;
  piecewise_poly(std::vector<double> starts, std::vector<poly3> pieces);

  /// Single constant value for all time.
  static piecewise_poly constant(double value);

  double eval(double t) const;
  double deriv(double t) const;

  const std::vector<double>& piece_starts() const { return starts_; }
  const std::vector<poly3>& pieces() const { return pieces_; }

  /// Index of the piece governing time t (with extrapolation at the ends).
  std::size_t piece_index(double t) const;

  /// Returns a copy with `delta` added to every piece's constant coefficient.
  piecewise_poly offset(double delta) const;

  /// Returns the same motion re-anchored so that time `t0` becomes time 0.
  piecewise_poly time_shifted(double t0) const;

 private:
  std::vector<double> starts_{0.0};
  std::vector<poly3> pieces_{poly3{}};
};

}  // namespace otg
