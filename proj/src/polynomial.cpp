#include "otg/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace otg {

namespace {

constexpr double k_root_dedup = 1e-9;

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

void polish_root(double& x, double a, double b, double c, double d, double e) {
  // One or two Newton steps on the full quartic a x^4 + ... + e.
  for (int i = 0; i < 2; ++i) {
    const double f = (((a * x + b) * x + c) * x + d) * x + e;
    const double fp = ((4.0 * a * x + 3.0 * b) * x + 2.0 * c) * x + d;
    if (fp == 0.0) return;
    const double step = f / fp;
    if (!std::isfinite(step)) return;
    x -= step;
  }
}

std::vector<double> dedup_sorted(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!std::isfinite(r)) continue;
    if (out.empty() || std::abs(r - out.back()) > k_root_dedup) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<double> solve_linear(double b, double c) {
  if (b == 0.0) return {};
  return {-c / b};
}

std::vector<double> solve_quadratic(double a, double b, double c) {
  const double scale = max_abs({a, b, c});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-14 * scale) return solve_linear(b, c);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  // Stable form: avoid cancellation in -b +/- sq.
  const double q = -0.5 * (b + std::copysign(sq, b));
  std::vector<double> roots;
  roots.push_back(q / a);
  if (q != 0.0) {
    roots.push_back(c / q);
  } else {
    roots.push_back(0.0);
  }
  return dedup_sorted(std::move(roots));
}

std::vector<double> solve_cubic(double a, double b, double c, double d) {
  const double scale = max_abs({a, b, c, d});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-14 * scale) return solve_quadratic(b, c, d);

  // Depressed cubic t^3 + p t + q with x = t - b/(3a).
  const double inv_a = 1.0 / a;
  const double b1 = b * inv_a, c1 = c * inv_a, d1 = d * inv_a;
  const double shift = b1 / 3.0;
  const double p = c1 - b1 * b1 / 3.0;
  const double q = 2.0 * b1 * b1 * b1 / 27.0 - b1 * c1 / 3.0 + d1;

  std::vector<double> roots;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v - shift);
  } else if (p == 0.0 && q == 0.0) {
    roots.push_back(-shift);
  } else {
    // Three real roots: trigonometric form.
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    const double m = 2.0 * std::sqrt(-p / 3.0);
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0) - shift);
    }
  }
  for (double& r : roots) polish_root(r, 0.0, a, b, c, d);
  return dedup_sorted(std::move(roots));
}

std::vector<double> solve_quartic(double a, double b, double c, double d, double e) {
  const double scale = max_abs({a, b, c, d, e});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-13 * scale) return solve_cubic(b, c, d, e);

  // Normalize and depress: x = y - b/(4a) gives y^4 + p y^2 + q y + r.
  const double inv_a = 1.0 / a;
  const double b1 = b * inv_a, c1 = c * inv_a, d1 = d * inv_a, e1 = e * inv_a;
  const double shift = b1 / 4.0;
  const double p = c1 - 3.0 * b1 * b1 / 8.0;
  const double q = d1 - b1 * c1 / 2.0 + b1 * b1 * b1 / 8.0;
  const double r = e1 - b1 * d1 / 4.0 + b1 * b1 * c1 / 16.0 - 3.0 * b1 * b1 * b1 * b1 / 256.0;

  std::vector<double> roots;
  if (std::abs(q) <= 1e-12 * (1.0 + max_abs({p, r}))) {
    // Biquadratic.
    for (double z : solve_quadratic(1.0, p, r)) {
      if (z < 0.0) continue;
      const double s = std::sqrt(std::max(z, 0.0));
      roots.push_back(s - shift);
      roots.push_back(-s - shift);
    }
  } else {
    // Ferrari: resolvent cubic 2 m^3 - p m^2 - 2 r m + (r p - q^2 / 4) ... use
    // the standard form m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0.
    const auto ms = solve_cubic(1.0, p, p * p / 4.0 - r, -q * q / 8.0);
    double m = 0.0;
    for (double cand : ms) m = std::max(m, cand);
    if (m <= 0.0) return {};
    const double sm = std::sqrt(2.0 * m);
    const double t1 = p / 2.0 + m;
    // y^4 + p y^2 + q y + r = (y^2 + sm y + t1 - q/(2 sm)) (y^2 - sm y + t1 + q/(2 sm))
    const double off = q / (2.0 * sm);
    for (double y : solve_quadratic(1.0, sm, t1 - off)) roots.push_back(y - shift);
    for (double y : solve_quadratic(1.0, -sm, t1 + off)) roots.push_back(y - shift);
  }
  for (double& x : roots) polish_root(x, a, b, c, d, e);
  return dedup_sorted(std::move(roots));
}

poly3 poly3::shifted(double dx) const {
  // q(x) = p(x + dx), expanded.
  poly3 q;
  q.c[3] = c[3];
  q.c[2] = c[2] + 3.0 * c[3] * dx;
  q.c[1] = c[1] + dx * (2.0 * c[2] + 3.0 * c[3] * dx);
  q.c[0] = eval(dx);
  return q;
}

std::vector<double> roots_in_interval(const poly3& p, double lo, double hi) {
  if (!(hi >= lo)) return {};
  std::vector<double> all = solve_cubic(p.c[3], p.c[2], p.c[1], p.c[0]);
  std::vector<double> out;
  for (double r : all) {
    if (r >= lo - k_root_dedup && r <= hi + k_root_dedup) {
      out.push_back(std::clamp(r, lo, hi));
    }
  }
  return dedup_sorted(std::move(out));
}

piecewise_poly::piecewise_poly(std::vector<double> starts, std::vector<poly3> pieces)
    : starts_(std::move(starts)), pieces_(std::move(pieces)) {
  if (starts_.empty() || starts_.size() != pieces_.size()) {
    throw std::invalid_argument("piecewise_poly: piece/start size mismatch");
  }
  if (!std::is_sorted(starts_.begin(), starts_.end())) {
    throw std::invalid_argument("piecewise_poly: piece starts must be sorted");
  }
}

piecewise_poly piecewise_poly::constant(double value) {
  piecewise_poly p;
  p.starts_ = {0.0};
  p.pieces_ = {poly3{{value, 0.0, 0.0, 0.0}}};
  return p;
}

std::size_t piecewise_poly::piece_index(double t) const {
  // First piece whose start is <= t; extrapolates first/last beyond the span.
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  if (it == starts_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
}

double piecewise_poly::eval(double t) const {
  const std::size_t i = piece_index(t);
  return pieces_[i].eval(t - starts_[i]);
}

double piecewise_poly::deriv(double t) const {
  const std::size_t i = piece_index(t);
  return pieces_[i].deriv(t - starts_[i]);
}

piecewise_poly piecewise_poly::offset(double delta) const {
  piecewise_poly out = *this;
  for (auto& p : out.pieces_) p.c[0] += delta;
  return out;
}

piecewise_poly piecewise_poly::time_shifted(double t0) const {
  piecewise_poly out = *this;
  for (auto& s : out.starts_) s -= t0;
  return out;
}

}  // namespace otg
