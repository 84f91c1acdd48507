#ifndef JSCC_SCALAR_SEARCH_HPP
#define JSCC_SCALAR_SEARCH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jscc/error.hpp"

namespace jscc {

struct SearchPoint {
  double x = 0.0;
  double value = 0.0;
};

/// Root of a nondecreasing function f on [lo, hi] with f(lo) <= target <= f(hi).
/// Returns the midpoint of the final bracket.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double x_tol = 1e-15,
                         int max_iter = 400) {
  if (!(lo < hi)) throw DomainError("bisect_increasing: empty bracket");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= x_tol * std::max(1.0, std::abs(mid))) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section maximization of a unimodal function on [lo, hi]. Non-finite
/// values (infeasible points) are treated as -infinity.
template <class F>
SearchPoint golden_maximize(F&& f, double lo, double hi, double x_tol = 1e-12,
                            int max_iter = 300) {
  constexpr double kInvPhi = 0.6180339887498948482;
  auto eval = [&](double x) {
    const double v = f(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  if (hi < lo) throw DomainError("golden_maximize: empty interval");
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  SearchPoint best{c, fc};
  if (fd > best.value) best = {d, fd};
  // endpoints matter for monotone objectives
  const double fl = eval(lo), fh = eval(hi);
  if (fl > best.value) best = {lo, fl};
  if (fh > best.value) best = {hi, fh};
  return best;
}

template <class F>
SearchPoint golden_minimize(F&& f, double lo, double hi, double x_tol = 1e-12,
                            int max_iter = 300) {
  SearchPoint p = golden_maximize([&](double x) { return -f(x); }, lo, hi, x_tol, max_iter);
  p.value = -p.value;
  return p;
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {lo};
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

inline std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> out = linspace(std::log(lo), std::log(hi), count);
  for (double& x : out) x = std::exp(x);
  return out;
}

}  // namespace jscc

#endif  // JSCC_SCALAR_SEARCH_HPP
