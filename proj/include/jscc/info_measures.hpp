#ifndef JSCC_INFO_MEASURES_HPP
#define JSCC_INFO_MEASURES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "jscc/error.hpp"
#include "jscc/markov.hpp"
#include "jscc/matrix.hpp"

namespace jscc {

/// Which conditional entropy: reference P_Y (down) or the optimal reference (up).
enum class Variant { down, up };

struct CorrectionTerms {
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline void check_theta(double theta, const char* what) {
  if (!(theta < 1.0) || !std::isfinite(theta))
    throw DomainError(std::string(what) + ": theta must be finite and < 1");
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_entry(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

/// log of sum_x W(x, z | 0, z')^{1-theta} for the non-hidden chain.
inline SquareMatrix log_tilted_z_sum(const JointChannelChain& c, double theta) {
  SquareMatrix out(c.z_size());
  for (std::size_t z = 0; z < c.z_size(); ++z)
    for (std::size_t zp = 0; zp < c.z_size(); ++zp) {
      double s = 0.0;
      for (std::size_t x = 0; x < c.x_size(); ++x) {
        const double w = c(x, z, 0, zp);
        if (w > 0.0) s += std::pow(w, 1.0 - theta);
      }
      out(z, zp) = safe_log(s);
    }
  return out;
}

inline SquareMatrix log_power(const SquareMatrix& w, double power) {
  SquareMatrix out(w.dim());
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = 0; j < w.dim(); ++j)
      out(i, j) = w(i, j) > 0.0 ? power * std::log(w(i, j)) : kNegInf;
  return out;
}

inline SquareMatrix require_assumption1(const JointChannelChain& c) {
  auto a1 = check_assumption1(c);
  if (!a1) throw AssumptionViolated("channel chain is not non-hidden (Assumption 1)");
  return std::move(a1.z_marginal);
}

inline void require_assumption2(const JointChannelChain& c) {
  if (!check_assumption2(c)) throw AssumptionViolated("channel chain violates Assumption 2");
}

/// Tilted matrix W^{1-theta} W_Z^theta in log form.
inline SquareMatrix log_down_matrix(const JointChannelChain& c, const SquareMatrix& wz, double theta) {
  const std::size_t d = c.dim();
  SquareMatrix out(d);
  const SquareMatrix& w = c.matrix().matrix();
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t z = i / c.x_size();
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t zp = j / c.x_size();
      out(i, j) = w(i, j) > 0.0 ? (1.0 - theta) * std::log(w(i, j)) + theta * std::log(wz(z, zp))
                                : kNegInf;
    }
  }
  return out;
}

inline LogPerronResult down_pair(const JointChannelChain& c, double theta) {
  const SquareMatrix wz = require_assumption1(c);
  return perron_log_eigenpair(log_down_matrix(c, wz, theta));
}

inline LogPerronResult singleton_pair(const JointChannelChain& c, double theta) {
  return perron_log_eigenpair(log_power(c.matrix().matrix(), 1.0 - theta));
}

/// K_theta = [sum_x W^{1-theta}]^{1/(1-theta)}.
inline LogPerronResult k_pair(const JointChannelChain& c, double theta) {
  SquareMatrix lk = log_tilted_z_sum(c, theta);
  for (std::size_t i = 0; i < lk.dim(); ++i)
    for (std::size_t j = 0; j < lk.dim(); ++j) lk(i, j) /= (1.0 - theta);
  return perron_log_eigenpair(lk);
}

/// N_{theta,theta'} = W_theta * W_theta'^{theta/(1-theta')}.
inline LogPerronResult n_pair(const JointChannelChain& c, double theta, double theta_prime) {
  const SquareMatrix a = log_tilted_z_sum(c, theta);
  const SquareMatrix b = log_tilted_z_sum(c, theta_prime);
  SquareMatrix ln(a.dim());
  const double e = theta / (1.0 - theta_prime);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      ln(i, j) = std::isfinite(a(i, j)) ? a(i, j) + e * b(i, j) : kNegInf;
  return perron_log_eigenpair(ln);
}

// Karp's algorithm: maximum cycle mean of a weighted digraph (edge j -> i with
// weight w(i, j), -inf meaning no edge).
inline double max_cycle_mean(const SquareMatrix& w) {
  const std::size_t n = w.dim();
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
  for (std::size_t v = 0; v < n; ++v) d[0][v] = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::isfinite(w(i, j)) && std::isfinite(d[k - 1][j]))
          d[k][i] = std::max(d[k][i], d[k - 1][j] + w(i, j));
  double best = kNegInf;
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::isfinite(d[n][v])) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(d[k][v])) continue;
      worst = std::min(worst, (d[n][v] - d[k][v]) / static_cast<double>(n - k));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-shot measures on an explicit joint table (rows x, columns y).

/// Renyi entropy H_{1-theta}(P); Shannon entropy at theta = 0.
inline double renyi_entropy(std::span<const double> p, double theta) {
  detail::check_theta(theta, "renyi_entropy");
  if (theta == 0.0) {
    double h = 0.0;
    for (double x : p)
      if (x > 0.0) h -= x * std::log(x);
    return h;
  }
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s += std::pow(x, 1.0 - theta);
  return std::log(s) / theta;
}

/// H_{1-theta}(P_XY | Q_Y) for an arbitrary reference Q_Y (positive on supp P_Y).
inline double conditional_renyi(const JointTable& p, std::span<const double> q, double theta) {
  detail::check_theta(theta, "conditional_renyi");
  if (theta == 0.0) {
    double h = 0.0;
    for (std::size_t x = 0; x < p.x_size(); ++x)
      for (std::size_t y = 0; y < p.y_size(); ++y) {
        const double v = p(x, y);
        if (v > 0.0) h -= v * (std::log(v) - std::log(q[y]));
      }
    return h;
  }
  double s = 0.0;
  for (std::size_t x = 0; x < p.x_size(); ++x)
    for (std::size_t y = 0; y < p.y_size(); ++y) {
      const double v = p(x, y);
      if (v > 0.0) s += std::pow(v, 1.0 - theta) * std::pow(q[y], theta);
    }
  return std::log(s) / theta;
}

inline double h_down_shot(const JointTable& p, double theta) {
  const auto py = p.y_marginal();
  return conditional_renyi(p, py, theta);
}

/// Normalized P_Y^{(1-theta')}: proportional to [sum_x P(x,y)^{1-theta'}]^{1/(1-theta')}.
inline std::vector<double> tilted_reference(const JointTable& p, double theta_prime) {
  detail::check_theta(theta_prime, "tilted_reference");
  std::vector<double> q(p.y_size(), 0.0);
  std::vector<double> lq(p.y_size(), detail::kNegInf);
  double m = detail::kNegInf;
  for (std::size_t y = 0; y < p.y_size(); ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < p.x_size(); ++x)
      if (p(x, y) > 0.0) s += std::pow(p(x, y), 1.0 - theta_prime);
    if (s > 0.0) lq[y] = std::log(s) / (1.0 - theta_prime);
    m = std::max(m, lq[y]);
  }
  double total = 0.0;
  for (std::size_t y = 0; y < p.y_size(); ++y) {
    q[y] = std::isfinite(lq[y]) ? std::exp(lq[y] - m) : 0.0;
    total += q[y];
  }
  for (double& v : q) v /= total;
  return q;
}

inline double h_two_param_shot(const JointTable& p, double theta, double theta_prime) {
  const auto q = tilted_reference(p, theta_prime);
  return conditional_renyi(p, q, theta);
}

inline double h_up_shot(const JointTable& p, double theta) { return h_two_param_shot(p, theta, theta); }

// ---------------------------------------------------------------------------
// Transition-matrix measures. The theta_h_* functions return theta * H
// (a log Perron eigenvalue, well defined at theta = 0).

inline double theta_h_down_tm(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "h_down_tm");
  return detail::down_pair(c, theta).log_eigenvalue;
}

inline double theta_h_up_tm(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "h_up_tm");
  detail::require_assumption2(c);
  if (c.singleton()) return detail::singleton_pair(c, theta).log_eigenvalue;
  return (1.0 - theta) * detail::k_pair(c, theta).log_eigenvalue;
}

inline double theta_h_two_param_tm(const JointChannelChain& c, double theta, double theta_prime) {
  detail::check_theta(theta, "h_two_param_tm");
  detail::check_theta(theta_prime, "h_two_param_tm");
  detail::require_assumption2(c);
  if (c.singleton()) return detail::singleton_pair(c, theta).log_eigenvalue;
  return detail::n_pair(c, theta, theta_prime).log_eigenvalue -
         theta * detail::k_pair(c, theta_prime).log_eigenvalue;
}

/// theta * H_{1-theta}^{W_s}(M) for a source (always a singleton chain).
inline double theta_h_source(const SourceChain& s, double theta) {
  detail::check_theta(theta, "h_source");
  return detail::singleton_pair(JointChannelChain::from_source(s), theta).log_eigenvalue;
}

/// H^W(X|Z): derivative of theta * H^{W,down}_{1-theta} at 0 by central
/// differences with one Richardson level.
inline double entropy_rate_tm(const JointChannelChain& c) {
  const SquareMatrix wz = detail::require_assumption1(c);
  auto f = [&](double t) { return perron_log_eigenpair(detail::log_down_matrix(c, wz, t)).log_eigenvalue; };
  constexpr double h = 1e-3;
  auto d1 = [&](double step) { return (f(step) - f(-step)) / (2.0 * step); };
  return (4.0 * d1(h / 2) - d1(h)) / 3.0;
}

/// V^W(X|Z): second derivative of theta * H^{W,down}_{1-theta} at 0.
inline double dispersion_tm(const JointChannelChain& c) {
  const SquareMatrix wz = detail::require_assumption1(c);
  auto f = [&](double t) { return perron_log_eigenpair(detail::log_down_matrix(c, wz, t)).log_eigenvalue; };
  constexpr double h = 1e-3;
  const double f0 = f(0.0);
  auto d2 = [&](double step) { return (f(step) - 2.0 * f0 + f(-step)) / (step * step); };
  return (4.0 * d2(h / 2) - d2(h)) / 3.0;
}

inline double entropy_rate_source(const SourceChain& s) {
  return entropy_rate_tm(JointChannelChain::from_source(s));
}

inline double dispersion_source(const SourceChain& s) {
  return dispersion_tm(JointChannelChain::from_source(s));
}

inline double h_down_tm(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "h_down_tm");
  if (theta == 0.0) return entropy_rate_tm(c);
  return theta_h_down_tm(c, theta) / theta;
}

inline double h_up_tm(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "h_up_tm");
  if (theta == 0.0) {
    detail::require_assumption2(c);
    return entropy_rate_tm(c);
  }
  return theta_h_up_tm(c, theta) / theta;
}

inline double h_two_param_tm(const JointChannelChain& c, double theta, double theta_prime) {
  detail::check_theta(theta, "h_two_param_tm");
  if (theta == 0.0) {
    // derivative in theta at 0
    constexpr double h = 1e-4;
    auto f = [&](double t) { return theta_h_two_param_tm(c, t, theta_prime); };
    const double d_h = (f(h) - f(-h)) / (2 * h);
    const double d_h2 = (f(h / 2) - f(-h / 2)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
  }
  return theta_h_two_param_tm(c, theta, theta_prime) / theta;
}

/// Order-zero (theta -> 1) entropy of the chain.
inline double h_zero_tm(const JointChannelChain& c, Variant variant) {
  if (variant == Variant::down) {
    const SquareMatrix wz = detail::require_assumption1(c);
    const std::size_t d = c.dim();
    SquareMatrix l(d);
    const SquareMatrix& w = c.matrix().matrix();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        l(i, j) = w(i, j) > 0.0 ? std::log(wz(i / c.x_size(), j / c.x_size())) : detail::kNegInf;
    return perron_log_eigenpair(l).log_eigenvalue;
  }
  detail::require_assumption2(c);
  if (c.singleton()) {
    return perron_log_eigenpair(detail::log_power(c.matrix().matrix(), 0.0)).log_eigenvalue;
  }
  SquareMatrix counts(c.z_size());
  for (std::size_t z = 0; z < c.z_size(); ++z)
    for (std::size_t zp = 0; zp < c.z_size(); ++zp) {
      double n = 0.0;
      for (std::size_t x = 0; x < c.x_size(); ++x)
        if (c(x, z, 0, zp) > 0.0) n += 1.0;
      counts(z, zp) = detail::safe_log(n);
    }
  return detail::max_cycle_mean(counts);
}

inline double h_zero_source(const SourceChain& s) {
  return h_zero_tm(JointChannelChain::from_source(s), Variant::up);
}

// ---------------------------------------------------------------------------
// Finite-length correction terms; w-vectors are built from the chain's
// initial distribution.

inline CorrectionTerms delta_bounds(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "delta_bounds");
  const auto pair = detail::down_pair(c, theta);
  const JointTable p1 = c.initial_table();
  const auto pz = p1.y_marginal();
  std::vector<double> w(c.dim(), 0.0);
  for (std::size_t z = 0; z < c.z_size(); ++z)
    for (std::size_t x = 0; x < c.x_size(); ++x) {
      const double v = p1(x, z);
      if (v > 0.0) w[c.index(x, z)] = std::pow(v, 1.0 - theta) * std::pow(pz[z], theta);
    }
  const double up = std::log(detail::dot(pair.right_vector, w));
  return {up - std::log(detail::max_entry(pair.right_vector)), up};
}

inline CorrectionTerms xi_bounds(const JointChannelChain& c, double theta) {
  detail::check_theta(theta, "xi_bounds");
  detail::require_assumption2(c);
  const JointTable p1 = c.initial_table();
  if (c.singleton()) {
    const auto pair = detail::singleton_pair(c, theta);
    std::vector<double> w(c.dim(), 0.0);
    for (std::size_t x = 0; x < c.x_size(); ++x)
      if (p1(x, 0) > 0.0) w[x] = std::pow(p1(x, 0), 1.0 - theta);
    const double base = std::log(detail::dot(pair.right_vector, w));
    const double lmax = std::log(detail::max_entry(pair.right_vector));
    return {(base - lmax) / (1.0 - theta), base / (1.0 - theta)};
  }
  const auto pair = detail::k_pair(c, theta);
  std::vector<double> w(c.z_size(), 0.0);
  for (std::size_t z = 0; z < c.z_size(); ++z) {
    double s = 0.0;
    for (std::size_t x = 0; x < c.x_size(); ++x)
      if (p1(x, z) > 0.0) s += std::pow(p1(x, z), 1.0 - theta);
    w[z] = s > 0.0 ? std::exp(std::log(s) / (1.0 - theta)) : 0.0;
  }
  const double up = std::log(detail::dot(pair.right_vector, w));
  return {up - std::log(detail::max_entry(pair.right_vector)), up};
}

inline CorrectionTerms zeta_bounds(const JointChannelChain& c, double theta, double theta_prime) {
  detail::check_theta(theta, "zeta_bounds");
  detail::check_theta(theta_prime, "zeta_bounds");
  detail::require_assumption2(c);
  const JointTable p1 = c.initial_table();
  if (c.singleton()) {
    const auto pair = detail::singleton_pair(c, theta);
    std::vector<double> w(c.dim(), 0.0);
    for (std::size_t x = 0; x < c.x_size(); ++x)
      if (p1(x, 0) > 0.0) w[x] = std::pow(p1(x, 0), 1.0 - theta);
    const double up = std::log(detail::dot(pair.right_vector, w));
    return {up - std::log(detail::max_entry(pair.right_vector)), up};
  }
  const auto pair = detail::n_pair(c, theta, theta_prime);
  std::vector<double> w(c.z_size(), 0.0);
  for (std::size_t z = 0; z < c.z_size(); ++z) {
    double a = 0.0, b = 0.0;
    for (std::size_t x = 0; x < c.x_size(); ++x) {
      const double v = p1(x, z);
      if (v > 0.0) {
        a += std::pow(v, 1.0 - theta);
        b += std::pow(v, 1.0 - theta_prime);
      }
    }
    w[z] = a > 0.0 ? a * std::exp(theta / (1.0 - theta_prime) * std::log(b)) : 0.0;
  }
  const double base = std::log(detail::dot(pair.right_vector, w));
  const double lmax = std::log(detail::max_entry(pair.right_vector));
  const CorrectionTerms xi = xi_bounds(c, theta_prime);
  if (theta < 0.0) return {base - lmax - theta * xi.lower, base - theta * xi.upper};
  return {base - lmax - theta * xi.upper, base - theta * xi.lower};
}

inline CorrectionTerms delta_bounds(const SourceChain& s, double theta) {
  return delta_bounds(JointChannelChain::from_source(s), theta);
}

inline CorrectionTerms xi_bounds(const SourceChain& s, double theta) {
  return xi_bounds(JointChannelChain::from_source(s), theta);
}

}  // namespace jscc

#endif  // JSCC_INFO_MEASURES_HPP
