#ifndef JSCC_ORACLE_HPP
#define JSCC_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "jscc/error.hpp"
#include "jscc/info_measures.hpp"
#include "jscc/markov.hpp"
#include "jscc/matrix.hpp"

namespace jscc {

inline constexpr std::size_t kMaxExplicitSize = 10'000'000;
inline constexpr std::size_t kMaxEncoders = 1'000'000;

// ---------------------------------------------------------------------------
// Exact path distributions.

/// P(X^n, Z^n) as a table with rows x^n and columns z^n. Both indices are
/// mixed-radix with symbol 0 as the least significant digit.
struct ExplicitJoint {
  std::size_t n = 0;
  std::size_t x_size = 0;
  std::size_t z_size = 0;
  JointTable table;

  /// Digit i of a mixed-radix index.
  static std::size_t digit(std::size_t index, std::size_t radix, std::size_t i) {
    for (std::size_t k = 0; k < i; ++k) index /= radix;
    return index % radix;
  }

  /// Law of the i-th state (chain index z * x_size + x).
  std::vector<double> state_marginal(std::size_t i) const {
    if (i >= n) throw DomainError("state_marginal: position out of range");
    std::vector<double> out(x_size * z_size, 0.0);
    for (std::size_t xi = 0; xi < table.x_size(); ++xi) {
      const std::size_t x = digit(xi, x_size, i);
      for (std::size_t zi = 0; zi < table.y_size(); ++zi)
        out[digit(zi, z_size, i) * x_size + x] += table(xi, zi);
    }
    return out;
  }
};

namespace detail {

inline std::size_t checked_power(std::size_t base, std::size_t n) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (out > kMaxExplicitSize / std::max<std::size_t>(base, 1))
      throw TooLarge("explicit table would exceed 1e7 entries");
    out *= base;
  }
  return out;
}

}  // namespace detail

inline ExplicitJoint nfold_joint(const JointChannelChain& c, std::size_t n) {
  if (n == 0) throw DomainError("nfold_joint: n must be >= 1");
  const std::size_t dim = c.dim();
  detail::checked_power(dim, n);
  ExplicitJoint out;
  out.n = n;
  out.x_size = c.x_size();
  out.z_size = c.z_size();
  const std::size_t rows = detail::checked_power(c.x_size(), n);
  const std::size_t cols = detail::checked_power(c.z_size(), n);
  out.table = JointTable(rows, cols);
  const auto& init = c.initial();
  const auto& w = c.matrix();

  // iterative DFS over paths
  std::vector<std::size_t> state(n, 0), xw(n + 1, 1), zw(n + 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    xw[i + 1] = xw[i] * c.x_size();
    zw[i + 1] = zw[i] * c.z_size();
  }
  std::vector<double> prob(n, 0.0);
  std::vector<std::size_t> xi(n, 0), zi(n, 0);
  auto set = [&](std::size_t pos, std::size_t s) {
    state[pos] = s;
    const std::size_t x = s % c.x_size(), z = s / c.x_size();
    const double prev = pos == 0 ? 1.0 : prob[pos - 1];
    prob[pos] = pos == 0 ? init[s] : prev * w(s, state[pos - 1]);
    xi[pos] = (pos == 0 ? 0 : xi[pos - 1]) + x * xw[pos];
    zi[pos] = (pos == 0 ? 0 : zi[pos - 1]) + z * zw[pos];
  };
  std::size_t pos = 0;
  set(0, 0);
  while (true) {
    if (pos + 1 < n && prob[pos] > 0.0) {
      ++pos;
      set(pos, 0);
      continue;
    }
    if (pos + 1 == n) out.table(xi[pos], zi[pos]) = prob[pos];
    // advance
    while (state[pos] + 1 == dim) {
      if (pos == 0) {
        out.table.validate(1e-10);
        return out;
      }
      --pos;
    }
    set(pos, state[pos] + 1);
  }
}

/// Distribution of M^k (index with symbol 0 least significant).
inline std::vector<double> nfold_source(const SourceChain& s, std::size_t k) {
  const ExplicitJoint j = nfold_joint(JointChannelChain::from_source(s), k);
  return j.table.x_marginal();
}

// ---------------------------------------------------------------------------
// Sandwich inequalities of the n-fold entropies.

enum class SandwichFamily { down, up, two_param };

inline const char* to_string(SandwichFamily f) {
  switch (f) {
    case SandwichFamily::down: return "down";
    case SandwichFamily::up: return "up";
    case SandwichFamily::two_param: return "two_param";
  }
  return "?";
}

struct SandwichEntry {
  SandwichFamily family = SandwichFamily::down;
  double theta = 0.0;
  double theta_prime = 0.0;
  std::size_t n = 0;
  double lower = 0.0;
  double middle = 0.0;
  double upper = 0.0;
  double margin() const { return std::min(middle - lower, upper - middle); }
};

struct SandwichReport {
  std::vector<SandwichEntry> entries;
  double worst_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) m = std::min(m, e.margin());
    return m;
  }
  const SandwichEntry* worst() const {
    const SandwichEntry* w = nullptr;
    for (const auto& e : entries)
      if (!w || e.margin() < w->margin()) w = &e;
    return w;
  }
};

namespace detail {

/// log sum_{x,y} P^{1-theta} Q_y^theta over the support of P.
inline double log_tilted_sum(const JointTable& p, std::span<const double> q, double theta) {
  double s = 0.0;
  for (std::size_t x = 0; x < p.x_size(); ++x)
    for (std::size_t y = 0; y < p.y_size(); ++y) {
      const double v = p(x, y);
      if (v > 0.0) s += std::exp((1.0 - theta) * std::log(v) + theta * std::log(q[y]));
    }
  return std::log(s);
}

/// log sum_y (sum_x P^{1-theta})^{1/(1-theta)}.
inline double log_gallager_sum(const JointTable& p, double theta) {
  double s = 0.0;
  for (std::size_t y = 0; y < p.y_size(); ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < p.x_size(); ++x)
      if (p(x, y) > 0.0) inner += std::pow(p(x, y), 1.0 - theta);
    if (inner > 0.0) s += std::exp(std::log(inner) / (1.0 - theta));
  }
  return std::log(s);
}

}  // namespace detail

/// theta H_{1-theta}^down(X^n|Z^n) and friends are compared against
/// (n-1) x [transition-matrix quantity] + [correction lower/upper].
inline SandwichReport sandwich_report(const JointChannelChain& c, const std::vector<double>& thetas,
                                      const std::vector<double>& theta_primes, std::size_t n_max,
                                      std::size_t n_min = 2) {
  if (n_min < 1 || n_min > n_max) throw DomainError("sandwich_report: need 1 <= n_min <= n_max");
  const bool a1 = static_cast<bool>(check_assumption1(c));
  const bool a2 = static_cast<bool>(check_assumption2(c));
  if (!a1 && !a2) throw AssumptionViolated("sandwich_report: chain satisfies neither assumption");
  SandwichReport report;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const ExplicitJoint j = nfold_joint(c, n);
    const auto pz = j.table.y_marginal();
    const double m = static_cast<double>(n - 1);
    for (double t : thetas) {
      if (t == 0.0) continue;
      if (a1) {
        const auto d = delta_bounds(c, t);
        const double base = m * theta_h_down_tm(c, t);
        report.entries.push_back({SandwichFamily::down, t, 0.0, n, base + d.lower,
                                  detail::log_tilted_sum(j.table, pz, t), base + d.upper});
      }
      if (a2) {
        const auto x = xi_bounds(c, t);
        const double base = m * theta_h_up_tm(c, t) / (1.0 - t);
        report.entries.push_back({SandwichFamily::up, t, 0.0, n, base + x.lower,
                                  detail::log_gallager_sum(j.table, t), base + x.upper});
        for (double tp : theta_primes) {
          const auto z = zeta_bounds(c, t, tp);
          const double b2 = m * theta_h_two_param_tm(c, t, tp);
          const auto q = tilted_reference(j.table, tp);
          report.entries.push_back({SandwichFamily::two_param, t, tp, n, b2 + z.lower,
                                    detail::log_tilted_sum(j.table, q, t), b2 + z.upper});
        }
      }
    }
  }
  return report;
}

inline SandwichReport sandwich_check(const JointChannelChain& c, const std::vector<double>& thetas,
                                     const std::vector<double>& theta_primes, std::size_t n_max,
                                     double tol = 1e-9) {
  SandwichReport r = sandwich_report(c, thetas, theta_primes, n_max);
  const SandwichEntry* w = r.worst();
  if (w && w->margin() < -tol) {
    std::ostringstream os;
    os.precision(12);
    os << "sandwich violated: family=" << to_string(w->family) << " theta=" << w->theta
       << " theta'=" << w->theta_prime << " n=" << w->n << " lower=" << w->lower
       << " middle=" << w->middle << " upper=" << w->upper;
    throw SandwichViolation(os.str());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Explicit channels and codes.

/// W(y|x) with rows x and columns y.
class ChannelTable {
public:
  ChannelTable(std::size_t inputs, std::size_t outputs, std::vector<double> w)
      : inputs_(inputs), outputs_(outputs), w_(std::move(w)) {
    if (inputs_ == 0 || outputs_ == 0) throw DomainError("ChannelTable: empty alphabet");
    if (w_.size() != inputs_ * outputs_) throw DomainError("ChannelTable: size mismatch");
    for (std::size_t x = 0; x < inputs_; ++x)
      validate_distribution(std::span<const double>(w_.data() + x * outputs_, outputs_),
                            "ChannelTable row", 1e-10);
  }

  static ChannelTable from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("ChannelTable: empty");
    std::vector<double> w;
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw DomainError("ChannelTable: ragged rows");
      w.insert(w.end(), r.begin(), r.end());
    }
    return ChannelTable(rows.size(), rows.front().size(), std::move(w));
  }

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t outputs() const noexcept { return outputs_; }
  double operator()(std::size_t x, std::size_t y) const { return w_[x * outputs_ + y]; }

  /// sum_x P_X(x) W(y|x).
  std::vector<double> output_law(std::span<const double> px) const {
    std::vector<double> out(outputs_, 0.0);
    for (std::size_t x = 0; x < inputs_; ++x)
      for (std::size_t y = 0; y < outputs_; ++y) out[y] += px[x] * (*this)(x, y);
    return out;
  }

private:
  std::size_t inputs_;
  std::size_t outputs_;
  std::vector<double> w_;
};

/// W((x, z) | x') = P_XZ(x - x' mod |X|, z); output index z * |X| + x.
inline ChannelTable conditional_additive_channel(const JointTable& p_xz) {
  p_xz.validate();
  const std::size_t q = p_xz.x_size(), zs = p_xz.y_size();
  std::vector<double> w(q * q * zs, 0.0);
  for (std::size_t xp = 0; xp < q; ++xp)
    for (std::size_t z = 0; z < zs; ++z)
      for (std::size_t x = 0; x < q; ++x) w[xp * q * zs + z * q + x] = p_xz((x + q - xp) % q, z);
  return ChannelTable(q, q * zs, std::move(w));
}

struct CodeSearchResult {
  double min_error = 1.0;
  std::vector<std::size_t> best_encoder;  // message -> input; MAP decoder implied
};

/// Error of encoder e under MAP decoding: 1 - sum_y max_m P_M(m) W(y|e(m)).
inline double map_error(std::span<const double> pm, const ChannelTable& w,
                        std::span<const std::size_t> encoder) {
  if (encoder.size() != pm.size()) throw DomainError("map_error: encoder length mismatch");
  double correct = 0.0;
  for (std::size_t y = 0; y < w.outputs(); ++y) {
    double best = 0.0;
    for (std::size_t m = 0; m < pm.size(); ++m) best = std::max(best, pm[m] * w(encoder[m], y));
    correct += best;
  }
  return std::clamp(1.0 - correct, 0.0, 1.0);
}

inline CodeSearchResult exhaustive_min_error(std::span<const double> pm, const ChannelTable& w) {
  validate_distribution(pm, "P_M", 1e-10);
  const std::size_t q = w.inputs(), k = pm.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (count > kMaxEncoders / q) throw TooLarge("exhaustive_min_error: more than 1e6 encoders");
    count *= q;
  }
  CodeSearchResult best;
  best.min_error = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> e(k, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t r = idx;
    for (std::size_t m = 0; m < k; ++m) {
      e[m] = r % q;
      r /= q;
    }
    const double err = map_error(pm, w, e);
    if (err < best.min_error) {
      best.min_error = err;
      best.best_encoder = e;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Single-shot bounds. Direct bounds return upper bounds on the minimum error
// probability, converse bounds lower bounds.

enum class DirectForm { down, up };

/// (e^{H_{1-s}(M) + H_{1-s}(X|Z)} / |X|)^s (down) or the same base to the
/// power s/(1-s) with the up conditional entropy.
inline double single_shot_direct(std::span<const double> pm, const JointTable& p_xz, double s,
                                 DirectForm form) {
  validate_distribution(pm, "P_M", 1e-10);
  p_xz.validate();
  const double logx = std::log(static_cast<double>(p_xz.x_size()));
  if (form == DirectForm::down) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("single_shot_direct: s must lie in (0, 1)");
    return std::exp(s * (renyi_entropy(pm, s) + h_down_shot(p_xz, s) - logx));
  }
  if (!(s >= 0.0 && s <= 0.5)) throw DomainError("single_shot_direct: s must lie in [0, 1/2]");
  if (s == 0.0) return 1.0;
  return std::exp(s / (1.0 - s) * (renyi_entropy(pm, s) + h_up_shot(p_xz, s) - logx));
}

namespace detail {

/// Input-output joint P_X x W as a table (rows x, columns y).
inline JointTable input_output_joint(std::span<const double> px, const ChannelTable& w) {
  if (px.size() != w.inputs()) throw DomainError("input distribution has wrong length");
  validate_distribution(px, "P_X", 1e-10);
  JointTable t(w.inputs(), w.outputs());
  for (std::size_t x = 0; x < w.inputs(); ++x)
    for (std::size_t y = 0; y < w.outputs(); ++y) t(x, y) = px[x] * w(x, y);
  return t;
}

}  // namespace detail

/// exp(s H_{1-s}(M) - s D_{1-s}(P_X W || P_X x P_Y)), s in (0, 1).
inline double renyi_direct_bound(std::span<const double> pm, std::span<const double> px,
                                 const ChannelTable& w, double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("renyi_direct_bound: s must lie in (0, 1)");
  validate_distribution(pm, "P_M", 1e-10);
  const JointTable j = detail::input_output_joint(px, w);
  const auto py = j.y_marginal();
  double sum = 0.0;
  for (std::size_t x = 0; x < j.x_size(); ++x)
    for (std::size_t y = 0; y < j.y_size(); ++y)
      if (j(x, y) > 0.0) sum += std::pow(j(x, y), 1.0 - s) * std::pow(px[x] * py[y], s);
  return std::exp(s * renyi_entropy(pm, s) + std::log(sum));
}

/// Gallager form exp(s/(1-s) (H_{1-s}(M) - I^up_{1-s}(X;Y))), s in [0, 1/2].
inline double gallager_bound(std::span<const double> pm, std::span<const double> px,
                             const ChannelTable& w, double s) {
  if (!(s >= 0.0 && s <= 0.5)) throw DomainError("gallager_bound: s must lie in [0, 1/2]");
  validate_distribution(pm, "P_M", 1e-10);
  if (s == 0.0) return 1.0;
  const JointTable j = detail::input_output_joint(px, w);
  double sum = 0.0;
  for (std::size_t y = 0; y < w.outputs(); ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < w.inputs(); ++x)
      if (w(x, y) > 0.0) inner += px[x] * std::pow(w(x, y), 1.0 - s);
    if (inner > 0.0) sum += std::pow(inner, 1.0 / (1.0 - s));
  }
  return std::exp(s / (1.0 - s) * renyi_entropy(pm, s) + std::log(sum));
}

/// P{P_M(M) W(Y|X) <= c W_bar(Y)} + 1/c under P_M x P_X x W.
inline double threshold_direct_bound(std::span<const double> pm, std::span<const double> px,
                                     const ChannelTable& w, double c) {
  if (!(c > 0.0)) throw DomainError("threshold_direct_bound: c must be > 0");
  validate_distribution(pm, "P_M", 1e-10);
  detail::input_output_joint(px, w);
  const auto wbar = w.output_law(px);
  double p = 0.0;
  for (std::size_t m = 0; m < pm.size(); ++m)
    for (std::size_t x = 0; x < w.inputs(); ++x)
      for (std::size_t y = 0; y < w.outputs(); ++y) {
        const double v = pm[m] * w(x, y);
        if (v > 0.0 && px[x] > 0.0 && v <= c * wbar[y]) p += pm[m] * px[x] * w(x, y);
      }
  return p + 1.0 / c;
}

/// P{P_M W < c W_bar} + (1_M x P_X x W_bar){P_M W >= c W_bar}.
inline double two_term_direct_bound(std::span<const double> pm, std::span<const double> px,
                                    const ChannelTable& w, double c) {
  if (!(c > 0.0)) throw DomainError("two_term_direct_bound: c must be > 0");
  validate_distribution(pm, "P_M", 1e-10);
  detail::input_output_joint(px, w);
  const auto wbar = w.output_law(px);
  double first = 0.0, second = 0.0;
  for (std::size_t m = 0; m < pm.size(); ++m)
    for (std::size_t x = 0; x < w.inputs(); ++x) {
      if (px[x] == 0.0) continue;
      for (std::size_t y = 0; y < w.outputs(); ++y) {
        const double v = pm[m] * w(x, y);
        if (v < c * wbar[y]) {
          first += pm[m] * px[x] * w(x, y);
        } else {
          second += px[x] * wbar[y];
        }
      }
    }
  return first + second;
}

/// P{P_M(M) P_{X|Z}(X|Z) <= c/|X|} + 1/c under P_M x P_XZ.
inline double additive_threshold_bound(std::span<const double> pm, const JointTable& p_xz, double c) {
  if (!(c > 0.0)) throw DomainError("additive_threshold_bound: c must be > 0");
  validate_distribution(pm, "P_M", 1e-10);
  p_xz.validate();
  const auto pz = p_xz.y_marginal();
  const double q = static_cast<double>(p_xz.x_size());
  double p = 0.0;
  for (double m : pm)
    for (std::size_t x = 0; x < p_xz.x_size(); ++x)
      for (std::size_t z = 0; z < p_xz.y_size(); ++z) {
        const double v = p_xz(x, z);
        if (v > 0.0 && m > 0.0 && m * v / pz[z] <= c / q) p += m * v;
      }
  return p + 1.0 / c;
}

/// Per-code lower bound sum_m P_M(m) W_{e(m)}{P_M(m) W(Y|e(m)) <= c Q_Y(Y)} - c.
inline double meta_converse_bound(std::span<const double> pm, const ChannelTable& w,
                                  std::span<const std::size_t> encoder, std::span<const double> qy,
                                  double c) {
  if (!(c > 0.0)) throw DomainError("meta_converse_bound: c must be > 0");
  if (encoder.size() != pm.size()) throw DomainError("meta_converse_bound: encoder length mismatch");
  if (qy.size() != w.outputs()) throw DomainError("meta_converse_bound: Q_Y has wrong length");
  validate_distribution(qy, "Q_Y", 1e-10);
  double p = 0.0;
  for (std::size_t m = 0; m < pm.size(); ++m)
    for (std::size_t y = 0; y < w.outputs(); ++y) {
      const double v = pm[m] * w(encoder[m], y);
      if (v > 0.0 && v <= c * qy[y]) p += v;
    }
  return p - c;
}

/// P_M x P_XZ {P_M(M) P_XZ(X,Z) / Q_Z(Z) <= c/|X|} - c.
inline double single_shot_converse(std::span<const double> pm, const JointTable& p_xz,
                                   std::span<const double> qz, double c) {
  if (!(c > 0.0)) throw DomainError("single_shot_converse: c must be > 0");
  validate_distribution(pm, "P_M", 1e-10);
  validate_distribution(qz, "Q_Z", 1e-10);
  p_xz.validate();
  if (qz.size() != p_xz.y_size()) throw DomainError("single_shot_converse: Q_Z has wrong length");
  const double q = static_cast<double>(p_xz.x_size());
  double p = 0.0;
  for (double m : pm)
    for (std::size_t x = 0; x < p_xz.x_size(); ++x)
      for (std::size_t z = 0; z < p_xz.y_size(); ++z) {
        const double v = m * p_xz(x, z);
        if (v <= 0.0) continue;
        if (qz[z] > 0.0 && v / qz[z] <= c / q) p += v;
      }
  return p - c;
}

/// U(theta) = log sum P_M^{1-theta} + log sum P_XZ^{1-theta} Q_Z^theta
/// (support of P only; Q_Z must be positive wherever P_Z is).
inline double single_shot_U(std::span<const double> pm, const JointTable& p_xz,
                            std::span<const double> qz, double theta) {
  double a = 0.0;
  for (double m : pm)
    if (m > 0.0) a += std::exp((1.0 - theta) * std::log(m));
  double b = 0.0;
  for (std::size_t x = 0; x < p_xz.x_size(); ++x)
    for (std::size_t z = 0; z < p_xz.y_size(); ++z) {
      const double v = p_xz(x, z);
      if (v <= 0.0) continue;
      if (!(qz[z] > 0.0)) throw DomainError("single_shot_U: Q_Z vanishes on the support of P_Z");
      b += std::exp((1.0 - theta) * std::log(v) + theta * std::log(qz[z]));
    }
  return std::log(a) + std::log(b);
}

/// Lower bound on log P_js from Renyi-divergence monotonicity; -inf when the
/// logarithm's argument is not positive (vacuous).
inline double single_shot_converse_renyi(std::span<const double> pm, const JointTable& p_xz,
                                         std::span<const double> qz, double s, double rho,
                                         double sigma) {
  if (!(s > 0.0)) throw DomainError("single_shot_converse_renyi: s must be > 0");
  if (!(sigma >= 0.0)) throw DomainError("single_shot_converse_renyi: sigma must be >= 0");
  if (!std::isfinite(rho)) throw DomainError("single_shot_converse_renyi: rho must be finite");
  validate_distribution(pm, "P_M", 1e-10);
  validate_distribution(qz, "Q_Z", 1e-10);
  p_xz.validate();
  if (qz.size() != p_xz.y_size()) throw DomainError("single_shot_converse_renyi: Q_Z has wrong length");
  const double R = std::log(static_cast<double>(p_xz.x_size()));
  auto U = [&](double t) { return single_shot_U(pm, p_xz, qz, t); };
  const double u_rho = U(rho);
  const double e = (U(rho - sigma * (1.0 - rho)) - (1.0 + sigma) * u_rho + sigma * R) / (1.0 + sigma);
  const double arg = 1.0 - 2.0 * std::exp(e);
  if (!(arg > 0.0)) return -std::numeric_limits<double>::infinity();
  return (1.0 + s) / s * (-U(rho * (1.0 + s)) / (1.0 + s) + u_rho + std::log(arg));
}

}  // namespace jscc

#endif  // JSCC_ORACLE_HPP
