#ifndef JSCC_FINITE_BOUNDS_HPP
#define JSCC_FINITE_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jscc/error.hpp"
#include "jscc/scalar_search.hpp"
#include "jscc/tilted_family.hpp"

namespace jscc {

enum class BoundKind { direct_a1, converse_a1, direct_a2, converse_a2 };

inline std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::direct_a1: return "direct_a1";
    case BoundKind::converse_a1: return "converse_a1";
    case BoundKind::direct_a2: return "direct_a2";
    case BoundKind::converse_a2: return "converse_a2";
  }
  return "?";
}

inline BoundKind parse_bound_kind(const std::string& s) {
  for (BoundKind k : {BoundKind::direct_a1, BoundKind::converse_a1, BoundKind::direct_a2,
                      BoundKind::converse_a2})
    if (to_string(k) == s) return k;
  throw DomainError("unknown bound kind '" + s + "'");
}

inline bool is_direct(BoundKind k) { return k == BoundKind::direct_a1 || k == BoundKind::direct_a2; }

/// k source symbols over n channel uses; the family carries r = (k-1)/(n-1).
struct BoundQuery {
  long k;
  long n;
  TiltedFamily family;
  double R;

  static BoundQuery make(const TiltedFamily& base, long k, long n) {
    if (n < 2 || k < 2) throw DomainError("BoundQuery: need n >= 2 and k >= 2");
    const double r = static_cast<double>(k - 1) / static_cast<double>(n - 1);
    return BoundQuery{k, n, base.with_rate(r), base.log_alphabet()};
  }
};

struct OptimizerOptions {
  int grid_density = 60;
  int sweeps = 3;
};

struct BoundResult {
  BoundKind kind = BoundKind::direct_a1;
  bool vacuous = true;
  double log_prob_bound = 0.0;  // natural log; meaningful when !vacuous
  double s = 0.0;
  double rho = 0.0;  // converse only
};

namespace detail {

constexpr double kDirectVacuityThreshold = -1e-12;
constexpr double kDomainGuard = 1e-9;

/// theta(a(R)) and a(R) of the family used by a converse bound.
struct ConverseAnchor {
  double theta_star;
  double a;
};

inline ConverseAnchor converse_anchor(const TiltedFamily& fam, double R) {
  const double base = fam.u(0.0);
  if (!(R > base)) throw RateOutOfRange("converse bound: R must exceed r H(M) + H(X|Z)");
  double t = 0.0;
  try {
    t = fam.theta_of_R(R);
  } catch (const OutOfRange&) {
    throw RateOutOfRange("converse bound: R must be below r H_0(M) + H_0(X|Z)");
  }
  return {t, fam.u(t)};
}

}  // namespace detail

namespace detail {

inline double direct_a1_at(const BoundQuery& q, const TiltedFamily& down, double s) {
  const double n = static_cast<double>(q.n);
  return -n * s * q.R + (n - 1.0) * down.U(s) + down.cache().source_delta(s).upper +
         down.cache().channel_delta(s).upper;
}

inline double direct_a2_at(const BoundQuery& q, const TiltedFamily& up, double s) {
  const double n = static_cast<double>(q.n);
  return (-n * s * q.R + (n - 1.0) * up.U(s)) / (1.0 - s) + up.cache().source_xi(s).upper +
         up.cache().channel_xi(s).upper;
}

}  // namespace detail

/// Objective of the first direct bound at s in (0, 1).
inline double direct_a1_objective(const BoundQuery& q, double s) {
  return detail::direct_a1_at(q, q.family.with_variant(FamilyVariant::down()), s);
}

/// Objective of the second direct bound at s in [0, 1/2].
inline double direct_a2_objective(const BoundQuery& q, double s) {
  return detail::direct_a2_at(q, q.family.with_variant(FamilyVariant::up()), s);
}

namespace detail {

template <class Objective>
inline double converse_core(const BoundQuery& q, double s, double rho, double theta_star, double a,
                            Objective&& parts) {
  if (!(s > 0.0) || !(rho > theta_star) || !(rho < 1.0) || (1.0 + s) * rho >= 1.0 - kDomainGuard)
    return -std::numeric_limits<double>::infinity();
  const double n1 = static_cast<double>(q.n - 1);
  const auto [u_hi, u_rho, d1, u_star, d2] = parts(s, rho);
  const double ex = n1 * ((rho - theta_star) * a + u_star - u_rho) + d2;
  const double arg = -2.0 * std::exp(ex);
  if (!(arg > -1.0)) return -std::numeric_limits<double>::infinity();
  return (1.0 + s) / s * (-n1 * u_hi / (1.0 + s) + n1 * u_rho + d1 + std::log1p(arg));
}

struct ConverseParts {
  double u_hi;    // U((1+s) rho)
  double u_rho;   // U(rho)
  double d1;
  double u_star;  // U(theta*) in the exponent
  double d2;
};

/// Everything a converse objective needs that does not depend on (s, rho).
struct ConverseContext {
  TiltedFamily main;    // family whose U appears at rho and (1+s) rho
  TiltedFamily anchor_family;
  ConverseAnchor anchor;
  bool second;          // Assumption-2 form
};

inline ConverseContext converse_context(const BoundQuery& q, BoundKind kind) {
  if (kind == BoundKind::converse_a1) {
    const TiltedFamily f = q.family.with_variant(FamilyVariant::down());
    return ConverseContext{f, f, converse_anchor(f, q.R), false};
  }
  const TiltedFamily up = q.family.with_variant(FamilyVariant::up());
  const ConverseAnchor anchor = converse_anchor(up, q.R);
  return ConverseContext{q.family.with_variant(FamilyVariant::fixed(anchor.theta_star)), up, anchor,
                         true};
}

inline double converse_at(const BoundQuery& q, const ConverseContext& ctx, double s, double rho) {
  const double ts = ctx.anchor.theta_star;
  const SpectralCache& c = ctx.main.cache();
  auto channel_terms = [&](double t) {
    return ctx.second ? c.channel_zeta(t, ts) : c.channel_delta(t);
  };
  return converse_core(q, s, rho, ts, ctx.anchor.a, [&](double s_, double r_) {
    const double hi = (1.0 + s_) * r_;
    const double up_hi = c.source_delta(hi).upper + channel_terms(hi).upper;
    const double lo_rho = c.source_delta(r_).lower + channel_terms(r_).lower;
    const double up_star = c.source_delta(ts).upper + channel_terms(ts).upper;
    const double d1 = -up_hi / (1.0 + s_) + lo_rho;
    const double d2 = ((1.0 - r_) * up_star - (1.0 - ts) * lo_rho + (r_ - ts) * q.R) / (1.0 - ts);
    return ConverseParts{ctx.main.U(hi), ctx.main.U(r_), d1, ctx.anchor_family.U(ts), d2};
  });
}

}  // namespace detail

inline double converse_a1_objective(const BoundQuery& q, double s, double rho) {
  return detail::converse_at(q, detail::converse_context(q, BoundKind::converse_a1), s, rho);
}

inline double converse_a2_objective(const BoundQuery& q, double s, double rho) {
  return detail::converse_at(q, detail::converse_context(q, BoundKind::converse_a2), s, rho);
}

/// Re-evaluates a bound expression at an explicit (s, rho).
inline double evaluate_bound(const BoundQuery& q, BoundKind kind, double s, double rho = 0.0) {
  switch (kind) {
    case BoundKind::direct_a1: return direct_a1_objective(q, s);
    case BoundKind::direct_a2: return direct_a2_objective(q, s);
    case BoundKind::converse_a1: return converse_a1_objective(q, s, rho);
    case BoundKind::converse_a2: return converse_a2_objective(q, s, rho);
  }
  return 0.0;
}

namespace detail {

// Minimizes f over a sorted grid, then golden refinement between the
// neighbours of the best grid point.
template <class F>
SearchPoint minimize_on_grid(F&& f, const std::vector<double>& grid, int sweeps) {
  SearchPoint best{grid.front(), std::numeric_limits<double>::infinity()};
  std::size_t bi = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best.value) {
      best = {grid[i], v};
      bi = i;
    }
  }
  double lo = grid[bi == 0 ? 0 : bi - 1];
  double hi = grid[std::min(bi + 1, grid.size() - 1)];
  for (int sweep = 0; sweep < std::max(1, sweeps); ++sweep) {
    const SearchPoint p = golden_minimize(f, lo, hi, 1e-13);
    if (p.value < best.value) best = p;
    const double w = (hi - lo) / 4.0;
    lo = std::max(lo, best.x - w);
    hi = std::min(hi, best.x + w);
  }
  return best;
}

inline std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

inline BoundResult finish_direct(BoundKind kind, const SearchPoint& p) {
  BoundResult r;
  r.kind = kind;
  r.s = p.x;
  r.log_prob_bound = p.value;
  r.vacuous = !(p.value < kDirectVacuityThreshold) || !std::isfinite(p.value);
  return r;
}

}  // namespace detail

inline BoundResult direct_bound_a1(const BoundQuery& q, const OptimizerOptions& opt = {}) {
  if (!check_assumption1(q.family.channel()))
    throw AssumptionViolated("direct_bound_a1 needs Assumption 1");
  const int g = std::max(4, opt.grid_density);
  const auto grid = detail::merged(logspace(1e-6, 0.5, g), linspace(0.5, 1.0 - 1e-6, g / 2));
  const TiltedFamily down = q.family.with_variant(FamilyVariant::down());
  const auto p = detail::minimize_on_grid([&](double s) { return detail::direct_a1_at(q, down, s); }, grid,
                                          opt.sweeps);
  return detail::finish_direct(BoundKind::direct_a1, p);
}

inline BoundResult direct_bound_a2(const BoundQuery& q, const OptimizerOptions& opt = {}) {
  if (!check_assumption2(q.family.channel()))
    throw AssumptionViolated("direct_bound_a2 needs Assumption 2");
  const int g = std::max(4, opt.grid_density);
  auto grid = detail::merged(logspace(1e-6, 0.5, g), {0.0});
  const TiltedFamily up = q.family.with_variant(FamilyVariant::up());
  const auto p = detail::minimize_on_grid([&](double s) { return detail::direct_a2_at(q, up, s); }, grid,
                                          opt.sweeps);
  return detail::finish_direct(BoundKind::direct_a2, p);
}

namespace detail {

template <class F>
BoundResult maximize_converse(BoundKind kind, F&& f, double theta_star,
                              const OptimizerOptions& opt) {
  const int g = std::max(4, opt.grid_density);
  const double span = 1.0 - theta_star;
  const auto s_grid = logspace(1e-6, 10.0, g);
  std::vector<double> offsets = logspace(1e-7 * span, span * (1.0 - 1e-6), g / 2);
  auto rho_grid = merged(linspace(theta_star + 1e-6, 1.0 - 1e-6, g - g / 2), {});
  for (double o : offsets) rho_grid.push_back(theta_star + o);
  rho_grid = merged(rho_grid, {});
  rho_grid.erase(std::remove_if(rho_grid.begin(), rho_grid.end(),
                                [&](double r) { return !(r > theta_star) || !(r < 1.0); }),
                 rho_grid.end());

  BoundResult best;
  best.kind = kind;
  double best_v = -std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < s_grid.size(); ++i)
    for (std::size_t j = 0; j < rho_grid.size(); ++j) {
      const double v = f(s_grid[i], rho_grid[j]);
      if (v > best_v) {
        best_v = v;
        bi = i;
        bj = j;
      }
    }
  if (!std::isfinite(best_v)) return best;

  // the objective has a curved ridge in (s, rho): nest a golden search in
  // rho inside one over log s
  double s = s_grid[bi], rho = rho_grid[bj];
  double ls_lo = std::log(s_grid[bi == 0 ? 0 : bi - 1]);
  double ls_hi = std::log(s_grid[std::min(bi + 1, s_grid.size() - 1)]);
  double r_lo = rho_grid[bj < 3 ? 0 : bj - 3];
  double r_hi = rho_grid[std::min(bj + 3, rho_grid.size() - 1)];
  for (int round = 0; round < std::max(1, opt.sweeps); ++round) {
    auto inner = [&](double ls) {
      return golden_maximize([&](double r) { return f(std::exp(ls), r); }, r_lo, r_hi, 1e-13);
    };
    const SearchPoint ps = golden_maximize([&](double ls) { return inner(ls).value; }, ls_lo, ls_hi, 1e-10);
    const SearchPoint pr = inner(ps.x);
    if (pr.value > best_v) {
      best_v = pr.value;
      s = std::exp(ps.x);
      rho = pr.x;
    }
    // re-center; widen when the optimum sits on a bracket edge
    const double ws = ls_hi - ls_lo, wr = r_hi - r_lo;
    const bool s_edge = std::log(s) - ls_lo < 0.05 * ws || ls_hi - std::log(s) < 0.05 * ws;
    const bool r_edge = rho - r_lo < 0.05 * wr || r_hi - rho < 0.05 * wr;
    const double hs = s_edge ? ws : ws / 4.0, hr = r_edge ? wr : wr / 4.0;
    ls_lo = std::max(std::log(s_grid.front()), std::log(s) - hs);
    ls_hi = std::min(std::log(s_grid.back()), std::log(s) + hs);
    r_lo = std::max(rho_grid.front(), rho - hr);
    r_hi = std::min(rho_grid.back(), rho + hr);
  }
  best.s = s;
  best.rho = rho;
  best.log_prob_bound = f(s, rho);
  best.vacuous = !std::isfinite(best.log_prob_bound);
  return best;
}

}  // namespace detail

inline BoundResult converse_bound_a1(const BoundQuery& q, const OptimizerOptions& opt = {}) {
  if (!check_assumption1(q.family.channel()))
    throw AssumptionViolated("converse_bound_a1 needs Assumption 1");
  const auto ctx = detail::converse_context(q, BoundKind::converse_a1);
  return detail::maximize_converse(
      BoundKind::converse_a1, [&](double s, double rho) { return detail::converse_at(q, ctx, s, rho); },
      ctx.anchor.theta_star, opt);
}

inline BoundResult converse_bound_a2(const BoundQuery& q, const OptimizerOptions& opt = {}) {
  if (!check_assumption2(q.family.channel()))
    throw AssumptionViolated("converse_bound_a2 needs Assumption 2");
  const auto ctx = detail::converse_context(q, BoundKind::converse_a2);
  return detail::maximize_converse(
      BoundKind::converse_a2, [&](double s, double rho) { return detail::converse_at(q, ctx, s, rho); },
      ctx.anchor.theta_star, opt);
}

inline BoundResult compute_bound(const BoundQuery& q, BoundKind kind, const OptimizerOptions& opt = {}) {
  switch (kind) {
    case BoundKind::direct_a1: return direct_bound_a1(q, opt);
    case BoundKind::direct_a2: return direct_bound_a2(q, opt);
    case BoundKind::converse_a1: return converse_bound_a1(q, opt);
    case BoundKind::converse_a2: return converse_bound_a2(q, opt);
  }
  return {};
}

struct BoundRow {
  long n = 0;
  long k = 0;
  BoundResult result;
  std::string error;  // non-empty when the row could not be computed
};

using BoundCurve = std::vector<BoundRow>;

/// k-sweep at fixed n; rows ordered by k, then by the order of kinds.
inline BoundCurve bound_curve(const TiltedFamily& base, long n, long k_min, long k_max, long step,
                              const std::vector<BoundKind>& kinds, const OptimizerOptions& opt = {}) {
  if (k_min > k_max) throw DomainError("bound_curve: k_min > k_max");
  if (step <= 0) throw DomainError("bound_curve: step must be positive");
  BoundCurve out;
  for (long k = k_min; k <= k_max; k += step) {
    for (BoundKind kind : kinds) {
      BoundRow row{n, k, {}, {}};
      row.result.kind = kind;
      try {
        row.result = compute_bound(BoundQuery::make(base, k, n), kind, opt);
      } catch (const RateOutOfRange& e) {
        row.error = e.what();
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

/// n-sweep with k = floor(ratio * n).
inline BoundCurve bound_curve_n(const TiltedFamily& base, const std::vector<long>& ns, double ratio,
                                const std::vector<BoundKind>& kinds, const OptimizerOptions& opt = {}) {
  BoundCurve out;
  for (long n : ns) {
    const long k = static_cast<long>(std::floor(ratio * static_cast<double>(n)));
    for (BoundKind kind : kinds) {
      BoundRow row{n, k, {}, {}};
      row.result.kind = kind;
      try {
        row.result = compute_bound(BoundQuery::make(base, k, n), kind, opt);
      } catch (const RateOutOfRange& e) {
        row.error = e.what();
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace jscc

#endif  // JSCC_FINITE_BOUNDS_HPP
