#ifndef JSCC_CLI_COMMANDS_HPP
#define JSCC_CLI_COMMANDS_HPP

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "jscc/asymptotics.hpp"
#include "jscc/cli/config.hpp"
#include "jscc/csv.hpp"
#include "jscc/finite_bounds.hpp"
#include "jscc/info_measures.hpp"
#include "jscc/oracle.hpp"
#include "jscc/tilted_family.hpp"

namespace jscc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitComputation = 2;
inline constexpr int kExitVacuous = 3;

struct CommandOptions {
  int grid_density = 60;
};

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Setting {
  SourceChain source;
  JointChannelChain channel;
  bool a1;
  bool a2;
};

inline Setting build(const RunConfig& cfg) {
  SourceChain s = build_source(cfg.source);
  JointChannelChain c = build_channel(cfg.channel);
  const bool a1 = static_cast<bool>(check_assumption1(c));
  const bool a2 = static_cast<bool>(check_assumption2(c));
  return Setting{std::move(s), std::move(c), a1, a2};
}

inline TiltedFamily base_family(const Setting& st, double r) {
  if (st.a2) return TiltedFamily(st.source, st.channel, r, FamilyVariant::up());
  if (st.a1) return TiltedFamily(st.source, st.channel, r, FamilyVariant::down());
  throw AssumptionViolated("channel satisfies neither Assumption 1 nor Assumption 2");
}

inline std::vector<BoundKind> default_kinds(const Setting& st) {
  std::vector<BoundKind> out;
  if (st.a1) out.insert(out.end(), {BoundKind::direct_a1, BoundKind::converse_a1});
  if (st.a2) out.insert(out.end(), {BoundKind::direct_a2, BoundKind::converse_a2});
  return out;
}

inline std::optional<double> asymptotic_ratio(const RunConfig& cfg) {
  if (cfg.r) return cfg.r;
  if (cfg.k && cfg.n) return static_cast<double>(*cfg.k) / static_cast<double>(*cfg.n);
  return std::nullopt;
}

/// E_{2,j}(r) at R = log|X|, with 0 as the marker for rates at or past the
/// optimal rate.
inline double exponent_or_zero(const TiltedFamily& f, double R, AssumptionLevel level) {
  try {
    return exponent_direct(f, R, level);
  } catch (const RateOutOfRange&) {
    return 0.0;
  }
}

inline double md_or_zero(const AsymptoticSummary& s, long k, long n) {
  try {
    return md_approx(s, k, n);
  } catch (const RateOutOfRange&) {
    return 0.0;
  }
}

}  // namespace detail

/// key,value rows: entropy rates, dispersions, capacity, optimal rate,
/// zero-order entropies and the assumption checks.
inline int cmd_measures(const RunConfig& cfg, std::ostream& os) {
  const auto st = detail::build(cfg);
  const auto sum = asymptotic_summary(st.source, st.channel, cfg.r);
  CsvWriter w(os, {"key", "value"});
  w.row() << "entropy_rate_source" << sum.entropy_rate_source;
  w.row() << "dispersion_source" << sum.dispersion_source;
  w.row() << "entropy_rate_channel" << sum.entropy_rate_channel;
  w.row() << "dispersion_channel" << sum.dispersion_channel;
  w.row() << "capacity" << sum.capacity;
  w.row() << "optimal_rate" << sum.optimal_rate;
  w.row() << "dispersion" << sum.dispersion;
  w.row() << "h0_source" << h_zero_source(st.source);
  w.row() << "h0_channel_down" << (st.a1 ? h_zero_tm(st.channel, Variant::down) : detail::kNaN);
  w.row() << "h0_channel_up" << (st.a2 ? h_zero_tm(st.channel, Variant::up) : detail::kNaN);
  w.row() << "assumption1" << st.a1;
  w.row() << "assumption2" << st.a2;
  w.row() << "critical_rate" << (sum.critical_rate ? *sum.critical_rate : detail::kNaN);
  return kExitOk;
}

/// n,k,kind,status,log_bound,exponent,s,rho; exponent = -log_bound/n.
inline int cmd_bounds(const RunConfig& cfg, std::ostream& os, const CommandOptions& opt = {}) {
  const auto st = detail::build(cfg);
  const auto kinds = cfg.kinds.empty() ? detail::default_kinds(st) : cfg.kinds;
  for (BoundKind k : kinds) {
    const bool needs2 = k == BoundKind::direct_a2 || k == BoundKind::converse_a2;
    if (needs2 ? !st.a2 : !st.a1)
      throw ConfigError("field 'kinds': " + to_string(k) + " needs an assumption the channel violates");
  }
  const TiltedFamily base = detail::base_family(st, 1.0);
  const OptimizerOptions oo{opt.grid_density, 3};

  BoundCurve curve;
  if (!cfg.n_list.empty()) {
    if (!cfg.r) throw ConfigError("field 'r' is required with 'n_list'");
    curve = bound_curve_n(base, cfg.n_list, *cfg.r, kinds, oo);
  } else {
    if (!cfg.n) throw ConfigError("field 'n' is required");
    long lo = 0, hi = 0;
    if (cfg.k) {
      lo = hi = *cfg.k;
    } else if (cfg.k_min && cfg.k_max) {
      lo = *cfg.k_min;
      hi = *cfg.k_max;
    } else if (cfg.r) {
      lo = hi = static_cast<long>(std::floor(*cfg.r * static_cast<double>(*cfg.n)));
    } else {
      throw ConfigError("give 'k', 'k_min'/'k_max', or 'r'");
    }
    if (lo > hi) throw ConfigError("field 'k_min': exceeds k_max");
    curve = bound_curve(base, *cfg.n, lo, hi, cfg.k_step, kinds, oo);
  }

  CsvWriter w(os, {"n", "k", "kind", "status", "log_bound", "exponent", "s", "rho"});
  bool any = false;
  for (const auto& row : curve) {
    const auto& r = row.result;
    const bool ok = row.error.empty() && !r.vacuous;
    any = any || ok;
    const char* status = !row.error.empty() ? "rate_out_of_range" : (r.vacuous ? "vacuous" : "ok");
    w.row() << row.n << row.k << to_string(r.kind) << status << (ok ? r.log_prob_bound : detail::kNaN)
            << (ok ? -r.log_prob_bound / static_cast<double>(row.n) : detail::kNaN)
            << (ok ? r.s : detail::kNaN) << (ok && !is_direct(r.kind) ? r.rho : detail::kNaN);
  }
  return any ? kExitOk : kExitVacuous;
}

/// R,assumption,direct,converse_eval,converse_sup,theta_star,critical_rate,status.
inline int cmd_asymptotics(const RunConfig& cfg, std::ostream& os) {
  const auto st = detail::build(cfg);
  const auto r = detail::asymptotic_ratio(cfg);
  if (!r) throw ConfigError("field 'r' (or both 'k' and 'n') is required");
  const TiltedFamily base = detail::base_family(st, *r);
  const double logx = base.log_alphabet();
  const std::vector<double> rates = cfg.rates.empty() ? std::vector<double>{logx} : cfg.rates;
  const double rcr = st.a2 ? critical_rate(base) : detail::kNaN;

  CsvWriter w(os, {"R", "assumption", "direct", "converse_eval", "converse_sup", "theta_star",
                   "critical_rate", "status"});
  bool any = false;
  for (double R : rates) {
    for (AssumptionLevel level : {AssumptionLevel::one, AssumptionLevel::two}) {
      if (level == AssumptionLevel::one ? !st.a1 : !st.a2) continue;
      double direct = 0.0;
      ConverseExponent ce{detail::kNaN, detail::kNaN, detail::kNaN, detail::kNaN};
      std::string status = "ok";
      try {
        direct = exponent_direct(base, R, level);
      } catch (const RateOutOfRange&) {
        status = "rate_below_entropy";
      }
      if (status == "ok") {
        try {
          ce = exponent_converse(base, R, level);
        } catch (const RateOutOfRange&) {
          status = "rate_beyond_zero_order";
        }
      }
      any = any || status != "rate_below_entropy";
      w.row() << R << static_cast<int>(level) << direct << ce.evaluation_form << ce.sup_form
              << ce.theta_star << (level == AssumptionLevel::two ? rcr : detail::kNaN) << status;
    }
  }
  return any ? kExitOk : kExitVacuous;
}

/// The fixed numerical example: W_s = W_c = W(0.1, 0.2), singleton side
/// information, Assumption-2 bounds.
struct ReproduceSetting {
  SourceChain source{binary_chain(0.1, 0.2)};
  JointChannelChain channel{JointChannelChain::additive(binary_chain(0.1, 0.2))};
};

inline const std::vector<long>& default_reproduce_ns() {
  static const std::vector<long> ns{10000, 20000, 50000, 100000, 200000, 500000, 1000000};
  return ns;
}

/// Figure 1: k,direct_a2,converse_a2,nE,E_md,direct_vacuous,converse_vacuous
/// at n = 10000 (values are -log P).
/// Figure 2: n,k,direct_a2,converse_a2,E,E_md_over_n,direct_vacuous,converse_vacuous
/// with k = floor(0.75 n) (values are -log P / n).
inline int cmd_reproduce(int figure, std::ostream& os, const CommandOptions& opt = {},
                         const std::vector<long>& ns = default_reproduce_ns()) {
  if (figure != 1 && figure != 2) throw ConfigError("reproduce: figure must be 1 or 2");
  const ReproduceSetting set;
  const TiltedFamily base(set.source, set.channel, 0.75, FamilyVariant::up());
  const auto summary = asymptotic_summary(set.source, set.channel);
  const double R = base.log_alphabet();
  const OptimizerOptions oo{opt.grid_density, 3};
  bool any = false;

  auto cell = [](const BoundResult& b, double scale) {
    return b.vacuous ? detail::kNaN : -b.log_prob_bound / scale;
  };

  if (figure == 1) {
    const long n = 10000;
    CsvWriter w(os, {"k", "direct_a2", "converse_a2", "nE", "E_md", "direct_vacuous", "converse_vacuous"});
    for (long k = 6000; k <= 8000; k += 100) {
      const auto q = BoundQuery::make(base, k, n);
      const auto d = direct_bound_a2(q, oo);
      const auto c = converse_bound_a2(q, oo);
      any = any || !d.vacuous || !c.vacuous;
      const double rate = static_cast<double>(k) / static_cast<double>(n);
      const double e = detail::exponent_or_zero(base.with_rate(rate), R, AssumptionLevel::two);
      w.row() << k << cell(d, 1.0) << cell(c, 1.0) << static_cast<double>(n) * e
              << detail::md_or_zero(summary, k, n) << d.vacuous << c.vacuous;
    }
  } else {
    const double e = exponent_direct(base, R, AssumptionLevel::two);
    CsvWriter w(os, {"n", "k", "direct_a2", "converse_a2", "E", "E_md_over_n", "direct_vacuous",
                     "converse_vacuous"});
    for (long n : ns) {
      const long k = static_cast<long>(std::floor(0.75 * static_cast<double>(n)));
      const auto q = BoundQuery::make(base, k, n);
      const auto d = direct_bound_a2(q, oo);
      const auto c = converse_bound_a2(q, oo);
      any = any || !d.vacuous || !c.vacuous;
      const double nn = static_cast<double>(n);
      w.row() << n << k << cell(d, nn) << cell(c, nn) << e << detail::md_or_zero(summary, k, n) / nn
              << d.vacuous << c.vacuous;
    }
  }
  return any ? kExitOk : kExitVacuous;
}

inline RunConfig default_oracle_config() {
  RunConfig c;
  c.source.preset = "W(0.1,0.2)";
  c.channel.preset = "W(0.1,0.2)";
  return c;
}

/// chain,family,theta,theta_prime,n,lower,middle,upper,margin for both the
/// source and the channel chain. Exit 2 when some margin is below -1e-9.
inline int cmd_oracle(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto st = detail::build(cfg);
  const std::vector<double> def{-0.7, -0.3, 0.3, 0.7};
  const auto& th = cfg.thetas.empty() ? def : cfg.thetas;
  const auto& tp = cfg.theta_primes.empty() ? def : cfg.theta_primes;
  CsvWriter w(os, {"chain", "family", "theta", "theta_prime", "n", "lower", "middle", "upper", "margin"});
  double worst = std::numeric_limits<double>::infinity();
  auto emit = [&](const char* name, const JointChannelChain& c) {
    const auto rep = sandwich_report(c, th, tp, cfg.n_max);
    for (const auto& e : rep.entries) {
      const bool two = e.family == SandwichFamily::two_param;
      w.row() << name << to_string(e.family) << e.theta << (two ? e.theta_prime : detail::kNaN) << e.n
              << e.lower << e.middle << e.upper << e.margin();
    }
    worst = std::min(worst, rep.worst_margin());
  };
  emit("source", JointChannelChain::from_source(st.source));
  emit("channel", st.channel);
  if (worst < -1e-9) {
    err << "sandwich violated: worst margin " << format_number(worst) << "\n";
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace jscc::cli

#endif  // JSCC_CLI_COMMANDS_HPP
